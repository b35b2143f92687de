#include "bundle_lab_cli/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/classify.hpp"
#include "bundle_lab/frames.hpp"
#include "bundle_lab/geometry.hpp"
#include "bundle_lab/operators.hpp"
#include "bundle_lab_cli/commands.hpp"
#include "bundle_lab_cli/schema.hpp"

namespace bundle_lab::cli {

namespace {

std::string g(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

CheckResult check(bool ok, std::string detail) { return {ok, std::move(detail)}; }

const char* kRoundTrip = "compose(poly(0,1,0,2),blaschke(0;0,0.4))";

JordanOptions small_jordan() {
  JordanOptions o;
  o.douglas.K = 256;
  o.douglas.n_max = 50;
  return o;
}

std::vector<Check> weights_checks() {
  return {
      {"weights", "bergman growth constant",
       [] {
         const auto r = growth_classify(WeightSequence::bergman(1.0), 10000);
         return check(std::abs(r.sup_val - 1.0) < 0.01 && r.classification == GrowthClass::Polynomial,
                      "sup_val " + g(r.sup_val));
       }},
      {"weights", "dual involution",
       [] {
         for (const char* id : {"hardy", "bergman:alpha=1", "polygrowth:M=2", "nln"}) {
           const auto w = WeightSequence::parse(id);
           const auto dd = dual_weights(dual_weights(w));
           for (std::size_t k : {1u, 10u, 500u})
             if (dd.weight(k) != w.weight(k)) return check(false, std::string(id) + " differs at k=" + std::to_string(k));
         }
         return check(true, "4 presets");
       }},
  };
}

std::vector<Check> series_checks() {
  return {
      {"series", "expression round trip",
       [] {
         for (const char* e : {"poly(2,1,1)", kRoundTrip, "sum(z,scale(0.5i;star(poly(1,2i))))"}) {
           const auto a = FunctionSpec::parse(e).to_string();
           if (FunctionSpec::parse(a).to_string() != a) return check(false, e);
         }
         return check(true, "3 expressions");
       }},
      {"series", "Taylor coefficients of a composition",
       [] {
         const auto f = FunctionSpec::parse(kRoundTrip);
         const PowerSeries s = taylor(f, 200);
         const cplx z{0.3, -0.2};
         const double d = std::abs(eval(s, z) - f(z));
         return check(d < 1e-12, "deviation " + g(d));
       }},
  };
}

std::vector<Check> blaschke_checks() {
  return {
      {"blaschke", "Moebius inverse",
       [] {
         const MoebiusTransform phi({0.3, -0.4}, 1.1);
         const MoebiusTransform inv = moebius_inverse(phi);
         const cplx z{0.2, 0.5};
         const double d = std::abs(phi(inv(z)) - z);
         return check(d < 1e-14, "deviation " + g(d));
       }},
      {"blaschke", "fiber size equals order",
       [] {
         const auto f = FunctionSpec::blaschke(BlaschkeProduct({0.0, 0.5, {-0.3, 0.2}}));
         const auto n = solve_fiber(f, {0.2, 0.1}).count();
         return check(n == 3, std::to_string(n) + " preimages");
       }},
  };
}

std::vector<Check> operator_checks() {
  return {
      {"operators", "left inverse identity",
       [] {
         double worst = 0.0;
         worst = std::max(worst, left_inverse_check(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 128).max_deviation);
         worst = std::max(worst, left_inverse_check(BlaschkeProduct({0.3}), WeightSequence::bergman(1.0), 128).max_deviation);
         return check(worst < 1e-10, "max deviation " + g(worst));
       }},
      {"operators", "commutant transport",
       [] {
         double worst = 0.0;
         for (const char* id : {"hardy", "bergman:alpha=1", "polygrowth:M=2", "nln"})
           worst = std::max(worst, commutant_transport_check(WeightSequence::parse(id), 128).max_deviation);
         return check(worst < 1e-12, "max deviation " + g(worst));
       }},
  };
}

std::vector<Check> frame_checks() {
  return {
      {"frames", "Hardy Gram blocks",
       [] {
         const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 40, 256);
         const Matrix gm = gram(f, Normalization::Raw).gram;
         double worst = 0.0;
         const cplx want[2][2] = {{1.0, 1.0}, {1.0, 4.0 / 3.0}};
         for (Eigen::Index i = 0; i < gm.rows(); ++i)
           for (Eigen::Index j = 0; j < gm.cols(); ++j) {
             const cplx expect = i / 2 == j / 2 ? want[i % 2][j % 2] : cplx{};
             worst = std::max(worst, std::abs(gm(i, j) - expect));
           }
         return check(worst < 1e-8, "max deviation " + g(worst));
       }},
      {"frames", "Riesz bounds of the identity frame",
       [] {
         const auto r = riesz_bounds_at(build_frame(BlaschkeProduct::identity(), WeightSequence::bergman(1.0), 40, 128));
         return check(std::abs(r.c1 - 1.0) < 1e-12 && std::abs(r.c2 - 1.0) < 1e-12, "c1 " + g(r.c1) + ", c2 " + g(r.c2));
       }},
      {"frames", "CPB Gram identity",
       [] {
         const double d = cpb_check(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 20, 256).max_deviation;
         return check(d < 1e-8, "max deviation " + g(d));
       }},
      {"frames", "Moebius duality pairing",
       [] {
         const auto r = moebius_duality_check(0.5, WeightSequence::bergman(1.0), 20, 256);
         return check(r.max_deviation < 1e-8 && std::abs(r.scale - r.expected_scale) < 1e-8,
                      "deviation " + g(r.max_deviation) + ", scale " + g(r.scale));
       }},
      {"frames", "kernel matrix inversion",
       [] {
         std::mt19937_64 rng(7);
         std::uniform_real_distribution<double> u(0.0, 1.0);
         double worst = 0.0;
         for (int trial = 0; trial < 20; ++trial) {
           std::vector<cplx> pts;
           for (int k = 0; k < 1 + trial % 6; ++k) pts.push_back(std::polar(0.9 * std::sqrt(u(rng)), 2.0 * kPi * u(rng)));
           const auto km = kernel_matrix(pts);
           const auto n = static_cast<Eigen::Index>(pts.size());
           worst = std::max(worst, (km.a * km.inverse - Matrix::Identity(n, n)).cwiseAbs().maxCoeff());
         }
         return check(worst < 1e-8, "max deviation " + g(worst));
       }},
      {"frames", "claim inequality",
       [] {
         for (double t : {0.3, 0.5, 0.7})
           for (int N = 1; N <= 5; ++N)
             if (claim_norm(t, N) < claim_lower_bound(t, N)) return check(false, "fails at t=" + g(t) + ", N=" + std::to_string(N));
         const double d = std::abs(claim_norm(0.5, 1) - std::sqrt(5.0 / 3.0));
         return check(d < 1e-10, "t=0.5, N=1 deviation " + g(d));
       }},
  };
}

std::vector<Check> geometry_checks() {
  return {
      {"geometry", "winding probes",
       [] {
         const auto h = FunctionSpec::parse("poly(2,1,1)");
         const int a = winding_index(h, 2.0), b = winding_index(h, 1.66), c = winding_index(h, 5.0);
         return check(a == 1 && b == 2 && c == 0,
                      std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c));
       }},
      {"geometry", "index map of z is a disk",
       [] {
         const auto map = index_map(FunctionSpec(), Bounds{-1.5, 1.5, -1.5, 1.5}, 64);
         const auto d = map.distinct_indices();
         return check(d == std::vector<int>{0, 1}, std::to_string(map.regions.size()) + " regions");
       }},
      {"geometry", "SVG determinism",
       [] {
         const auto map = index_map(FunctionSpec::parse("poly(2,1,1)"), Bounds{-1, 5, -3, 3}, 48);
         std::ostringstream a, b;
         emit_svg(map, a);
         emit_svg(map, b);
         return check(a.str() == b.str() && !a.str().empty(), std::to_string(a.str().size()) + " bytes");
       }},
  };
}

std::vector<Check> monodromy_checks() {
  return {
      {"monodromy", "decomposition round trip",
       [] {
         const auto d = decompose(FunctionSpec::parse(kRoundTrip));
         const auto m = moebius_match(d.h_spec(), FunctionSpec::parse("poly(0,1,0,2)"));
         return check(d.m == 2 && d.residual < 1e-8 && m.has_value(),
                      "m " + std::to_string(d.m) + ", residual " + g(d.residual));
       }},
      {"monodromy", "indecomposable input",
       [] {
         const auto d = decompose(FunctionSpec::parse("poly(0,1,0,2)"));
         return check(d.m == 1, "m " + std::to_string(d.m));
       }},
      {"monodromy", "base point independence",
       [] {
         const auto f = FunctionSpec::parse(kRoundTrip);
         const auto a = decompose(f);
         DecomposeOptions o;
         o.omega0 = a.omega0 + cplx{0.0, 0.05};
         const auto b = decompose(f, o);
         const auto m = moebius_match(a.h_spec(), b.h_spec());
         return check(a.m == b.m && m.has_value(), "m " + std::to_string(a.m) + " and " + std::to_string(b.m));
       }},
  };
}

std::vector<Check> classify_checks() {
  return {
      {"classify", "Douglas certificate",
       [] {
         DouglasOptions o;
         o.K = 256;
         o.n_max = 40;
         const auto c = douglas_intertwiner(BlaschkeProduct({0.0, 0.5}), WeightSequence::bergman(1.0), o);
         return check(c.accepted && c.residual < 1e-10, c.status + ", residual " + g(c.residual));
       }},
      {"classify", "Moebius match by construction",
       [] {
         const auto m = moebius_match(FunctionSpec::parse("poly(0,0,1)"), FunctionSpec::parse("compose(poly(0,0,1),blaschke(0;0.3))"));
         return check(m && std::abs(m->phi.z0() - cplx{0.3}) < 1e-6 && m->phi.theta() < 1e-6,
                      m ? "z0 " + format_complex(m->phi.z0()) : std::string("no match"));
       }},
      {"classify", "verdict symmetry",
       [] {
         const auto w = WeightSequence::bergman(1.0);
         const auto a = FunctionSpec::parse(kRoundTrip);
         const auto b = FunctionSpec::parse("compose(poly(0,1,0,2),blaschke(0;0.2,-0.5))");
         const auto v1 = similar(a, b, w, small_jordan()), v2 = similar(b, a, w, small_jordan());
         return check(v1.kind == v2.kind && v1.kind == VerdictKind::Similar, to_string(v1.kind) + " / " + to_string(v2.kind));
       }},
      {"classify", "Moebius precomposition invariance",
       [] {
         const auto a = FunctionSpec::parse(kRoundTrip);
         const auto b = FunctionSpec::compose(a, FunctionSpec::blaschke(BlaschkeProduct({cplx{0.1, 0.25}}, 0.7)));
         const auto v = similar(a, b, WeightSequence::bergman(1.0), small_jordan());
         return check(v.kind == VerdictKind::Similar, to_string(v.kind) + " (" + v.reason + ")");
       }},
      {"classify", "Kaplansky consistency",
       [] {
         const auto w = WeightSequence::bergman(1.0);
         const auto a = FunctionSpec::parse(kRoundTrip);
         const auto b = FunctionSpec::parse("compose(poly(0,1,0,2),blaschke(0;0.2,-0.5,0.1i))");
         const auto k1 = kaplansky(a, b, w, small_jordan());
         return check(k1.consistent && k1.single_verdict.kind == VerdictKind::NotSimilar,
                      "single " + to_string(k1.single_verdict.kind) + ", double " + to_string(k1.double_verdict.kind));
       }},
      {"classify", "counterexample probe",
       [] {
         const auto a = counterexample_probe(0.5, WeightSequence::bergman(1.0), 400);
         const auto b = counterexample_probe(0.5, WeightSequence::parse("reciprocal:nln"), 400);
         return check(a.verdict == "similarity-consistent" && b.verdict == "no bounded similarity at probed scales",
                      "bergman " + a.verdict + "; reciprocal-nln " + b.verdict);
       }},
  };
}

std::vector<Check> cli_checks() {
  return {
      {"cli", "result documents validate",
       [] {
         std::ostringstream sink;
         std::size_t n = 0;
         for (const auto& [cmd, flags] : std::vector<std::pair<std::string, std::map<std::string, std::string>>>{
                  {"weights-classify", {{"K", "1000"}}},
                  {"riesz", {{"K", "128"}, {"n_max", "20"}}},
                  {"gram", {{"K", "64"}, {"n_max", "8"}}},
                  {"decompose", {{"fn", "poly(0,0,1)"}}}}) {
           const Outcome o = execute(RunConfig::resolve(cmd, {}, flags), sink);
           const auto errs = validate(o.document, schema_for(cmd));
           if (!errs.empty()) return check(false, cmd + ": " + errs.front());
           if (Json::parse(dump(o.document)) != o.document) return check(false, cmd + ": JSON round trip lost data");
           ++n;
         }
         return check(true, std::to_string(n) + " documents");
       }},
      {"cli", "config errors carry positions",
       [] {
         try {
           parse_config("[input]\nweights = hardy\nbogus = 1\n");
         } catch (const ConfigError& e) {
           return check(e.line() == 3 && e.column() == 1, e.what());
         }
         return check(false, "unknown key accepted");
       }},
  };
}

}  // namespace

std::vector<Check> verify_suite() {
  std::vector<Check> all;
  for (auto group : {weights_checks(), series_checks(), blaschke_checks(), operator_checks(), frame_checks(),
                     geometry_checks(), monodromy_checks(), classify_checks(), cli_checks()})
    for (auto& c : group) all.push_back(std::move(c));
  return all;
}

Json run_verify(std::ostream& progress) {
  const auto suite = verify_suite();
  Json checks = Json::array();
  int passed = 0, failed = 0;
  for (std::size_t i = 0; i < suite.size(); ++i) {
    const Check& c = suite[i];
    const auto start = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = c.run();
    } catch (const std::exception& e) {
      r = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    (r.passed ? passed : failed)++;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f s", secs);
    progress << "[" << i + 1 << "/" << suite.size() << "] " << c.module << ": " << c.name << " ... "
             << (r.passed ? "PASS" : "FAIL") << " (" << r.detail << ", " << buf << ")\n";
    checks.push_back(Json{{"module", c.module}, {"name", c.name}, {"passed", r.passed}, {"detail", r.detail}});
  }
  return Json{{"checks", checks}, {"passed", passed}, {"failed", failed}};
}

}  // namespace bundle_lab::cli
