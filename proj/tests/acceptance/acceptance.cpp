// Acceptance criteria: one PASS/FAIL line per criterion.
// Usage: acceptance [criterion numbers...]; no arguments runs all twelve.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "bundle_lab/classify.hpp"
#include "bundle_lab/frames.hpp"
#include "bundle_lab/geometry.hpp"
#include "bundle_lab/monodromy.hpp"
#include "bundle_lab/operators.hpp"
#include "bundle_lab/parallel.hpp"

using namespace bundle_lab;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome hardy_orthogonality() {
  const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 40, 256);
  const Matrix g = gram(f, Normalization::Raw).gram;
  Matrix block(2, 2);
  block << 1.0, 1.0, 1.0, 4.0 / 3.0;
  double on = 0.0, off = 0.0;
  for (Eigen::Index r = 0; r < g.rows(); r += 2)
    for (Eigen::Index c = 0; c < g.cols(); c += 2) {
      const Matrix b = g.block(r, c, 2, 2);
      if (r == c) on = std::max(on, (b - block).cwiseAbs().maxCoeff());
      else off = std::max(off, b.cwiseAbs().maxCoeff());
    }
  return {on < 1e-8 && off < 1e-8, fmt("diagonal-block deviation %.2e, off-block max %.2e", on, off)};
}

Outcome left_inverse() {
  const std::vector<std::pair<BlaschkeProduct, WeightSequence>> cases{
      {BlaschkeProduct::identity(), WeightSequence::hardy()},
      {BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy()},
      {BlaschkeProduct({0.3}), WeightSequence::bergman(1.0)},
      {BlaschkeProduct({cplx(0.2, 0.3), -0.4}, 0.7), WeightSequence::nln()},
      {BlaschkeProduct({0.0, cplx(0.0, 0.5), -0.3}), WeightSequence::polygrowth(2.0)}};
  double worst = 0.0;
  for (const auto& [b, w] : cases) worst = std::max(worst, left_inverse_check(b, w, 256).max_deviation);
  return {worst < 1e-10, fmt("worst deviation %.2e over %zu combinations", worst, cases.size())};
}

Outcome douglas() {
  DouglasOptions o;
  o.K = 512;
  o.n_max = 100;
  const auto c = douglas_intertwiner(BlaschkeProduct({0.0, 0.5}), WeightSequence::bergman(1.0), o);
  return {c.residual < 1e-10 && std::abs(c.cond_change) < 0.05,
          fmt("residual %.2e, cond %.6g -> %.6g (%+.2f%%), status %s", c.residual, c.cond, c.cond_doubled,
              100 * c.cond_change, c.status.c_str())};
}

Outcome riesz_stability() {
  const auto r = riesz_bounds(build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::bergman(1.0), 100, 512));
  const auto& s = *r.stability;
  return {r.c1 > 0.0 && std::abs(s.rel_change_c1) < 0.01 && std::abs(s.rel_change_c2) < 0.01,
          fmt("c1 %.6g -> %.6g (%+.3f%%), c2 %.6g -> %.6g (%+.3f%%)", r.c1, s.c1, 100 * s.rel_change_c1, r.c2, s.c2,
              100 * s.rel_change_c2)};
}

Outcome counterexample_divergence() {
  const auto nln = column_norm_profile(0.5, WeightSequence::parse("reciprocal:nln"), 800);
  std::size_t drops = 0;
  for (std::size_t n = 51; n <= 800; ++n)
    if (nln[n] < nln[n - 1]) ++drops;
  const double ratio = nln[800] / nln[50];
  const auto berg = column_norm_profile(0.5, WeightSequence::bergman(1.0), 800);
  const auto [lo, hi] = std::minmax_element(berg.begin() + 50, berg.end());
  const double spread = *hi / *lo;
  return {drops == 0 && ratio > 2.0 && spread < 1.5,
          fmt("reciprocal-nln r800/r50 = %.4g with %zu decreases; bergman max/min = %.4f", ratio, drops, spread)};
}

Outcome claim_inequality() {
  double margin = std::numeric_limits<double>::infinity();
  bool ok = true;
  for (double t : {0.3, 0.5, 0.7})
    for (int N = 1; N <= 5; ++N) {
      const double lhs = claim_norm(t, N), rhs = claim_lower_bound(t, N);
      ok = ok && lhs >= rhs;
      margin = std::min(margin, lhs / rhs);
    }
  const double base = std::abs(claim_norm(0.5, 1) - std::sqrt(5.0 / 3.0));
  return {ok && base < 1e-10, fmt("min ratio lhs/rhs %.4f over 15 cases; |lhs(0.5,1) - sqrt(5/3)| = %.2e", margin, base)};
}

Outcome figure_index_map() {
  const auto h = FunctionSpec::polynomial({2.0, 1.0, 1.0});
  // index_map raises InconsistencyError when the argument principle and the
  // root count disagree on any cell it cross-checks.
  const auto map = index_map(h, {-1.0, 5.0, -3.0, 3.0}, 400);
  std::vector<int> nonzero;
  for (int i : map.distinct_indices())
    if (i > 0) nonzero.push_back(i);
  const int w2 = winding_index(h, 2.0), w166 = winding_index(h, 1.66), w5 = winding_index(h, 5.0);
  const bool ok = nonzero == std::vector<int>{1, 2} && w2 == 1 && w166 == 2 && w5 == 0 && map.cross_checked > 0;
  return {ok, fmt("nonzero indices %zu (%s), winding(2)=%d winding(1.66)=%d winding(5)=%d, %zu cells cross-checked",
                  nonzero.size(), nonzero == std::vector<int>{1, 2} ? "{1,2}" : "other", w2, w166, w5,
                  map.cross_checked)};
}

Outcome decomposition_round_trip() {
  const auto g = FunctionSpec::polynomial({0.0, 1.0, 0.0, 2.0});
  const BlaschkeProduct b({0.0, 0.4});
  const auto f = FunctionSpec::compose(g, FunctionSpec::blaschke(b));
  const auto d = decompose(f);
  // Held-out points independent of the fitting and of the internal residual set.
  std::mt19937_64 rng(424242);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto h = d.h_spec();
  double held = 0.0;
  for (int i = 0; i < 200; ++i) {
    const cplx z = std::polar(0.99 * std::sqrt(u(rng)), 2 * kPi * u(rng));
    held = std::max(held, std::abs(f(z) - h(d.b(z))));
  }
  const auto match = moebius_match(h, g);
  const auto prime = decompose(g);
  const bool ok = d.m == 2 && d.residual < 1e-8 && held < 1e-8 && match && match->param_residual < 1e-6 && prime.m == 1;
  return {ok, fmt("m=%zu, residual %.2e (held-out %.2e), match %s (parameter residual %.2e), m(z+2z^3)=%zu", d.m,
                  d.residual, held, match ? "found" : "none", match ? match->param_residual : -1.0, prime.m)};
}

BlaschkeProduct random_product(std::mt19937_64& rng, int order) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> z;
  while (static_cast<int>(z.size()) < order) {
    const cplx a = std::polar(0.5 * std::sqrt(u(rng)), 2 * kPi * u(rng));
    if (std::all_of(z.begin(), z.end(), [&](cplx b) { return std::abs(a - b) >= 0.15; })) z.push_back(a);
  }
  return BlaschkeProduct(z, 2 * kPi * u(rng));
}

Outcome similarity_consistency() {
  std::mt19937_64 rng(20240601);
  const std::vector<FunctionSpec> outer{FunctionSpec::polynomial({0.0, 1.0, 0.0, 2.0}),
                                        FunctionSpec::polynomial({0.0, 1.0, 0.5}),
                                        FunctionSpec::polynomial({0.2, 1.0, 0.3, 0.4})};
  struct Pair {
    FunctionSpec a, b;
    bool equal;
  };
  std::vector<Pair> pairs;
  for (int i = 0; i < 30; ++i) {
    const bool equal = i < 20;
    const int o1 = 2 + i % 2, o2 = equal ? o1 : 5 - o1;
    const auto& g = outer[static_cast<std::size_t>(i % 3)];
    const auto b1 = random_product(rng, o1);
    const auto b2 = random_product(rng, o2);
    pairs.push_back({FunctionSpec::compose(g, FunctionSpec::blaschke(b1)), FunctionSpec::compose(g, FunctionSpec::blaschke(b2)), equal});
  }
  const auto w = WeightSequence::bergman(1.0);
  std::vector<int> verdict_ok(pairs.size(), 0), consistent(pairs.size(), 0);
  parallel_for(pairs.size(), [&](std::size_t i) {
    try {
      const auto k = kaplansky(pairs[i].a, pairs[i].b, w);
      const auto want = pairs[i].equal ? VerdictKind::Similar : VerdictKind::NotSimilar;
      verdict_ok[i] = k.single_verdict.kind == want;
      consistent[i] = k.consistent;
    } catch (const std::exception& e) {
      std::fprintf(stderr, "pair %zu: %s\n", i, e.what());
    }
  });
  const int eq_ok = static_cast<int>(std::count(verdict_ok.begin(), verdict_ok.begin() + 20, 1));
  const int ne_ok = static_cast<int>(std::count(verdict_ok.begin() + 20, verdict_ok.end(), 1));
  const int cons = static_cast<int>(std::count(consistent.begin(), consistent.end(), 1));
  return {eq_ok == 20 && ne_ok == 10 && cons == 30,
          fmt("equal orders similar %d/20, unequal orders not_similar %d/10, consistent %d/30", eq_ok, ne_ok, cons)};
}

Outcome kernel_inversion() {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 6);
  double worst = 0.0;
  int done = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int m = size(rng);
    std::vector<cplx> pts;
    while (static_cast<int>(pts.size()) < m) {
      const cplx z = std::polar(0.9 * std::sqrt(u(rng)), 2 * kPi * u(rng));
      if (std::all_of(pts.begin(), pts.end(), [&](cplx p) { return std::abs(p - z) > 0.05; })) pts.push_back(z);
    }
    const auto k = kernel_matrix(pts);
    worst = std::max(worst, (k.a * k.inverse - Matrix::Identity(m, m)).cwiseAbs().maxCoeff());
    ++done;
  }
  return {done == 100 && worst < 1e-8, fmt("%d inversions, worst |A A^-1 - I| = %.2e", done, worst)};
}

Outcome cpb_identity() {
  const std::vector<std::pair<BlaschkeProduct, WeightSequence>> cases{
      {BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy()},
      {BlaschkeProduct({0.0, cplx(0.0, 0.3)}), WeightSequence::bergman(1.0)},
      {BlaschkeProduct({0.0, cplx(-0.4, 0.2)}, 0.3), WeightSequence::bergman(2.0)}};
  double worst = 0.0;
  for (const auto& [b, w] : cases) worst = std::max(worst, cpb_check(b, w, 30, 512).max_deviation);
  return {worst < 1e-8, fmt("worst entrywise deviation %.2e over %zu combinations", worst, cases.size())};
}

Outcome commutant_transport() {
  double worst = 0.0;
  for (const auto& w : {WeightSequence::hardy(), WeightSequence::bergman(1.0), WeightSequence::polygrowth(2.0),
                        WeightSequence::nln()})
    worst = std::max(worst, commutant_transport_check(w, 256).max_deviation);
  return {worst < 1e-12, fmt("worst entrywise deviation %.2e over 4 presets", worst)};
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "Hardy orthogonality of the raw frame", 5, hardy_orthogonality},
      {2, "left-inverse identity", 5, left_inverse},
      {3, "Douglas intertwiner", 60, douglas},
      {4, "Riesz bound stability", 120, riesz_stability},
      {5, "counterexample divergence", 600, counterexample_divergence},
      {6, "claim inequality", 1, claim_inequality},
      {7, "index map of lambda^2+lambda+2", 60, figure_index_map},
      {8, "decomposition round trip", 60, decomposition_round_trip},
      {9, "similarity and doubled-operator consistency", 900, similarity_consistency},
      {10, "kernel matrix inversion", 5, kernel_inversion},
      {11, "scaled-shift Gram identity", 60, cpb_identity},
      {12, "commutant transport", 1, commutant_transport},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
  int failed = 0;
  for (const auto& c : criteria()) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_seconds;
    const bool pass = o.pass && in_time;
    if (!pass) ++failed;
    std::printf("criterion %2d %s: %s; %.2f s of %.0f s budget%s\n", c.id, pass ? "PASS" : "FAIL", c.title.c_str(), secs,
                c.budget_seconds, in_time ? "" : " (over budget)");
    std::printf("             %s\n", o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
