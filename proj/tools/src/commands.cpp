#include "bundle_lab_cli/commands.hpp"

#include <chrono>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "bundle_lab/frames.hpp"
#include "bundle_lab/version.hpp"
#include "bundle_lab_cli/verify.hpp"

namespace bundle_lab::cli {

namespace {

WeightSequence weights_of(const RunConfig& c) {
  try {
    return WeightSequence::parse(c.str("weights"));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError(std::string("invalid --weights: ") + e.what());
  }
}

FunctionSpec function_of(const RunConfig& c, const std::string& key) {
  try {
    return FunctionSpec::parse(c.str(key));
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("invalid --" + key + ": " + e.what());
  }
}

BlaschkeProduct blaschke_of(const RunConfig& c) {
  const FunctionSpec f = function_of(c, "blaschke");
  auto b = f.as_blaschke();
  if (!b) throw ConfigError("--blaschke must be a blaschke(theta; zeros) expression, got " + c.str("blaschke"));
  return *b;
}

Normalization normalization_of(const RunConfig& c) {
  const std::string n = c.str("norm");
  if (n == "raw") return Normalization::Raw;
  if (n == "beta") return Normalization::Beta;
  if (n == "inverse") return Normalization::Inverse;
  throw ConfigError("--norm must be raw, beta or inverse, got " + n);
}

std::optional<cplx> omega0_of(const RunConfig& c) {
  if (c.str("omega0") == "auto") return std::nullopt;
  return c.complex("omega0");
}

std::string fmt(const char* f, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, x);
  return buf;
}

std::string matrix_csv(const Matrix& m) {
  std::ostringstream os;
  write_matrix_csv(os, m);
  return os.str();
}

Json envelope(const RunConfig& c, Json result, const std::map<std::string, std::string>& files) {
  Json artifacts = Json::array({"result.json"});
  for (const auto& [name, content] : files) artifacts.push_back(name);
  return Json{{"artifacts", artifacts},
              {"command", c.command()},
              {"config", c.values()},
              {"result", std::move(result)},
              {"status", "ok"},
              {"version", kVersion}};
}

int verdict_exit(VerdictKind k) {
  switch (k) {
    case VerdictKind::Similar: return 0;
    case VerdictKind::NotSimilar: return 1;
    case VerdictKind::Inconclusive: return 2;
  }
  return 2;
}

JordanOptions jordan_options(const RunConfig& c) {
  JordanOptions o;
  if (c.has("omega0")) o.decompose.omega0 = omega0_of(c);
  o.douglas.K = c.count("K");
  o.douglas.n_max = c.count("n_max");
  o.douglas.keep_matrix = c.has("emit_matrix") && c.flag("emit_matrix");
  return o;
}

Outcome weights_classify(const RunConfig& c) {
  const WeightSequence w = weights_of(c);
  const std::size_t K = c.count("K");
  const GrowthReport g = growth_classify(w, K);
  Json exponent = nullptr;
  if (auto e = power_law_exponent(w)) exponent = number(*e);

  std::size_t rows = std::min<std::size_t>(K, 1000);
  if (auto mx = w.max_index()) rows = std::min(rows, *mx);
  std::ostringstream csv;
  write_csv_row(csv, {"k", "w_k", "beta_k"});
  for (std::size_t k = 1; k <= rows; ++k) write_csv_row(csv, {std::to_string(k), csv_number(w.weight(k)), csv_number(w.beta(k))});

  Outcome o;
  o.files["weights.csv"] = csv.str();
  o.document = envelope(c,
                        Json{{"weights", w.id()},
                             {"growth", encode(g)},
                             {"power_law_exponent", exponent},
                             {"dual", dual_weights(w).id()},
                             {"rows_written", rows}},
                        o.files);
  o.summary = "weights-classify: " + w.id() + " " + to_string(g.classification) + (g.certified ? " (certified)" : "") +
              ", sup (k+1)|w_k-1| = " + fmt("%.6g", g.sup_val);
  return o;
}

Outcome gram_command(const RunConfig& c) {
  const WeightSequence w = weights_of(c);
  const BlaschkeProduct b = blaschke_of(c);
  const Normalization norm = normalization_of(c);
  const FrameMatrix f = build_frame(b, w, c.count("n_max"), c.count("K"));
  const GramResult g = gram(f, norm);
  const std::size_t m = f.m();
  const auto n = static_cast<Eigen::Index>(m);

  Json first = Json::array();
  for (Eigen::Index i = 0; i < n; ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < n; ++j) row.push_back(encode(g.gram(i, j)));
    first.push_back(row);
  }
  double variation = 0.0, off = 0.0;
  for (Eigen::Index i = 0; i < g.gram.rows(); ++i)
    for (Eigen::Index j = 0; j < g.gram.cols(); ++j) {
      if (i / n == j / n) {
        variation = std::max(variation, std::abs(g.gram(i, j) - g.gram(i % n, j % n)));
      } else {
        off = std::max(off, std::abs(g.gram(i, j)));
      }
    }

  Outcome o;
  o.files["gram.csv"] = matrix_csv(g.gram);
  o.document = envelope(c,
                        Json{{"b", encode(f.b)},
                             {"weights", w.id()},
                             {"K", f.K},
                             {"n_max", f.n_max},
                             {"m", m},
                             {"normalization", to_string(norm)},
                             {"size", f.columns()},
                             {"tail_bound", number(g.tail_bound)},
                             {"first_block", first},
                             {"max_block_variation", number(variation)},
                             {"max_offblock", number(off)}},
                        o.files);
  o.summary = "gram: " + std::to_string(f.columns()) + "x" + std::to_string(f.columns()) + " " + to_string(norm) +
              ", max off-block " + fmt("%.3g", off) + ", block variation " + fmt("%.3g", variation);
  return o;
}

Outcome riesz_command(const RunConfig& c) {
  const WeightSequence w = weights_of(c);
  const BlaschkeProduct b = blaschke_of(c);
  const FrameMatrix f = build_frame(b, w, c.count("n_max"), c.count("K"));
  const RieszReport r = riesz_bounds(f);
  Outcome o;
  o.document = envelope(c, Json{{"b", encode(f.b)}, {"weights", w.id()}, {"riesz", encode(r)}}, o.files);
  o.summary = "riesz: c1 = " + fmt("%.6g", r.c1) + ", c2 = " + fmt("%.6g", r.c2) + ", " + r.verdict;
  return o;
}

Outcome index_map_command(const RunConfig& c) {
  const FunctionSpec f = function_of(c, "fn");
  const auto v = c.reals("bounds");
  if (v.size() != 4) throw ConfigError("--bounds needs four values re_min,re_max,im_min,im_max");
  const Bounds bounds{v[0], v[1], v[2], v[3]};
  const std::size_t res = c.count("res");
  const IndexMap map = index_map(f, bounds, res);
  std::ostringstream svg;
  emit_svg(map, svg);

  Outcome o;
  o.files["index_map.svg"] = svg.str();
  o.files["grid.json"] = encode_grid(map).dump() + "\n";
  o.document = envelope(c, encode(map), o.files);
  std::string idx;
  for (int i : map.distinct_indices()) idx += (idx.empty() ? "" : ",") + std::to_string(i);
  o.summary = "index-map: indices {" + idx + "}, " + std::to_string(map.regions.size()) + " regions, " +
              std::to_string(map.cross_checked) + " cells cross-checked";
  return o;
}

Outcome decompose_command(const RunConfig& c) {
  const FunctionSpec f = function_of(c, "fn");
  DecomposeOptions opt;
  opt.omega0 = omega0_of(c);
  opt.radius = c.real("radius");
  opt.samples = c.count("samples");
  opt.test_points = c.count("test_points");
  opt.seed = c.count("seed");
  const Decomposition d = decompose(f, opt);

  std::ostringstream csv;
  write_csv_row(csv, {"k", "re", "im"});
  for (std::size_t k = 0; k < d.outer.kept; ++k)
    write_csv_row(csv, {std::to_string(k), csv_number(d.outer.h[k].real()), csv_number(d.outer.h[k].imag())});
  Outcome o;
  o.files["h.csv"] = csv.str();
  o.document = envelope(c, encode(d), o.files);
  o.summary = "decompose: m = " + std::to_string(d.m) + ", residual " + fmt("%.3g", d.residual) + ", " + d.certificate_id;
  return o;
}

Outcome jordan_command(const RunConfig& c) {
  const FunctionSpec f = function_of(c, "fn");
  const WeightSequence w = weights_of(c);
  const JordanOptions opt = jordan_options(c);
  const JordanResult j = jordan(f, w, opt);
  Outcome o;
  if (opt.douglas.keep_matrix) o.files["x.csv"] = matrix_csv(j.certificate.x);
  o.document = envelope(c, encode(j), o.files);
  o.summary = "jordan: m = " + std::to_string(j.decomposition.m) + ", certificate " + j.certificate.status +
              ", h identity residual " + fmt("%.3g", j.h_residual);
  return o;
}

Outcome similar_command(const RunConfig& c) {
  const FunctionSpec f1 = function_of(c, "f1"), f2 = function_of(c, "f2");
  const WeightSequence w = weights_of(c);
  const Verdict v = similar(f1, f2, w, jordan_options(c));
  Outcome o;
  o.exit_code = verdict_exit(v.kind);
  o.document = envelope(c, encode(v), o.files);
  o.summary = "similar: " + to_string(v.kind) + " (" + v.reason + ")";
  return o;
}

Outcome kaplansky_command(const RunConfig& c) {
  const FunctionSpec f1 = function_of(c, "f1"), f2 = function_of(c, "f2");
  const WeightSequence w = weights_of(c);
  const KaplanskyResult k = kaplansky(f1, f2, w, jordan_options(c));
  Outcome o;
  o.exit_code = k.consistent ? 0 : 1;
  o.document = envelope(c, encode(k), o.files);
  o.summary = "kaplansky: double " + to_string(k.double_verdict.kind) + ", single " + to_string(k.single_verdict.kind) +
              (k.consistent ? ", consistent" : ", INCONSISTENT");
  return o;
}

Outcome douglas_command(const RunConfig& c) {
  const WeightSequence w = weights_of(c);
  const BlaschkeProduct b = blaschke_of(c);
  DouglasOptions opt;
  opt.K = c.count("K");
  opt.n_max = c.count("n_max");
  opt.keep_matrix = c.flag("emit_matrix");
  const SimilarityCertificate cert = douglas_intertwiner(b, w, opt);
  Outcome o;
  if (opt.keep_matrix) o.files["x.csv"] = matrix_csv(cert.x);
  o.document = envelope(c, Json{{"b", encode(b)}, {"weights", w.id()}, {"certificate", encode(cert)}}, o.files);
  o.summary = "douglas: " + cert.status + ", residual " + fmt("%.3g", cert.residual) + ", cond " + fmt("%.6g", cert.cond) +
              " -> " + fmt("%.6g", cert.cond_doubled);
  return o;
}

Outcome counterexample_command(const RunConfig& c) {
  const WeightSequence w = weights_of(c);
  const double t = c.real("t");
  if (!(t > 0.0 && t < 1.0)) throw ConfigError("--t must lie in (0, 1)");
  const CounterexampleReport r = counterexample_probe(t, w, c.count("n_max"));
  std::ostringstream csv;
  write_csv_row(csv, {"n", "r_n"});
  for (std::size_t n = 0; n < r.profile.size(); ++n) write_csv_row(csv, {std::to_string(n), csv_number(r.profile[n])});
  Outcome o;
  o.files["profile.csv"] = csv.str();
  o.document = envelope(c, encode(r), o.files);
  o.summary = "counterexample: " + r.verdict + " (growth " + fmt("%.4g", r.growth) + ", slope " + fmt("%.3g", r.slope) + ")";
  return o;
}

Outcome verify_command(const RunConfig& c, std::ostream& progress) {
  Json result = run_verify(progress);
  Outcome o;
  const int failed = result["failed"].get<int>();
  const int passed = result["passed"].get<int>();
  o.exit_code = failed == 0 ? 0 : 1;
  o.document = envelope(c, std::move(result), o.files);
  o.summary = "verify: " + std::to_string(passed) + "/" + std::to_string(passed + failed) + " checks passed";
  return o;
}

}  // namespace

Outcome execute(const RunConfig& config, std::ostream& progress) {
  const std::string& cmd = config.command();
  if (cmd == "weights-classify") return weights_classify(config);
  if (cmd == "gram") return gram_command(config);
  if (cmd == "riesz") return riesz_command(config);
  if (cmd == "index-map") return index_map_command(config);
  if (cmd == "decompose") return decompose_command(config);
  if (cmd == "jordan") return jordan_command(config);
  if (cmd == "similar") return similar_command(config);
  if (cmd == "kaplansky") return kaplansky_command(config);
  if (cmd == "douglas") return douglas_command(config);
  if (cmd == "counterexample") return counterexample_command(config);
  if (cmd == "verify") return verify_command(config, progress);
  throw ConfigError("unknown command '" + cmd + "'");
}

Json error_document(const RunConfig& config, const std::string& type, const std::string& message) {
  return Json{{"command", config.command()},
              {"config", config.values()},
              {"error", Json{{"type", type}, {"message", message}}},
              {"status", "error"},
              {"version", kVersion}};
}

int run(const RunConfig& config, std::ostream& summary, std::ostream& progress) {
  const std::string out = config.str("out");
  const auto start = std::chrono::steady_clock::now();
  progress << "bundle-lab " << config.command() << ": running\n";
  Outcome o;
  try {
    o = execute(config, progress);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    std::string type = "error";
    if (dynamic_cast<const TruncationRangeError*>(&e)) type = "truncation_range";
    else if (dynamic_cast<const DomainError*>(&e)) type = "domain";
    else if (dynamic_cast<const ConvergenceError*>(&e)) type = "convergence";
    else if (dynamic_cast<const InconsistencyError*>(&e)) type = "inconsistency";
    write_file(out, "result.json", dump(error_document(config, type, e.what())));
    summary << config.command() << ": error (" << type << "): " << e.what() << "\n";
    return kExitComputation;
  }
  write_file(out, "result.json", dump(o.document));
  for (const auto& [name, content] : o.files) write_file(out, name, content);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  progress << "bundle-lab " << config.command() << ": wrote " << o.files.size() + 1 << " file(s) to " << out << " in "
           << fmt("%.2f", secs) << " s\n";
  summary << o.summary << "\n";
  return o.exit_code;
}

}  // namespace bundle_lab::cli
