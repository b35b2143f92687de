#include "bundle_lab_cli/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "bundle_lab/monodromy.hpp"

namespace bundle_lab::cli {

Json number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Json encode(cplx z) { return Json{{"re", number(z.real())}, {"im", number(z.imag())}}; }

Json encode(const std::vector<cplx>& zs) {
  Json a = Json::array();
  for (auto z : zs) a.push_back(encode(z));
  return a;
}

Json encode(const BlaschkeProduct& b) {
  return Json{{"theta", number(b.theta())}, {"zeros", encode(b.zeros())}, {"expression", b.to_string()}};
}

Json encode(const MoebiusTransform& phi) {
  return Json{{"theta", number(phi.theta())}, {"z0", encode(phi.z0())}};
}

Json encode(const GrowthReport& g) {
  return Json{{"probe_limit", g.probe_limit},
              {"sup_val", number(g.sup_val)},
              {"sup_index", g.sup_index},
              {"last_val", number(g.last_val)},
              {"tail_trend", number(g.tail_trend)},
              {"classification", to_string(g.classification)},
              {"certified", g.certified}};
}

Json encode(const RieszReport& r) {
  Json j{{"c1", number(r.c1)},         {"c2", number(r.c2)}, {"cond", number(r.cond)}, {"K", r.K},
         {"n_max", r.n_max},           {"tail", number(r.tail)}, {"verdict", r.verdict}};
  if (r.stability) {
    const auto& s = *r.stability;
    j["stability"] = Json{{"K", s.K},
                          {"n_max", s.n_max},
                          {"c1", number(s.c1)},
                          {"c2", number(s.c2)},
                          {"rel_change_c1", number(s.rel_change_c1)},
                          {"rel_change_c2", number(s.rel_change_c2)}};
  } else {
    j["stability"] = nullptr;
  }
  return j;
}

Json encode(const SimilarityCertificate& c) {
  return Json{{"residual", number(c.residual)},
              {"residual_scale", number(c.residual_scale)},
              {"interior_columns", c.interior_columns},
              {"cond", number(c.cond)},
              {"cond_doubled", number(c.cond_doubled)},
              {"cond_change", number(c.cond_change)},
              {"riesz", encode(c.riesz)},
              {"tail", number(c.tail)},
              {"K", c.K},
              {"n_max", c.n_max},
              {"accepted", c.accepted},
              {"warnings", c.warnings},
              {"status", c.status}};
}

Json encode(const Decomposition& d) {
  Json gens = Json::array();
  for (const auto& g : d.action.generators) gens.push_back(to_string(g));
  Json skipped = Json::array();
  for (const auto& s : d.action.skipped) skipped.push_back(Json{{"branch_value", encode(s.branch_value)}, {"reason", s.reason}});
  Json rejected = Json::array();
  for (const auto& r : d.rejected) rejected.push_back(Json{{"d", r.d}, {"spread", number(r.spread)}});
  std::vector<cplx> h(d.outer.h.coeffs().begin(),
                      d.outer.h.coeffs().begin() + static_cast<std::ptrdiff_t>(d.outer.kept));
  return Json{
      {"m", d.m},
      {"b", encode(d.b)},
      {"h", Json{{"coefficients", encode(h)},
                 {"radius", number(d.outer.radius)},
                 {"sample_count", d.outer.sample_count},
                 {"spread", number(d.outer.spread)},
                 {"tail_decay", number(d.outer.tail_decay)},
                 {"kept", d.outer.kept}}},
      {"residual", number(d.residual)},
      {"test_points", d.test_points},
      {"omega0", encode(d.omega0)},
      {"fiber", encode(d.action.base.points)},
      {"fiber_size", d.fiber_size},
      {"h_index", d.h_index},
      {"monodromy", Json{{"generators", gens},
                         {"branch_values", encode(d.action.branch_values)},
                         {"skipped", skipped},
                         {"closure_size", d.action.closure_size},
                         {"closure_complete", d.action.closure_complete},
                         {"transitive", d.action.transitive}}},
      {"block", d.block},
      {"rejected", rejected},
      {"certificate_id", d.certificate_id}};
}

Json encode(const JordanResult& j) {
  return Json{{"decomposition", encode(j.decomposition)},
              {"certificate", encode(j.certificate)},
              {"h_residual", number(j.h_residual)},
              {"h_residual_scale", number(j.h_residual_scale)},
              {"h_interior_columns", j.h_interior_columns},
              {"accepted", j.accepted}};
}

Json encode(const MoebiusMatch& m) {
  return Json{{"phi", encode(m.phi)},
              {"residual", number(m.residual)},
              {"param_residual", number(m.param_residual)},
              {"seeds", m.seeds}};
}

Json encode(const Verdict& v) {
  Json ev = Json::array();
  for (const auto& e : v.evidence) ev.push_back(encode(e));
  return Json{{"verdict", to_string(v.kind)},
              {"reason", v.reason},
              {"m1", v.m1},
              {"m2", v.m2},
              {"match", v.match ? encode(*v.match) : Json(nullptr)},
              {"evidence", ev}};
}

Json encode(const KaplanskyResult& k) {
  // The doubled verdict shares the single verdict's evidence.
  Json d = encode(k.double_verdict);
  d.erase("evidence");
  return Json{{"double_verdict", d}, {"single_verdict", encode(k.single_verdict)}, {"consistent", k.consistent}};
}

Json encode(const CounterexampleReport& r) {
  Json prof = Json::array();
  for (double x : r.profile) prof.push_back(number(x));
  Json cond = Json::array();
  for (double x : r.cond) cond.push_back(number(x));
  return Json{{"t", number(r.t)},     {"profile", prof},  {"slope", number(r.slope)}, {"growth", number(r.growth)},
              {"ladder", r.ladder},   {"cond", cond},     {"verdict", r.verdict}};
}

Json encode(const IndexMap& map) {
  Json regions = Json::array();
  for (const auto& r : map.regions) regions.push_back(Json{{"index", r.index}, {"cells", r.cells}, {"seed", r.seed}});
  return Json{{"bounds", Json{{"re_min", number(map.bounds.re_min)},
                              {"re_max", number(map.bounds.re_max)},
                              {"im_min", number(map.bounds.im_min)},
                              {"im_max", number(map.bounds.im_max)}}},
              {"resolution", map.resolution},
              {"distinct_indices", map.distinct_indices()},
              {"regions", regions},
              {"branch_values", encode(map.branch_values)},
              {"cross_checked", map.cross_checked},
              {"boundary_cell", IndexMap::kBoundaryCell}};
}

Json encode_grid(const IndexMap& map) {
  Json grid = Json::array();
  for (std::size_t row = 0; row < map.resolution; ++row) {
    Json line = Json::array();
    for (std::size_t col = 0; col < map.resolution; ++col) line.push_back(map.at(col, row));
    grid.push_back(std::move(line));
  }
  Json j = encode(map);
  j["rows"] = grid;
  return j;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << csv_field(fields[i]);
  os << "\r\n";
}

std::string csv_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string write_file(const std::string& dir, const std::string& name, const std::string& content) {
  std::filesystem::create_directories(dir);
  const std::string path = (std::filesystem::path(dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("write failed for " + path);
  return path;
}

}  // namespace bundle_lab::cli
