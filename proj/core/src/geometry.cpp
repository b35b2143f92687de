#include "bundle_lab/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/parallel.hpp"

namespace bundle_lab {

namespace {

cplx on_circle(const FunctionSpec& spec, double t) { return spec(std::polar(1.0, 2.0 * kPi * t)); }

double segment_distance2(cplx p, cplx a, cplx b) {
  const cplx d = b - a;
  const double len2 = std::norm(d);
  double s = len2 > 0.0 ? ((p - a) * std::conj(d)).real() / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  return std::norm(p - (a + s * d));
}

double segment_distance(cplx p, cplx a, cplx b) { return std::sqrt(segment_distance2(p, a, b)); }

double bbox_diameter(const std::vector<cplx>& pts) {
  if (pts.empty()) return 0.0;
  double x0 = pts[0].real(), x1 = x0, y0 = pts[0].imag(), y1 = y0;
  for (auto p : pts) {
    x0 = std::min(x0, p.real());
    x1 = std::max(x1, p.real());
    y0 = std::min(y0, p.imag());
    y1 = std::max(y1, p.imag());
  }
  return std::hypot(x1 - x0, y1 - y0);
}

void refine(const FunctionSpec& spec, double ta, cplx pa, double tb, cplx pb, double limit, int depth,
            std::vector<double>& ts, std::vector<cplx>& ps) {
  if (depth == 0 || std::abs(pb - pa) <= limit) return;
  const double tm = 0.5 * (ta + tb);
  const cplx pm = on_circle(spec, tm);
  refine(spec, ta, pa, tm, pm, limit, depth - 1, ts, ps);
  ts.push_back(tm);
  ps.push_back(pm);
  refine(spec, tm, pm, tb, pb, limit, depth - 1, ts, ps);
}

std::pair<std::vector<double>, std::vector<cplx>> sample_boundary(const FunctionSpec& spec, std::size_t samples) {
  if (samples < 256) throw DomainError("boundary_curve needs at least 256 samples");
  std::vector<double> base_t(samples);
  std::vector<cplx> base(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    base_t[k] = static_cast<double>(k) / static_cast<double>(samples);
    base[k] = on_circle(spec, base_t[k]);
  }
  const double limit = 0.01 * bbox_diameter(base);
  std::vector<double> ts;
  std::vector<cplx> ps;
  for (std::size_t k = 0; k < samples; ++k) {
    ts.push_back(base_t[k]);
    ps.push_back(base[k]);
    const std::size_t n = (k + 1) % samples;
    const double tb = k + 1 == samples ? 1.0 : base_t[n];
    if (limit > 0.0) refine(spec, base_t[k], base[k], tb, base[n], limit, 16, ts, ps);
  }
  return {std::move(ts), std::move(ps)};
}

const char* palette(int index) {
  switch (index) {
    case IndexMap::kBoundaryCell: return "#d9d9d9";
    case 0: return "#ffffff";
    case 1: return "#e41a1c";
    case 2: return "#ffd92f";
    case 3: return "#9ecae1";
    case 4: return "#6baed6";
    case 5: return "#3182bd";
    default: return "#08519c";
  }
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::vector<cplx> boundary_curve(const FunctionSpec& spec, std::size_t samples) {
  return sample_boundary(spec, samples).second;
}

WindingCounter::WindingCounter(const FunctionSpec& spec, std::size_t samples) : spec_(spec) {
  std::tie(t_, curve_) = sample_boundary(spec, samples);
  try {
    rational_ = spec.rational();
  } catch (const DomainError&) {
    rational_.reset();
  }
}

WindingResult WindingCounter::evaluate(cplx omega, double margin, bool cross_check, bool boundary_fallback) const {
  WindingResult r;
  const std::size_t n = curve_.size();
  double d2 = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < n; ++k) d2 = std::min(d2, segment_distance2(omega, curve_[k], curve_[(k + 1) % n]));
  r.distance = std::sqrt(d2);
  if (!(r.distance > margin)) {
    if (boundary_fallback && rational_) {
      r.on_boundary = true;
      r.raw = std::numeric_limits<double>::quiet_NaN();
      r.root_count = static_cast<int>(solve_fiber(*rational_, omega).count());
      r.index = *r.root_count;
      return r;
    }
    throw DomainError("winding_index: target " + format_complex(omega) + " lies within " + fmt(margin) +
                      " of the boundary curve");
  }

  // Increment along one chord, subdividing until the step is small
  // relative to the distance from omega. Squared lengths avoid hypot.
  auto increment = [&](auto&& self, double ta, cplx da, double tb, cplx db, int depth) -> double {
    const double near2 = std::min(std::norm(da), std::norm(db));
    if (std::norm(db - da) < 0.25 * near2 || depth == 0) {
      const cplx q = std::conj(da) * db;
      return std::atan2(q.imag(), q.real());
    }
    const double tm = 0.5 * (ta + tb);
    const cplx dm = on_circle(spec_, tm) - omega;
    return self(self, ta, da, tm, dm, depth - 1) + self(self, tm, dm, tb, db, depth - 1);
  };
  double total = 0.0;
  cplx da = curve_[0] - omega;
  for (std::size_t k = 0; k < n; ++k) {
    const double tb = k + 1 == n ? 1.0 : t_[k + 1];
    const cplx db = curve_[(k + 1) % n] - omega;
    total += increment(increment, t_[k], da, tb, db, 40);
    da = db;
  }
  r.raw = total / (2.0 * kPi);
  r.index = static_cast<int>(std::lround(r.raw));
  if (std::abs(r.raw - r.index) > 0.05) {
    throw ConvergenceError("winding_index: raw winding " + fmt(r.raw) + " at " + format_complex(omega) +
                           " is not near an integer");
  }
  if (cross_check && rational_) {
    const FiberSolution f = solve_fiber(*rational_, omega);
    r.root_count = static_cast<int>(f.count());
    if (*r.root_count != r.index) {
      throw InconsistencyError("winding_index: argument principle gives " + std::to_string(r.index) +
                               " but root count gives " + std::to_string(*r.root_count) + " at " +
                               format_complex(omega));
    }
  }
  return r;
}

int winding_index(const FunctionSpec& spec, cplx omega) { return WindingCounter(spec).evaluate(omega, 1e-9, true, true).index; }

cplx IndexMap::center(std::size_t col, std::size_t row) const {
  const double dx = (bounds.re_max - bounds.re_min) / static_cast<double>(resolution);
  const double dy = (bounds.im_max - bounds.im_min) / static_cast<double>(resolution);
  return {bounds.re_min + (static_cast<double>(col) + 0.5) * dx, bounds.im_min + (static_cast<double>(row) + 0.5) * dy};
}

std::vector<int> IndexMap::distinct_indices() const {
  std::vector<int> out;
  for (int c : cells)
    if (c != kBoundaryCell) out.push_back(c);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

IndexMap index_map(const FunctionSpec& spec, const Bounds& bounds, std::size_t resolution) {
  if (resolution == 0 || resolution > 2048) throw DomainError("index_map resolution must be in [1, 2048]");
  if (!(bounds.re_max > bounds.re_min && bounds.im_max > bounds.im_min)) throw DomainError("index_map: empty bounds");
  const WindingCounter counter(spec);
  IndexMap map;
  map.bounds = bounds;
  map.resolution = resolution;
  map.curve = counter.curve();
  map.cells.assign(resolution * resolution, 0);

  const double dx = (bounds.re_max - bounds.re_min) / static_cast<double>(resolution);
  const double dy = (bounds.im_max - bounds.im_min) / static_cast<double>(resolution);
  const double band = 1.5 * std::hypot(dx, dy);
  const auto res = static_cast<long>(resolution);
  const std::size_t n = map.curve.size();
  std::vector<char> flagged(map.cells.size(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    const cplx a = map.curve[k], b = map.curve[(k + 1) % n];
    const long c0 = std::max(0L, static_cast<long>(std::floor((std::min(a.real(), b.real()) - band - bounds.re_min) / dx)));
    const long c1 = std::min(res - 1, static_cast<long>(std::floor((std::max(a.real(), b.real()) + band - bounds.re_min) / dx)));
    const long r0 = std::max(0L, static_cast<long>(std::floor((std::min(a.imag(), b.imag()) - band - bounds.im_min) / dy)));
    const long r1 = std::min(res - 1, static_cast<long>(std::floor((std::max(a.imag(), b.imag()) + band - bounds.im_min) / dy)));
    for (long r = r0; r <= r1; ++r)
      for (long c = c0; c <= c1; ++c) {
        const std::size_t i = static_cast<std::size_t>(r) * resolution + static_cast<std::size_t>(c);
        if (!flagged[i] && segment_distance(map.center(static_cast<std::size_t>(c), static_cast<std::size_t>(r)), a, b) < band) flagged[i] = 1;
      }
  }

  std::vector<std::size_t> checked(resolution, 0);
  parallel_for(resolution, [&](std::size_t row) {
    for (std::size_t col = 0; col < resolution; ++col) {
      const std::size_t i = row * resolution + col;
      if (flagged[i]) {
        map.cells[i] = IndexMap::kBoundaryCell;
        continue;
      }
      const WindingResult w = counter.evaluate(map.center(col, row));
      map.cells[i] = w.index;
      if (w.root_count) ++checked[row];
    }
  });
  for (auto c : checked) map.cross_checked += c;

  // Flood fill: each 4-connected component must carry a single index.
  std::vector<char> seen(map.cells.size(), 0);
  for (std::size_t s = 0; s < map.cells.size(); ++s) {
    if (seen[s] || map.cells[s] == IndexMap::kBoundaryCell) continue;
    Region region{map.cells[s], 0, s};
    std::deque<std::size_t> queue{s};
    seen[s] = 1;
    while (!queue.empty()) {
      const std::size_t i = queue.front();
      queue.pop_front();
      ++region.cells;
      if (map.cells[i] != region.index) {
        throw InconsistencyError("index_map: region containing cell " + std::to_string(s) + " mixes indices " +
                                 std::to_string(region.index) + " and " + std::to_string(map.cells[i]));
      }
      const std::size_t row = i / resolution, col = i % resolution;
      const std::size_t nb[4] = {col > 0 ? i - 1 : i, col + 1 < resolution ? i + 1 : i,
                                 row > 0 ? i - resolution : i, row + 1 < resolution ? i + resolution : i};
      for (auto j : nb) {
        if (j != i && !seen[j] && map.cells[j] != IndexMap::kBoundaryCell) {
          seen[j] = 1;
          queue.push_back(j);
        }
      }
    }
    map.regions.push_back(region);
  }
  map.branch_values = branch_values(spec);
  return map;
}

std::vector<cplx> branch_values(const FunctionSpec& spec) {
  std::vector<cplx> out;
  for (const auto& c : critical_points(spec)) out.push_back(spec(c.z));
  return out;
}

void emit_svg(const IndexMap& map, std::ostream& os) {
  const double res = static_cast<double>(std::max<std::size_t>(map.resolution, 1));
  const double legend_w = std::max(0.35 * res, 4.0);
  const double px = 800.0 / res;
  const double font = std::max(res / 28.0, 0.4);
  const double dx = (map.bounds.re_max - map.bounds.re_min) / res;
  const double dy = (map.bounds.im_max - map.bounds.im_min) / res;
  auto sx = [&](double re) { return (re - map.bounds.re_min) / dx; };
  auto sy = [&](double im) { return res - (im - map.bounds.im_min) / dy; };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << fmt((res + legend_w) * px)
     << "\" height=\"" << fmt(res * px) << "\" viewBox=\"0 0 " << fmt(res + legend_w) << " " << fmt(res) << "\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"" << fmt(res + legend_w) << "\" height=\"" << fmt(res) << "\" fill=\"#ffffff\"/>\n";
  os << "<g shape-rendering=\"crispEdges\">\n";
  for (std::size_t row = 0; row < map.resolution; ++row) {
    std::size_t col = 0;
    while (col < map.resolution) {
      const int v = map.at(col, row);
      std::size_t end = col + 1;
      while (end < map.resolution && map.at(end, row) == v) ++end;
      if (v != 0) {
        os << "<rect x=\"" << col << "\" y=\"" << fmt(res - static_cast<double>(row) - 1.0) << "\" width=\"" << end - col
           << "\" height=\"1\" fill=\"" << palette(v) << "\"/>\n";
      }
      col = end;
    }
  }
  os << "</g>\n";
  if (!map.curve.empty()) {
    os << "<polygon fill=\"none\" stroke=\"#000000\" stroke-width=\"" << fmt(std::max(res / 400.0, 0.05)) << "\" points=\"";
    for (std::size_t k = 0; k < map.curve.size(); ++k)
      os << (k ? " " : "") << fmt(sx(map.curve[k].real())) << "," << fmt(sy(map.curve[k].imag()));
    os << "\"/>\n";
  }
  for (auto b : map.branch_values) {
    os << "<circle cx=\"" << fmt(sx(b.real())) << "\" cy=\"" << fmt(sy(b.imag())) << "\" r=\"" << fmt(font / 3.0)
       << "\" fill=\"#000000\"/>\n";
  }

  // Legend: every index present plus the boundary band.
  std::vector<int> keys = map.distinct_indices();
  if (std::find(map.cells.begin(), map.cells.end(), IndexMap::kBoundaryCell) != map.cells.end()) {
    keys.push_back(IndexMap::kBoundaryCell);
  }
  const double lx = res + 0.1 * legend_w;
  double ly = font * 1.5;
  os << "<g font-family=\"sans-serif\" font-size=\"" << fmt(font) << "\">\n";
  os << "<text x=\"" << fmt(lx) << "\" y=\"" << fmt(ly) << "\">index</text>\n";
  for (int k : keys) {
    ly += font * 1.6;
    os << "<rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly - font) << "\" width=\"" << fmt(font) << "\" height=\""
       << fmt(font) << "\" fill=\"" << palette(k) << "\" stroke=\"#000000\" stroke-width=\"" << fmt(font / 20.0)
       << "\"/>\n";
    os << "<text x=\"" << fmt(lx + 1.5 * font) << "\" y=\"" << fmt(ly) << "\">"
       << (k == IndexMap::kBoundaryCell ? std::string("boundary") : std::to_string(k)) << "</text>\n";
  }
  if (!map.branch_values.empty()) {
    ly += font * 1.6;
    os << "<circle cx=\"" << fmt(lx + font / 2.0) << "\" cy=\"" << fmt(ly - font / 2.0) << "\" r=\"" << fmt(font / 3.0)
       << "\" fill=\"#000000\"/>\n";
    os << "<text x=\"" << fmt(lx + 1.5 * font) << "\" y=\"" << fmt(ly) << "\">branch value</text>\n";
  }
  os << "</g>\n</svg>\n";
}

}  // namespace bundle_lab
