#include "bundle_lab/monodromy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

#include <fftw3.h>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/geometry.hpp"

namespace bundle_lab {

namespace {

constexpr double kMinSeparation = 1e-6;

double min_separation(const std::vector<cplx>& pts) {
  double s = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) s = std::min(s, std::abs(pts[i] - pts[j]));
  return s;
}

bool lex_less(cplx a, cplx b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); }

std::vector<cplx> dedup_sorted(std::vector<cplx> v, double tol) {
  std::sort(v.begin(), v.end(), lex_less);
  std::vector<cplx> out;
  for (auto x : v)
    if (std::none_of(out.begin(), out.end(), [&](cplx y) { return std::abs(x - y) < tol; })) out.push_back(x);
  return out;
}

// Newton on f(z) = target from z; returns false when it does not settle.
bool newton(const FunctionSpec& f, cplx& z, cplx target) {
  for (int it = 0; it < 12; ++it) {
    auto [v, d] = f.eval_with_derivative(z);
    if (d == cplx{}) return false;
    const cplx step = (v - target) / d;
    z -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(z))) break;
  }
  return std::abs(f(z) - target) <= 1e-11 * (1.0 + std::abs(target));
}

void track_chord(const FunctionSpec& f, std::vector<cplx>& pts, cplx wa, cplx wb) {
  if (pts.empty() || wa == wb) return;
  double running = pts.size() > 1 ? min_separation(pts) : 1.0;
  double s = 0.0, h = 0.125;
  std::vector<cplx> trial(pts.size());
  while (s < 1.0) {
    const double step = std::min(h, 1.0 - s);
    const cplx from = wa + s * (wb - wa);
    const cplx target = wa + (s + step) * (wb - wa);
    bool ok = true;
    for (std::size_t i = 0; i < pts.size() && ok; ++i) {
      auto [v, d] = f.eval_with_derivative(pts[i]);
      if (d == cplx{}) {
        ok = false;
        break;
      }
      // Euler predictor from the current point, then Newton.
      cplx z = pts[i] + (target - v) / d;
      ok = newton(f, z, target) && std::abs(z - pts[i]) <= 0.25 * running;
      trial[i] = z;
    }
    if (ok && pts.size() > 1) {
      const double sep = min_separation(trial);
      ok = sep >= 0.5 * running;
      if (ok) running = std::min(running, sep);
    }
    if (ok) {
      pts = trial;
      s += step;
      h = std::min(2.0 * step, 0.25);
      for (auto z : pts)
        if (std::abs(z) >= 1.0) throw DomainError("track_fiber: a tracked point left the disk at " + format_complex(z));
    } else {
      h = 0.5 * step;
      if (h < 1e-12) throw ConvergenceError("track_fiber: step-size underflow near " + format_complex(from));
    }
    if (pts.size() > 1 && running < kMinSeparation) {
      throw ConvergenceError("track_fiber: two tracked points collided near " + format_complex(from));
    }
  }
}

Permutation match(const std::vector<cplx>& end, const std::vector<cplx>& base) {
  const double sep = base.size() > 1 ? min_separation(base) : 1.0;
  Permutation p(end.size());
  std::vector<bool> used(base.size(), false);
  for (std::size_t i = 0; i < end.size(); ++i) {
    std::size_t best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < base.size(); ++j) {
      const double d = std::abs(end[i] - base[j]);
      if (d < bd) {
        bd = d;
        best = j;
      }
    }
    if (bd > 1e-3 * sep || used[best]) throw ConvergenceError("monodromy: loop did not close on the base fiber");
    used[best] = true;
    p[i] = best;
  }
  return p;
}

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t a) {
    while (parent[a] != a) a = parent[a] = parent[parent[a]];
    return a;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent[b] = a;
    return true;
  }
};

// Finest generator-stable partition in which `merged` lies in one class.
std::optional<BlockSystem> closure(const std::vector<Permutation>& gens, std::size_t n,
                                   const std::vector<std::size_t>& merged) {
  UnionFind uf(n);
  for (std::size_t i = 1; i < merged.size(); ++i) uf.unite(merged[0], merged[i]);
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& g : gens)
      for (std::size_t a = 0; a < n; ++a) changed |= uf.unite(g[a], g[uf.find(a)]);
  }
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<long> slot(n, -1);
  for (std::size_t a = 0; a < n; ++a) {
    const std::size_t r = uf.find(a);
    if (slot[r] < 0) {
      slot[r] = static_cast<long>(blocks.size());
      blocks.emplace_back();
    }
    blocks[static_cast<std::size_t>(slot[r])].push_back(a);
  }
  const std::size_t d = blocks.front().size();
  for (const auto& b : blocks)
    if (b.size() != d) return std::nullopt;
  return BlockSystem{blocks, d, d == 1 || d == n};
}

std::mutex& fftw_planner_mutex() {
  static std::mutex m;
  return m;
}

std::string hex64(std::uint64_t v) {
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

Permutation compose(const Permutation& a, const Permutation& b) {
  Permutation c(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) c[i] = a[b[i]];
  return c;
}

Permutation inverse(const Permutation& p) {
  Permutation q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[p[i]] = i;
  return q;
}

std::string to_string(const Permutation& p) {
  std::string s = "[";
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i] + 1);
  return s + "]";
}

Fiber base_fiber(const FunctionSpec& spec, cplx omega0) {
  for (auto b : branch_values(spec)) {
    if (std::abs(b - omega0) <= 1e-3) {
      throw DomainError("base_fiber: " + format_complex(omega0) + " is within 1e-3 of the branch value " +
                        format_complex(b));
    }
  }
  const WindingResult w = WindingCounter(spec).evaluate(omega0, 1e-3, false);
  const FiberSolution sol = solve_fiber(spec, omega0);
  Fiber f{omega0, {}};
  for (const auto& r : sol.roots) {
    if (r.multiplicity != 1) throw DomainError("base_fiber: repeated preimage at " + format_complex(r.z));
    f.points.push_back(r.z);
  }
  if (static_cast<int>(f.points.size()) != w.index) {
    throw InconsistencyError("base_fiber: " + std::to_string(f.points.size()) + " preimages but winding index " +
                             std::to_string(w.index));
  }
  if (f.points.size() > 1 && min_separation(f.points) <= kMinSeparation) {
    throw DomainError("base_fiber: preimages closer than 1e-6; choose another base point");
  }
  return f;
}

Fiber track_fiber(const FunctionSpec& spec, const Fiber& fiber, const std::vector<cplx>& path) {
  Fiber out = fiber;
  cplx at = fiber.omega;
  for (auto v : path) {
    track_chord(spec, out.points, at, v);
    at = v;
  }
  out.omega = at;
  return out;
}

std::size_t group_closure_size(const std::vector<Permutation>& gens, std::size_t n, std::size_t cap, bool* complete) {
  Permutation id(n);
  std::iota(id.begin(), id.end(), 0);
  std::set<Permutation> seen{id};
  std::vector<Permutation> frontier{id};
  bool full = true;
  while (!frontier.empty()) {
    std::vector<Permutation> next;
    for (const auto& p : frontier)
      for (const auto& g : gens) {
        Permutation q = compose(g, p);
        if (seen.insert(q).second) {
          if (seen.size() >= cap) {
            full = false;
            break;
          }
          next.push_back(std::move(q));
        }
      }
    if (!full) break;
    frontier = std::move(next);
  }
  if (complete) *complete = full;
  return seen.size();
}

MonodromyAction monodromy_generators(const FunctionSpec& spec, cplx omega0) {
  MonodromyAction a;
  a.base = base_fiber(spec, omega0);
  const std::size_t n = a.base.points.size();
  const std::vector<cplx> bvs = dedup_sorted(branch_values(spec), 1e-9);
  for (std::size_t i = 0; i < bvs.size(); ++i) {
    const cplx b = bvs[i];
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < bvs.size(); ++j)
      if (j != i) d = std::min(d, std::abs(bvs[j] - b));
    double rho = std::min(std::max(1e-2, d / 4.0), 0.45 * d);
    const double reach = std::abs(omega0 - b);
    rho = std::min(rho, 0.5 * reach);
    const cplx u = (omega0 - b) / reach;
    std::vector<cplx> path{b + rho * u};
    for (int k = 1; k <= 64; ++k) path.push_back(b + rho * u * std::polar(1.0, 2.0 * kPi * k / 64.0));
    path.push_back(omega0);
    try {
      const Fiber end = track_fiber(spec, a.base, path);
      a.generators.push_back(match(end.points, a.base.points));
      a.branch_values.push_back(b);
    } catch (const Error& e) {
      a.skipped.push_back({b, e.what()});
    }
  }
  a.closure_size = group_closure_size(a.generators, n, 100000, &a.closure_complete);
  // Transitivity: orbit of point 0.
  std::vector<bool> hit(n, false);
  std::vector<std::size_t> stack;
  if (n > 0) {
    hit[0] = true;
    stack.push_back(0);
  }
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (const auto& g : a.generators)
      if (!hit[g[x]]) {
        hit[g[x]] = true;
        stack.push_back(g[x]);
      }
  }
  a.transitive = std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
  return a;
}

std::vector<BlockSystem> block_systems(const std::vector<Permutation>& gens, std::size_t n) {
  std::vector<BlockSystem> out;
  for (std::size_t i = 1; i < n; ++i) {
    auto s = closure(gens, n, {0, i});
    if (!s || s->trivial) continue;
    if (std::none_of(out.begin(), out.end(), [&](const BlockSystem& o) { return o.blocks == s->blocks; })) {
      out.push_back(*s);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const BlockSystem& x, const BlockSystem& y) { return x.d < y.d; });
  return out;
}

std::vector<BlockSystem> block_systems(const MonodromyAction& action) {
  return block_systems(action.generators, action.base.points.size());
}

std::vector<BlockSystem> all_block_systems(const std::vector<Permutation>& gens, std::size_t n) {
  std::vector<BlockSystem> found;
  if (n < 2) return found;
  auto add = [&](const std::optional<BlockSystem>& s) {
    if (!s || s->d == 1) return false;
    if (std::any_of(found.begin(), found.end(), [&](const BlockSystem& o) { return o.blocks == s->blocks; })) return false;
    found.push_back(*s);
    return true;
  };
  for (std::size_t i = 1; i < n; ++i) add(closure(gens, n, {0, i}));
  std::vector<std::size_t> full(n);
  std::iota(full.begin(), full.end(), 0);
  add(closure(gens, n, full));
  // Coarsen every system found by one more point until nothing new appears.
  for (std::size_t k = 0; k < found.size(); ++k) {
    const auto base = found[k].blocks.front();
    for (std::size_t j = 0; j < n; ++j) {
      if (std::find(base.begin(), base.end(), j) != base.end()) continue;
      auto merged = base;
      merged.push_back(j);
      add(closure(gens, n, merged));
    }
  }
  std::stable_sort(found.begin(), found.end(), [](const BlockSystem& x, const BlockSystem& y) { return x.d > y.d; });
  return found;
}

BlaschkeProduct inner_factor_from_block(const Fiber& fiber, const std::vector<std::size_t>& block) {
  std::vector<cplx> zeros;
  for (auto i : block) zeros.push_back(fiber.points.at(i));
  return BlaschkeProduct(std::move(zeros), 0.0);
}

OuterFactor outer_factor(const FunctionSpec& spec, const BlaschkeProduct& b, double r, std::size_t S) {
  if (!(r > 0.0 && r < 1.0)) throw DomainError("outer_factor radius must lie in (0, 1)");
  if (S < 8 || (S & (S - 1)) != 0) throw DomainError("outer_factor sample count must be a power of two >= 8");
  OuterFactor of;
  of.radius = r;
  of.sample_count = S;
  of.samples.resize(S);
  const RationalFunction rb = b.rational();
  double scale = 0.0;
  for (std::size_t j = 0; j < S; ++j) {
    const cplx w = std::polar(r, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(S));
    const std::vector<cplx> pre = solve_fiber(rb, w).points();
    if (pre.size() != b.order()) {
      throw ConvergenceError("outer_factor: fiber of B over " + format_complex(w) + " has " +
                             std::to_string(pre.size()) + " points");
    }
    const cplx v0 = spec(pre.front());
    for (std::size_t i = 1; i < pre.size(); ++i)
      of.spread = std::max(of.spread, std::abs(spec(pre[i]) - v0) / std::max(1.0, std::abs(v0)));
    of.samples[j] = v0;
    scale = std::max(scale, std::abs(v0));
  }
  of.consistent = of.spread <= 1e-8;
  if (!of.consistent) return of;

  std::vector<cplx> spectrum(S);
  {
    std::vector<cplx> in(of.samples);
    std::lock_guard lock(fftw_planner_mutex());
    fftw_plan plan = fftw_plan_dft_1d(static_cast<int>(S), reinterpret_cast<fftw_complex*>(in.data()),
                                      reinterpret_cast<fftw_complex*>(spectrum.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }
  const std::size_t half = S / 2;
  const double floor = 4e-15 * std::max(scale, 1e-300);
  std::size_t last = 0;
  for (std::size_t k = 0; k < half; ++k)
    if (std::abs(spectrum[k]) / static_cast<double>(S) > floor) last = k;
  std::vector<cplx> c(last + 1);
  for (std::size_t k = 0; k <= last; ++k)
    c[k] = spectrum[k] / (static_cast<double>(S) * std::pow(r, static_cast<double>(k)));
  double tail = 0.0;
  for (std::size_t k = half / 2; k < S; ++k) tail = std::max(tail, std::abs(spectrum[k]) / static_cast<double>(S));
  of.tail_decay = scale > 0.0 ? tail / scale : 0.0;
  of.kept = last + 1;
  of.h = PowerSeries(std::move(c), false);
  return of;
}

FunctionSpec Decomposition::h_spec() const { return FunctionSpec::polynomial(outer.h.coeffs()); }

cplx default_base_point(const FunctionSpec& spec) {
  const std::vector<cplx> bvs = branch_values(spec);
  const std::vector<cplx> curve = boundary_curve(spec);
  const double gap = 1e-2;
  cplx w = spec(0.0);
  for (int it = 0; it < 200; ++it) {
    cplx nearest_b = w + 1.0;
    double db = std::numeric_limits<double>::infinity();
    for (auto b : bvs)
      if (std::abs(b - w) < db) {
        db = std::abs(b - w);
        nearest_b = b;
      }
    cplx nearest_c = w + 1.0;
    double dc = std::numeric_limits<double>::infinity();
    for (auto c : curve)
      if (std::abs(c - w) < dc) {
        dc = std::abs(c - w);
        nearest_c = c;
      }
    if (db >= gap && dc >= gap) return w;
    const cplx away = db < gap ? w - nearest_b : w - nearest_c;
    w += gap * (std::abs(away) > 0.0 ? away / std::abs(away) : cplx(1.0, 0.0));
  }
  return w;
}

Decomposition decompose(const FunctionSpec& spec, const DecomposeOptions& options) {
  Decomposition dec;
  dec.omega0 = options.omega0 ? *options.omega0 : default_base_point(spec);
  dec.action = monodromy_generators(spec, dec.omega0);
  const Fiber& base = dec.action.base;
  const std::size_t n = base.points.size();
  if (n == 0) throw DomainError("decompose: base point has an empty fiber");
  dec.fiber_size = n;

  std::optional<BlaschkeProduct> accepted;
  for (const auto& sys : all_block_systems(dec.action.generators, n)) {
    const BlaschkeProduct bhat = inner_factor_from_block(base, sys.blocks.front());
    const OuterFactor trial = outer_factor(spec, bhat, options.radius, options.samples);
    if (trial.consistent) {
      accepted = bhat;
      dec.block = sys.blocks.front();
      dec.m = sys.d;
      break;
    }
    dec.rejected.push_back({sys.d, trial.spread});
  }
  if (accepted) {
    // Post-compose with the Moebius map sending B(0) to 0.
    const MoebiusTransform phi(accepted->operator()(0.0), 0.0);
    dec.b = compose_blaschke(phi.product(), *accepted);
  } else {
    dec.b = BlaschkeProduct::identity();
    dec.block = {0};
    dec.m = 1;
  }
  dec.outer = outer_factor(spec, dec.b, options.radius, options.samples);
  if (!dec.outer.consistent) {
    throw InconsistencyError("decompose: normalized factor failed the consistency check (spread " +
                             std::to_string(dec.outer.spread) + ")");
  }

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < options.test_points; ++i) {
    const double rad = 0.99 * std::sqrt(unit(rng));
    const cplx z = std::polar(rad, 2.0 * kPi * unit(rng));
    dec.residual = std::max(dec.residual, std::abs(spec(z) - eval(dec.outer.h, dec.b(z))));
  }
  dec.test_points = options.test_points;

  try {
    dec.h_index = solve_fiber(dec.h_spec(), dec.omega0).count();
  } catch (const Error&) {
    dec.h_index = 0;
  }

  // FNV-1a over the defining data.
  std::string key = spec.to_string() + "|" + format_complex(dec.omega0) + "|" + std::to_string(dec.m) + "|" +
                    dec.b.to_string();
  std::uint64_t hash = 1469598103934665603ull;
  for (unsigned char ch : key) {
    hash ^= ch;
    hash *= 1099511628211ull;
  }
  dec.certificate_id = "dec-" + hex64(hash);
  return dec;
}

}  // namespace bundle_lab
