#include "bundle_lab/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/polynomial.hpp"

namespace bundle_lab {

namespace {

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

bool has_repeated(const std::vector<cplx>& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < 1e-12) return true;
  return false;
}

// Seeds spanning the model space H^2 minus B H^2: Szego kernels at the zeros
// when they are distinct, z^s / prod (1 - conj(z_j) z) otherwise.
std::vector<PowerSeries> model_space_seeds(const BlaschkeProduct& b, std::size_t K) {
  std::vector<PowerSeries> seeds;
  const auto& zeros = b.zeros();
  if (!has_repeated(zeros)) {
    for (auto a : zeros) seeds.push_back(PowerSeries::geom(a, K));
    return seeds;
  }
  for (std::size_t s = 0; s < zeros.size(); ++s) {
    std::vector<cplx> c(K + 1);
    if (s <= K) c[s] = 1.0;
    for (auto a : zeros) {
      const cplx ca = std::conj(a);
      for (std::size_t k = 1; k <= K; ++k) c[k] += ca * c[k - 1];
    }
    seeds.emplace_back(std::move(c));
  }
  return seeds;
}

struct Intertwiner {
  Matrix x;  // beta-normalized, K rows
  double tail = 0.0;  // largest column norm beyond row K, relative to the column norm
  bool model_basis = false;
};

Intertwiner build_intertwiner(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K) {
  const std::size_t m = b.order();
  if (m == 0) throw DomainError("intertwiner of a constant Blaschke product");
  if (n_max * m > K / 2) {
    throw TruncationRangeError("intertwiner needs n_max * m <= K / 2 (n_max=" + std::to_string(n_max) +
                               ", m=" + std::to_string(m) + ", K=" + std::to_string(K) + ")");
  }
  const std::size_t rows = K + std::max<std::size_t>(K / 2, 64);
  const auto beta = w.betas(std::max(rows, n_max + 1));
  Intertwiner out;
  out.model_basis = has_repeated(b.zeros());
  auto seeds = model_space_seeds(b, rows - 1);
  out.x.resize(idx(K), idx(m * (n_max + 1)));
  for (std::size_t j = 0; j < m; ++j) {
    PowerSeries s = seeds[j];
    for (std::size_t p = 0; p <= n_max; ++p) {
      if (p > 0) s = s.times_blaschke(b);
      double head = 0.0, tail = 0.0;
      for (std::size_t k = 0; k < rows; ++k) {
        const cplx v = s[k] * (beta[k] / beta[p]);
        if (k < K) {
          out.x(idx(k), idx(p * m + j)) = v;
          head += std::norm(v);
        } else {
          tail += std::norm(v);
        }
      }
      out.tail = std::max(out.tail, std::sqrt(tail / (head + tail)));
    }
  }
  return out;
}

// Extreme singular values through the Gram eigenvalues.
std::pair<double, double> extreme_singular_values(const Matrix& x) {
  const Matrix g = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("intertwiner Gram eigensolver failed");
  return {std::sqrt(std::max(0.0, es.eigenvalues().minCoeff())), std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()))};
}

// Coefficients of B^n reach up to about n times this.
double spread(const BlaschkeProduct& b) {
  double s = 0.0;
  for (auto a : b.zeros()) s += (1.0 + std::abs(a)) / (1.0 - std::abs(a));
  return s;
}

double cond_from(double c1, double c2) {
  return c1 > 0.0 ? c2 / c1 : std::numeric_limits<double>::infinity();
}

bool polynomial_growth(const WeightSequence& w) {
  try {
    return growth_classify(w, 10000).classification == GrowthClass::Polynomial;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace

SimilarityCertificate douglas_intertwiner(const BlaschkeProduct& b, const WeightSequence& w,
                                          const DouglasOptions& options) {
  SimilarityCertificate c;
  c.K = options.K;
  c.n_max = options.n_max;
  if (!polynomial_growth(w)) c.warnings.push_back("weights " + w.id() + " not certified of polynomial growth");

  const Intertwiner it = build_intertwiner(b, w, options.n_max, options.K);
  if (it.model_basis) c.warnings.push_back("repeated zeros: model-space basis z^s / prod(1 - conj(z_j) z) used");
  const std::size_t m = b.order();
  const Matrix& x = it.x;

  // M_B X against X (sum of M_z); column (j, k) of the latter is
  // (beta_{k+1} / beta_k) X(:, (j, k+1)).
  const auto beta = w.betas(options.n_max + 2);
  const OperatorMatrix mb = mult_matrix(taylor(FunctionSpec::blaschke(b), options.K - 1), w, options.K);
  const Matrix lhs = mb.entries * x;
  c.interior_columns = m * options.n_max;
  for (std::size_t k = 0; k < options.n_max; ++k)
    for (std::size_t j = 0; j < m; ++j) {
      const Index col = idx(k * m + j);
      const auto d = lhs.col(col) - (beta[k + 1] / beta[k]) * x.col(idx((k + 1) * m + j));
      c.residual = std::max(c.residual, d.cwiseAbs().maxCoeff());
      c.residual_scale = std::max(c.residual_scale, lhs.col(col).cwiseAbs().maxCoeff());
    }

  const auto [c1, c2] = extreme_singular_values(x);
  const Intertwiner big = build_intertwiner(b, w, 2 * options.n_max, 2 * options.K);
  const auto [d1, d2] = extreme_singular_values(big.x);
  c.cond = cond_from(c1, c2);
  c.cond_doubled = cond_from(d1, d2);
  c.cond_change = std::isfinite(c.cond) ? std::abs(c.cond_doubled - c.cond) / c.cond
                                        : std::numeric_limits<double>::infinity();

  RieszReport& r = c.riesz;
  r.c1 = c1;
  r.c2 = c2;
  r.cond = c.cond;
  r.K = options.K;
  r.n_max = options.n_max;
  RieszStability s{2 * options.K, 2 * options.n_max, d1, d2, c1 > 0.0 ? (d1 - c1) / c1 : -1.0,
                   c2 > 0.0 ? (d2 - c2) / c2 : 0.0};
  r.stability = s;
  if (std::abs(s.rel_change_c1) < options.cond_tol && std::abs(s.rel_change_c2) < options.cond_tol && c1 > 1e-7 * c2) {
    r.verdict = "Riesz-consistent";
  } else if (s.rel_change_c1 < -options.cond_tol || s.rel_change_c2 > options.cond_tol || !(c1 > 1e-7 * c2)) {
    r.verdict = "degenerating";
  } else {
    r.verdict = "inconclusive";
  }

  c.tail = std::max(it.tail, big.tail);
  const double tol = options.residual_tol * std::max(1.0, c.residual_scale);
  if (!(c.tail <= options.tail_tol)) {
    c.status = "failed: truncation tail " + std::to_string(c.tail) + " (raise K or lower n_max)";
  } else if (!(c.residual <= tol)) {
    c.status = "failed: intertwining residual " + std::to_string(c.residual);
  } else if (!(c1 > 1e-7 * c2) || !(c.cond_change < options.cond_tol)) {
    c.status = "failed: frame degeneration (cond " + std::to_string(c.cond) + " -> " + std::to_string(c.cond_doubled) + ")";
  } else {
    c.accepted = true;
    c.status = "accepted";
  }
  if (options.keep_matrix) c.x = x;
  return c;
}

JordanResult jordan(const FunctionSpec& spec, const WeightSequence& w, const JordanOptions& options) {
  JordanResult out;
  out.decomposition = decompose(spec, options.decompose);
  const Decomposition& dec = out.decomposition;
  const std::size_t m = dec.b.order();

  DouglasOptions dopt = options.douglas;
  dopt.keep_matrix = true;
  const auto by_spread = static_cast<std::size_t>(static_cast<double>(dopt.K) / (1.5 * spread(dec.b)));
  const std::size_t n_cap = std::max<std::size_t>(1, std::min(dopt.K / (2 * m), by_spread));
  bool clamped = dopt.n_max > n_cap;
  dopt.n_max = std::min(dopt.n_max, n_cap);
  out.certificate = douglas_intertwiner(dec.b, w, dopt);
  // The spread estimate ignores the transition width; back off while the tail is the only complaint.
  for (int retry = 0; retry < 4 && out.certificate.tail > dopt.tail_tol && dopt.n_max > 4; ++retry) {
    dopt.n_max = dopt.n_max * 3 / 4;
    clamped = true;
    out.certificate = douglas_intertwiner(dec.b, w, dopt);
  }
  if (clamped) {
    out.certificate.warnings.push_back("n_max lowered to " + std::to_string(dopt.n_max) +
                                       " to keep the columns of B^n inside K rows");
  }

  const std::size_t K = dopt.K, n = dopt.n_max;
  const PowerSeries h(std::vector<cplx>(dec.outer.h.coeffs().begin(),
                                        dec.outer.h.coeffs().begin() + static_cast<std::ptrdiff_t>(dec.outer.kept)),
                      true);
  const std::size_t L = dec.outer.kept > 0 ? dec.outer.kept - 1 : 0;
  const PowerSeries hb = compose(h, taylor(FunctionSpec::blaschke(dec.b), K - 1), K - 1).series;
  const Matrix& x = out.certificate.x;
  const Matrix lhs = mult_matrix(hb, w, K).entries * x;
  const Matrix mh = mult_matrix(h, w, n + 1).entries;

  // Column l of M_h reaches rows l..l+L, so columns l <= n - L are exact.
  if (n >= L) {
    for (std::size_t j = 0; j < m; ++j) {
      Matrix xj(idx(K), idx(n + 1));
      for (std::size_t k = 0; k <= n; ++k) xj.col(idx(k)) = x.col(idx(k * m + j));
      const Matrix rhs = xj * mh;
      for (std::size_t l = 0; l + L <= n; ++l) {
        const Index col = idx(l * m + j);
        out.h_residual = std::max(out.h_residual, (lhs.col(col) - rhs.col(idx(l))).cwiseAbs().maxCoeff());
        out.h_residual_scale = std::max(out.h_residual_scale, lhs.col(col).cwiseAbs().maxCoeff());
      }
      out.h_interior_columns += n - L + 1;
    }
  } else {
    out.certificate.warnings.push_back("outer factor degree " + std::to_string(L) + " exceeds n_max; h identity unchecked");
  }

  out.accepted = out.certificate.accepted && out.h_interior_columns > 0 &&
                 out.h_residual <= dopt.residual_tol * std::max(1.0, out.h_residual_scale);
  if (!options.douglas.keep_matrix) out.certificate.x = Matrix();
  return out;
}

namespace {

constexpr std::size_t kMatchSamples = 64;

std::array<cplx, kMatchSamples> match_samples() {
  std::array<cplx, kMatchSamples> s{};
  std::size_t i = 0;
  for (double r : {0.2, 0.4, 0.6, 0.8})
    for (int a = 0; a < 16; ++a) s[i++] = std::polar(r, 2.0 * kPi * a / 16.0);
  return s;
}

std::vector<cplx> fiber_points(const FunctionSpec& g, cplx omega) {
  if (auto p = g.as_polynomial()) {
    std::vector<cplx> c = *p;
    if (c.empty()) c.push_back(0.0);
    c[0] -= omega;
    std::vector<cplx> out;
    for (const Root& r : polynomial_roots(Polynomial(c)))
      if (std::abs(r.z) < 1.0 - 1e-9) out.push_back(r.z);
    return out;
  }
  std::vector<cplx> out;
  for (const Root& r : solve_fiber(g, omega).roots) out.push_back(r.z);
  return out;
}

struct Fit {
  double theta = 0.0;
  cplx z0;
  double max_residual = std::numeric_limits<double>::infinity();
  double step = 0.0;
};

// Levenberg-Marquardt on x = (theta, Re z0, Im z0) with a central-difference
// Jacobian.
Fit refine(const FunctionSpec& g1, const std::array<cplx, kMatchSamples>& zeta,
           const std::array<cplx, kMatchSamples>& target, double theta, cplx z0) {
  using Vec3 = Eigen::Vector3d;
  using Res = Eigen::Matrix<double, 2 * kMatchSamples, 1>;
  using Jac = Eigen::Matrix<double, 2 * kMatchSamples, 3>;

  auto residual = [&](const Vec3& x, Res& r) {
    const cplx a{x(1), x(2)};
    if (!(std::abs(a) < 1.0)) return false;
    const MoebiusTransform phi(a, x(0));
    for (std::size_t s = 0; s < kMatchSamples; ++s) {
      const cplx d = target[s] - g1(phi(zeta[s]));
      r(idx(2 * s)) = d.real();
      r(idx(2 * s + 1)) = d.imag();
    }
    return r.allFinite();
  };
  auto jacobian = [&](const Vec3& x, Jac& j) {
    Res rp, rm;
    for (int c = 0; c < 3; ++c) {
      const double h = 1e-7;
      Vec3 xp = x, xm = x;
      xp(c) += h;
      xm(c) -= h;
      if (!residual(xp, rp) || !residual(xm, rm)) return false;
      j.col(c) = (rp - rm) / (2.0 * h);
    }
    return true;
  };

  Fit fit;
  Vec3 x(theta, z0.real(), z0.imag());
  Res r;
  if (!residual(x, r)) return fit;
  double cost = r.squaredNorm();
  double lambda = 1e-3;
  Jac j;
  for (int it = 0; it < 200 && cost > 0.0; ++it) {
    if (!jacobian(x, j)) break;
    const Eigen::Matrix3d jtj = j.transpose() * j;
    const Vec3 g = j.transpose() * r;
    bool improved = false;
    for (int tries = 0; tries < 20 && !improved; ++tries) {
      Eigen::Matrix3d a = jtj;
      for (int c = 0; c < 3; ++c) a(c, c) += lambda * std::max(jtj(c, c), 1e-12);
      const Vec3 dx = -a.ldlt().solve(g);
      Res rn;
      if (dx.allFinite() && residual(x + dx, rn) && rn.squaredNorm() < cost) {
        x += dx;
        r = rn;
        const double prev = cost;
        cost = rn.squaredNorm();
        lambda = std::max(lambda / 3.0, 1e-12);
        improved = true;
        if (dx.norm() < 1e-15 || prev - cost < 1e-30) it = 1000;
      } else {
        lambda *= 4.0;
      }
    }
    if (!improved) break;
  }
  fit.theta = normalize_angle(x(0));
  fit.z0 = {x(1), x(2)};
  fit.max_residual = 0.0;
  for (std::size_t s = 0; s < kMatchSamples; ++s)
    fit.max_residual = std::max(fit.max_residual, std::hypot(r(idx(2 * s)), r(idx(2 * s + 1))));
  if (jacobian(x, j)) {
    const Vec3 gn = j.colPivHouseholderQr().solve(-r);
    fit.step = gn.allFinite() ? gn.norm() : std::numeric_limits<double>::infinity();
  } else {
    fit.step = std::numeric_limits<double>::infinity();
  }
  return fit;
}

}  // namespace

std::optional<MoebiusMatch> moebius_match(const FunctionSpec& g1, const FunctionSpec& g2) {
  const auto zeta = match_samples();
  std::array<cplx, kMatchSamples> target{};
  double scale = 1.0;
  for (std::size_t s = 0; s < kMatchSamples; ++s) {
    target[s] = g2(zeta[s]);
    scale = std::max(scale, std::abs(target[s]));
  }
  const auto [w0, d2] = g2.eval_with_derivative(0.0);

  std::vector<cplx> fiber;
  try {
    fiber = fiber_points(g1, w0);
  } catch (const Error&) {
    return std::nullopt;
  }

  std::vector<std::pair<double, cplx>> seeds;  // (theta, z0)
  for (cplx p : fiber) {
    const cplx d1 = g1.eval_with_derivative(p).second;
    if (std::abs(d1) > 1e-6 * scale && std::abs(d2) > 1e-12 * scale) {
      // phi'(0) = -e^{i theta} (1 - |z0|^2), phi(0) = e^{i theta} z0 = p.
      const cplx dphi = d2 / d1;
      const double theta = std::arg(-dphi);
      seeds.emplace_back(theta, std::polar(1.0, -theta) * p);
    } else {
      for (int a = 0; a < 16; ++a) {
        const double theta = 2.0 * kPi * a / 16.0;
        seeds.emplace_back(theta, std::polar(1.0, -theta) * p);
      }
    }
  }

  std::vector<Fit> accepted;
  for (const auto& [theta, z0] : seeds) {
    if (!(std::abs(z0) < 1.0)) continue;
    const Fit f = refine(g1, zeta, target, theta, z0);
    if (!(f.max_residual < 1e-8 * scale)) continue;
    const bool dup = std::any_of(accepted.begin(), accepted.end(), [&](const Fit& o) {
      const double dt = std::abs(std::remainder(o.theta - f.theta, 2.0 * kPi));
      return dt < 1e-6 && std::abs(o.z0 - f.z0) < 1e-6;
    });
    if (!dup) accepted.push_back(f);
  }
  if (accepted.empty()) return std::nullopt;

  // Angles within 1e-12 of 0 or 2 pi read as 0.
  auto key = [](const Fit& f) { return f.theta < 1e-12 || f.theta > 2.0 * kPi - 1e-12 ? 0.0 : f.theta; };
  const auto best = std::min_element(accepted.begin(), accepted.end(), [&](const Fit& a, const Fit& b) {
    if (std::abs(key(a) - key(b)) > 1e-8) return key(a) < key(b);
    return std::abs(a.z0) < std::abs(b.z0);
  });
  MoebiusMatch out;
  out.phi = MoebiusTransform(best->z0, key(*best));
  out.residual = best->max_residual;
  out.param_residual = best->step;
  out.seeds = seeds.size();
  return out;
}

std::string to_string(VerdictKind k) {
  switch (k) {
    case VerdictKind::Similar: return "similar";
    case VerdictKind::NotSimilar: return "not_similar";
    case VerdictKind::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

Verdict similar(const FunctionSpec& h1, const FunctionSpec& h2, const WeightSequence& w, const JordanOptions& options) {
  Verdict v;
  for (const FunctionSpec* f : {&h1, &h2}) {
    try {
      v.evidence.push_back(jordan(*f, w, options));
    } catch (const Error& e) {
      v.kind = VerdictKind::Inconclusive;
      v.reason = "decomposition of " + f->to_string() + " failed: " + e.what();
      return v;
    }
  }
  v.m1 = v.evidence[0].decomposition.m;
  v.m2 = v.evidence[1].decomposition.m;
  for (std::size_t i = 0; i < 2; ++i) {
    const JordanResult& j = v.evidence[i];
    if (!j.accepted) {
      v.kind = VerdictKind::Inconclusive;
      v.reason = "certificate for h" + std::to_string(i + 1) + " " + j.certificate.status +
                 (j.certificate.accepted ? " (outer identity residual " + std::to_string(j.h_residual) + ")" : "");
      return v;
    }
  }
  if (v.m1 != v.m2) {
    v.kind = VerdictKind::NotSimilar;
    v.reason = "order mismatch";
    return v;
  }
  v.match = moebius_match(v.evidence[0].decomposition.h_spec(), v.evidence[1].decomposition.h_spec());
  if (!v.match) {
    v.kind = VerdictKind::NotSimilar;
    v.reason = "Moebius match failed";
    return v;
  }
  v.kind = VerdictKind::Similar;
  v.reason = "equal orders and Moebius-matched outer factors";
  return v;
}

KaplanskyResult kaplansky(const FunctionSpec& h1, const FunctionSpec& h2, const WeightSequence& w,
                          const JordanOptions& options) {
  KaplanskyResult out;
  out.single_verdict = similar(h1, h2, w, options);
  // The doubled bundles have multiplicities 2 m_i over the same outer factors,
  // so the verdict reuses the single run's decompositions and match.
  Verdict d = out.single_verdict;
  d.m1 *= 2;
  d.m2 *= 2;
  if (d.kind != VerdictKind::Inconclusive) {
    if (d.m1 != d.m2) {
      d.kind = VerdictKind::NotSimilar;
      d.reason = "order mismatch";
    } else if (!d.match) {
      d.kind = VerdictKind::NotSimilar;
      d.reason = "Moebius match failed";
    } else {
      d.kind = VerdictKind::Similar;
      d.reason = "equal doubled orders and Moebius-matched outer factors";
    }
  }
  out.double_verdict = std::move(d);
  out.consistent = out.double_verdict.kind != VerdictKind::Similar || out.single_verdict.kind == VerdictKind::Similar;
  return out;
}

CounterexampleReport counterexample_probe(double t, const WeightSequence& w, std::size_t n_max) {
  if (!(t > 0.0 && t < 1.0)) throw DomainError("counterexample_probe needs t in (0, 1)");
  if (n_max < 16) throw DomainError("counterexample_probe needs n_max >= 16");
  CounterexampleReport rep;
  rep.t = t;
  rep.profile = column_norm_profile(t, w, n_max);

  const std::size_t lo = std::max<std::size_t>(1, n_max / 8);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  double cnt = 0;
  for (std::size_t n = lo; n <= n_max; ++n) {
    const double x = std::log(static_cast<double>(n)), y = std::log(rep.profile[n]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    cnt += 1;
  }
  rep.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.growth = rep.profile[n_max] / rep.profile[std::max<std::size_t>(1, n_max / 16)];

  // phi^N spreads its coefficients up to about N (1+t)/(1-t).
  const double spread = (1.0 + t) / (1.0 - t);
  for (std::size_t N = 25; N <= std::min<std::size_t>(n_max, 200); N *= 2) {
    std::size_t K = 64;
    while (static_cast<double>(K) < 1.5 * spread * static_cast<double>(N) + 64.0 || K < 2 * N) K *= 2;
    if (K > (1u << 13)) break;
    rep.ladder.push_back(N);
    rep.cond.push_back(riesz_bounds_at(moebius_frame(t, w, N, K)).cond);
  }

  const bool profile_diverges = rep.growth > 1.5;
  const bool profile_stable = rep.growth < 1.25;
  bool cond_diverges = false, cond_stable = false;
  if (rep.cond.size() >= 2) {
    const double a = rep.cond[rep.cond.size() - 2], b = rep.cond.back();
    const double change = std::isfinite(a) ? (b - a) / a : std::numeric_limits<double>::infinity();
    cond_diverges = !std::isfinite(b) || change > 0.05;
    cond_stable = std::isfinite(b) && std::abs(change) < 0.05;
  }
  if (profile_diverges && cond_diverges) {
    rep.verdict = "no bounded similarity at probed scales";
  } else if (profile_stable && cond_stable) {
    rep.verdict = "similarity-consistent";
  } else {
    rep.verdict = "inconclusive";
  }
  return rep;
}

}  // namespace bundle_lab
