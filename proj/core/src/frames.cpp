#include "bundle_lab/frames.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/parallel.hpp"

namespace bundle_lab {

std::string to_string(Normalization n) {
  switch (n) {
    case Normalization::Raw: return "raw";
    case Normalization::Beta: return "beta";
    case Normalization::Inverse: return "inverse";
  }
  return "unknown";
}

namespace {

// Gram-based singular values below this fraction of sigma_max are noise.
constexpr double kMinSingular = 1e-7;

using Index = Eigen::Index;

Index idx(std::size_t i) { return static_cast<Index>(i); }

// Scale applied to raw coefficient k of column power n.
struct ColumnScale {
  const std::vector<double>& beta;
  Normalization norm;
  double operator()(std::size_t k, std::size_t n) const {
    switch (norm) {
      case Normalization::Raw: return beta[k];
      case Normalization::Beta: return beta[k] / beta[n];
      case Normalization::Inverse: return beta[n] / beta[k];
    }
    return 0.0;
  }
};

void check_distinct(const std::vector<cplx>& z) {
  for (std::size_t i = 0; i < z.size(); ++i)
    for (std::size_t j = i + 1; j < z.size(); ++j)
      if (std::abs(z[i] - z[j]) < 1e-12) {
        throw DomainError("frame construction needs distinct zeros; " + format_complex(z[i]) +
                          " is repeated (perturb one copy slightly to proceed)");
      }
}

}  // namespace

Matrix FrameMatrix::matrix(Normalization n) const {
  const auto beta = w.betas(std::max(K, n_max + 1));
  const ColumnScale scale{beta, n};
  const std::size_t m_ = m();
  Matrix a(idx(K), idx(columns()));
  for (std::size_t p = 0; p <= n_max; ++p)
    for (std::size_t j = 0; j < m_; ++j) {
      const Index col = idx(p * m_ + j);
      for (std::size_t k = 0; k < K; ++k) a(idx(k), col) = coeffs(idx(k), col) * scale(k, p);
    }
  return a;
}

double FrameMatrix::tail(Normalization n) const {
  const std::size_t rows = static_cast<std::size_t>(coeffs.rows());
  const auto beta = w.betas(std::max(rows, n_max + 1));
  const ColumnScale scale{beta, n};
  double worst = 0.0;
  for (std::size_t p = 0; p <= n_max; ++p)
    for (std::size_t j = 0; j < m(); ++j) {
      double s = 0.0;
      for (std::size_t k = K; k < rows; ++k) s += std::norm(coeffs(idx(k), idx(p * m() + j)) * scale(k, p));
      worst = std::max(worst, std::sqrt(s));
    }
  return worst;
}

FrameMatrix raw_frame(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K) {
  const std::size_t m = b.order();
  if (m == 0) throw DomainError("frame of a constant Blaschke product");
  check_distinct(b.zeros());
  if (n_max * m > K / 2) {
    throw TruncationRangeError("frame needs n_max * m <= K / 2 (n_max=" + std::to_string(n_max) +
                               ", m=" + std::to_string(m) + ", K=" + std::to_string(K) + ")");
  }
  FrameMatrix f{b, w, b.zeros(), n_max, K, Matrix(), std::nullopt};
  const std::size_t rows = K + std::max<std::size_t>(K / 2, 64);
  f.coeffs.resize(idx(rows), idx(f.columns()));
  parallel_for(m, [&](std::size_t j) {
    PowerSeries s = PowerSeries::geom(b.zeros()[j], rows - 1);
    for (std::size_t p = 0; p <= n_max; ++p) {
      if (p > 0) s = s.times_blaschke(b);
      for (std::size_t k = 0; k < rows; ++k) f.coeffs(idx(k), idx(p * m + j)) = s[k];
    }
  });
  return f;
}

FrameMatrix build_frame(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K) {
  check_distinct(b.zeros());
  const bool has_zero = std::any_of(b.zeros().begin(), b.zeros().end(), [](cplx z) { return std::abs(z) < 1e-15; });
  if (has_zero || b.order() == 0) return raw_frame(b, w, n_max, K);
  // psi(0) = z_1; psi is an involution-type Moebius map, B o psi vanishes at 0.
  const cplx z1 = b.zeros().front();
  const MoebiusTransform psi(z1, 0.0);
  std::vector<cplx> zeros;
  for (auto a : b.zeros()) zeros.push_back(psi(a));  // psi^{-1} = psi for theta = 0
  zeros.front() = 0.0;
  BlaschkeProduct unphased(zeros, 0.0);
  const cplx probe{0.21, -0.13};
  const cplx ratio = b(psi(probe)) / unphased(probe);
  FrameMatrix f = raw_frame(BlaschkeProduct(zeros, std::arg(ratio)), w, n_max, K);
  f.conjugator = psi;
  return f;
}

FrameMatrix moebius_frame(cplx z0, const WeightSequence& w, std::size_t n_max, std::size_t K, double theta) {
  return raw_frame(BlaschkeProduct({z0}, theta), w, n_max, K);
}

GramResult gram(const FrameMatrix& f, Normalization n) {
  const Matrix a = f.matrix(n);
  GramResult g;
  g.gram = a.adjoint() * a;
  const double t = f.tail(n);
  g.tail_bound = t * t;
  return g;
}

RieszReport riesz_bounds_at(const FrameMatrix& f) {
  const GramResult g = gram(f, Normalization::Beta);
  Eigen::SelfAdjointEigenSolver<Matrix> es(g.gram, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw ConvergenceError("riesz_bounds: Hermitian eigensolver failed");
  RieszReport r;
  r.c1 = std::sqrt(std::max(0.0, es.eigenvalues().minCoeff()));
  r.c2 = std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
  r.cond = r.c1 > 0.0 ? r.c2 / r.c1 : std::numeric_limits<double>::infinity();
  r.K = f.K;
  r.n_max = f.n_max;
  r.tail = f.tail(Normalization::Beta);
  r.verdict = "inconclusive";
  return r;
}

RieszReport riesz_bounds(const FrameMatrix& f, double stable_tol) {
  RieszReport r = riesz_bounds_at(f);
  const FrameMatrix big = raw_frame(f.b, f.w, 2 * f.n_max, 2 * f.K);
  const RieszReport d = riesz_bounds_at(big);
  RieszStability s;
  s.K = d.K;
  s.n_max = d.n_max;
  s.c1 = d.c1;
  s.c2 = d.c2;
  s.rel_change_c1 = r.c1 > 0.0 ? (d.c1 - r.c1) / r.c1 : -1.0;
  s.rel_change_c2 = r.c2 > 0.0 ? (d.c2 - r.c2) / r.c2 : 0.0;
  r.stability = s;
  if (std::abs(s.rel_change_c1) < stable_tol && std::abs(s.rel_change_c2) < stable_tol && r.c1 > kMinSingular * r.c2) {
    r.verdict = "Riesz-consistent";
  } else if (s.rel_change_c1 < -stable_tol || s.rel_change_c2 > stable_tol || !(r.c1 > kMinSingular * r.c2)) {
    r.verdict = "degenerating";
  }
  return r;
}

DualFrame dual_frame(const FrameMatrix& f, Normalization n) {
  const Matrix a = f.matrix(n);
  const Matrix g = a.adjoint() * a;
  Eigen::SelfAdjointEigenSolver<Matrix> es(g, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff(), hi = es.eigenvalues().maxCoeff();
  if (!(lo > 1e-13 * hi)) {
    throw DomainError("dual_frame: Gram matrix is numerically singular (eigenvalues " + std::to_string(lo) + " .. " +
                      std::to_string(hi) + ")");
  }
  DualFrame d;
  d.gram_cond = hi / lo;
  d.y = a * g.ldlt().solve(Matrix::Identity(g.rows(), g.cols()));
  d.residual = (d.y.adjoint() * a - Matrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff();
  return d;
}

KernelMatrix kernel_matrix(const std::vector<cplx>& points) {
  const std::size_t m = points.size();
  if (m == 0) throw DomainError("kernel_matrix of an empty point set");
  for (auto z : points)
    if (!(std::abs(z) < 1.0)) throw DomainError("kernel_matrix point " + format_complex(z) + " outside the disk");
  check_distinct(points);
  KernelMatrix k;
  k.a.resize(idx(m), idx(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) k.a(idx(i), idx(j)) = 1.0 / (1.0 - std::conj(points[i]) * points[j]);
  Eigen::JacobiSVD<Matrix> svd(k.a);
  const auto& sv = svd.singularValues();
  k.min_singular = sv(sv.size() - 1);
  k.cond = sv(0) / k.min_singular;
  if (!(k.min_singular > 1e-13 * sv(0))) {
    throw DomainError("kernel_matrix is numerically singular: min singular value " + std::to_string(k.min_singular));
  }
  k.inverse = k.a.fullPivLu().inverse();
  return k;
}

ResidualReport cpb_check(const BlaschkeProduct& b, const WeightSequence& w, std::size_t n_max, std::size_t K) {
  if (std::abs(b(0.0)) > 1e-14) throw DomainError("cpb_check needs B(0) = 0");
  const auto beta = w.betas(std::max(K, n_max + 2) + 1);
  const PowerSeries bs = taylor(FunctionSpec::blaschke(b), K);
  const PowerSeries db = derivative(bs);  // order K - 1

  Matrix side_a(idx(K), idx(n_max + 1));
  Matrix side_b(idx(K - 1), idx(n_max + 1));
  PowerSeries pow_n = PowerSeries::monomial(0, K);  // B^n
  for (std::size_t n = 0; n <= n_max; ++n) {
    const PowerSeries next = multiply(pow_n, bs);  // B^{n+1}
    const double bt_n = static_cast<double>(n + 1) * beta[n];
    for (std::size_t k = 0; k < K; ++k) {
      const double bt_k = static_cast<double>(k + 1) * beta[k];
      side_a(idx(k), idx(n)) = next[k] * (bt_k / bt_n);
    }
    const PowerSeries q = multiply(db, pow_n);  // B' B^n, order K - 1
    for (std::size_t k = 0; k + 1 < K; ++k) {
      const double d = static_cast<double>(k + 2) / static_cast<double>(k + 1) * w.weight(k + 1);
      side_b(idx(k), idx(n)) = q[k] * d * (beta[k] / beta[n]);
    }
    pow_n = next;
  }
  const Matrix ga = side_a.adjoint() * side_a;
  const Matrix gb = side_b.adjoint() * side_b;
  ResidualReport r;
  r.max_deviation = (ga - gb).cwiseAbs().maxCoeff();
  r.max_entry = ga.cwiseAbs().maxCoeff();
  r.block = n_max + 1;
  r.K = K;
  r.n_max = n_max;
  return r;
}

DualityReport moebius_duality_check(cplx z0, const WeightSequence& w, std::size_t n_max, std::size_t K) {
  if (!(std::abs(z0) < 1.0)) throw DomainError("moebius_duality_check needs |z0| < 1");
  const FrameMatrix f = moebius_frame(z0, w, n_max, K);
  const Matrix p = f.matrix(Normalization::Inverse).adjoint() * f.matrix(Normalization::Beta);
  DualityReport r;
  r.scale = p.diagonal().real().mean();
  r.expected_scale = 1.0 / (1.0 - std::norm(z0));
  const auto n = p.rows();
  r.max_deviation = (p - r.expected_scale * Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
  r.K = K;
  r.n_max = n_max;
  return r;
}

std::vector<double> column_norm_profile(cplx z0, const WeightSequence& w, std::size_t n_max, double tail_tol,
                                        std::size_t max_K) {
  if (!(std::abs(z0) < 1.0)) throw DomainError("column_norm_profile needs |z0| < 1");
  const double t = std::abs(z0);
  // The mass of phi^n sits below n (1+t)/(1-t); start beyond that.
  std::size_t K = 256;
  while (static_cast<double>(K) < 1.5 * static_cast<double>(n_max + 1) * (1.0 + t) / (1.0 - t) + 64.0) K *= 2;
  for (; K <= max_K; K *= 2) {
    const auto lb = [&] {
      std::vector<double> v(K);
      for (std::size_t k = 0; k < K; ++k) v[k] = w.log_beta(k);
      return v;
    }();
    std::vector<double> out(n_max + 1);
    PowerSeries s = PowerSeries::monomial(0, K - 1);
    bool ok = true;
    const std::size_t tail_from = K - K / 8;
    for (std::size_t n = 0; n <= n_max && ok; ++n) {
      if (n > 0) s = s.times_moebius_factor(z0);
      double total = 0.0, tail = 0.0;
      for (std::size_t k = 0; k < K; ++k) {
        const double term = std::norm(s[k]) * std::exp(2.0 * (lb[k] - lb[n]));
        total += term;
        if (k >= tail_from) tail += term;
      }
      if (!(tail <= tail_tol * tail_tol * total)) ok = false;
      out[n] = std::sqrt(total);
    }
    if (ok) return out;
  }
  throw TruncationRangeError("column_norm_profile: truncation budget " + std::to_string(max_K) + " exceeded");
}

double claim_norm(double t, int N, std::size_t K) {
  if (!(t > 0.0 && t < 1.0) || N < 1) throw DomainError("claim_norm needs 0 < t < 1 and N >= 1");
  const FunctionSpec phi = FunctionSpec::blaschke(BlaschkeProduct({t}, 0.0));
  for (std::size_t k = K ? K : 256;; k *= 2) {
    const PowerSeries d = derivative(taylor(phi, k + 1));
    PowerSeries p = d;
    for (int i = 1; i < N; ++i) p = multiply(p, d);
    double total = 0.0, tail = 0.0;
    for (std::size_t j = 0; j <= p.order(); ++j) {
      total += std::norm(p[j]);
      if (j >= p.order() - p.order() / 8) tail += std::norm(p[j]);
    }
    if (K || tail < 1e-30 * total) return std::sqrt(total);
    if (k > (1u << 16)) throw TruncationRangeError("claim_norm: truncation budget exceeded");
  }
}

double claim_lower_bound(double t, int N) {
  return std::pow(1.0 + t, N) / (std::pow(1.0 - t, N - 1) * std::sqrt(2.0 * kPi * (2.0 * N - 1.0)));
}

}  // namespace bundle_lab
