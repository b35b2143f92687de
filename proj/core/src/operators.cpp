#include "bundle_lab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace bundle_lab {

std::string to_string(OperatorRole r) {
  switch (r) {
    case OperatorRole::Shift: return "shift";
    case OperatorRole::Mult: return "mult";
    case OperatorRole::Calculus: return "calculus";
    case OperatorRole::Transport: return "transport";
    case OperatorRole::Deformation: return "deformation";
  }
  return "unknown";
}

OperatorMatrix shift_matrix(const WeightSequence& w, std::size_t K) {
  if (K < 2) throw DomainError("shift_matrix needs K >= 2");
  const auto b = w.betas(K);
  Matrix s = Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(K));
  for (std::size_t k = 1; k < K; ++k) s(static_cast<Eigen::Index>(k - 1), static_cast<Eigen::Index>(k)) = b[k - 1] / b[k];
  return {std::move(s), OperatorRole::Shift, w.id(), K};
}

OperatorMatrix mult_matrix(const PowerSeries& f, const WeightSequence& w, std::size_t K, std::size_t cols) {
  if (cols == 0) cols = K;
  const auto b = w.betas(K);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < cols && j < K; ++j) {
    for (std::size_t i = j; i < K; ++i) {
      const cplx c = f[i - j];
      if (c != cplx{}) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c * (b[i] / b[j]);
    }
  }
  return {std::move(m), OperatorRole::Mult, w.id(), K};
}

OperatorMatrix calculus_matrix(const PowerSeries& h, const WeightSequence& w, std::size_t K, std::size_t cols) {
  if (cols == 0) cols = K;
  const auto b = w.betas(std::max(K, cols));
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(K), static_cast<Eigen::Index>(cols));
  for (std::size_t j = 0; j < K; ++j) {
    for (std::size_t c = j; c < cols; ++c) {
      const cplx v = h[c - j];
      if (v != cplx{}) m(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c)) = v * (b[j] / b[c]);
    }
  }
  return {std::move(m), OperatorRole::Calculus, w.id(), K};
}

OperatorMatrix transport_matrix(const WeightSequence& wa, const WeightSequence& wb, std::size_t K, Coordinates coords) {
  const auto n = static_cast<Eigen::Index>(K);
  Matrix t = Matrix::Identity(n, n);
  if (coords == Coordinates::Raw) {
    const auto a = wa.betas(K);
    const auto b = wb.betas(K);
    for (std::size_t k = 0; k < K; ++k) t(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = a[k] / b[k];
  }
  return {std::move(t), OperatorRole::Transport, wa.id() + "->" + wb.id(), K};
}

Vector to_orthonormal(const PowerSeries& f, const WeightSequence& w, std::size_t K) {
  const auto b = w.betas(K);
  Vector v(static_cast<Eigen::Index>(K));
  for (std::size_t k = 0; k < K; ++k) v(static_cast<Eigen::Index>(k)) = f[k] * b[k];
  return v;
}

IdentityReport left_inverse_check(const BlaschkeProduct& b, const WeightSequence& w, std::size_t K) {
  const std::size_t m = b.order();
  if (K <= 4 * m) throw DomainError("left_inverse_check needs K > 4 * order(B)");
  double r = 0.0;
  for (auto z : b.zeros()) r = std::max(r, std::abs(z));
  // Coefficients of B decay like k^{m-1} r^k; pad until that is negligible.
  std::size_t pad = m + 1;
  if (r > 0.0) {
    while (std::pow(static_cast<double>(pad + 1), static_cast<double>(m)) * std::pow(r, static_cast<double>(pad)) > 1e-18) pad += 8;
  }
  const std::size_t inner = K + pad;
  const PowerSeries bs = taylor(FunctionSpec::blaschke(b), inner);
  const PowerSeries bstar = bs.star();

  IdentityReport rep;
  rep.K = K;
  rep.block = K - 4 * m;
  rep.inner_dimension = inner;
  const auto blk = static_cast<Eigen::Index>(rep.block);

  const Matrix padded = calculus_matrix(bstar, w, K, inner).entries * mult_matrix(bs, w, inner, K).entries;
  rep.max_deviation =
      (padded.topLeftCorner(blk, blk) - Matrix::Identity(blk, blk)).cwiseAbs().maxCoeff();
  const Matrix plain = calculus_matrix(bstar, w, K).entries * mult_matrix(bs, w, K).entries;
  rep.unpadded_deviation = (plain.topLeftCorner(blk, blk) - Matrix::Identity(blk, blk)).cwiseAbs().maxCoeff();
  return rep;
}

IdentityReport commutant_transport_check(const WeightSequence& w, std::size_t K) {
  const WeightSequence dual = dual_weights(w);
  const auto n = static_cast<Eigen::Index>(K);
  const auto b = w.betas(K);

  // Raw-coefficient backward shift: (S f)_k = f_{k+1}.
  Matrix s_raw = Matrix::Zero(n, n);
  for (Eigen::Index k = 0; k + 1 < n; ++k) s_raw(k, k + 1) = 1.0;
  const Matrix to_dual = transport_matrix(w, dual, K, Coordinates::Raw).entries;
  const Matrix from_dual = transport_matrix(dual, w, K, Coordinates::Raw).entries;
  const Matrix raw = to_dual * s_raw * from_dual;

  // Orthonormal base of H^2_{beta^-1} is {z^k beta_k}: coordinate = raw / beta_k.
  Matrix ortho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) ortho(i, j) = raw(i, j) * (b[static_cast<std::size_t>(j)] / b[static_cast<std::size_t>(i)]);

  const Matrix mz_adj = mult_matrix(PowerSeries::monomial(1, 1), dual, K).entries.adjoint();
  IdentityReport rep;
  rep.K = K;
  rep.block = K;
  rep.inner_dimension = K;
  rep.max_deviation = (ortho - mz_adj).cwiseAbs().maxCoeff();
  rep.unpadded_deviation = rep.max_deviation;
  return rep;
}

void write_matrix_csv(std::ostream& os, const Matrix& m) {
  char buf[64];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", j ? "," : "", m(i, j).real(), m(i, j).imag());
      os << buf;
    }
    os << "\r\n";
  }
}

}  // namespace bundle_lab
