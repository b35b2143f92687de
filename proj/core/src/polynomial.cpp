#include "bundle_lab/polynomial.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

namespace bundle_lab {

Polynomial::Polynomial(std::vector<cplx> coeffs) : c_(std::move(coeffs)) {
  while (!c_.empty() && c_.back() == cplx{}) c_.pop_back();
}

int Polynomial::degree() const { return static_cast<int>(c_.size()) - 1; }

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

std::pair<cplx, cplx> Polynomial::eval_with_derivative(cplx z) const {
  cplx p{}, dp{};
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) {
    dp = dp * z + p;
    p = p * z + *it;
  }
  return {p, dp};
}

double Polynomial::magnitude_at(cplx z) const {
  const double r = std::abs(z);
  double acc = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * r + std::abs(*it);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (c_.size() <= 1) return {};
  std::vector<cplx> d(c_.size() - 1);
  for (std::size_t i = 1; i < c_.size(); ++i) d[i - 1] = static_cast<double>(i) * c_[i];
  return Polynomial(std::move(d));
}

Polynomial Polynomial::conjugated() const {
  std::vector<cplx> d(c_.size());
  std::transform(c_.begin(), c_.end(), d.begin(), [](cplx c) { return std::conj(c); });
  return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  std::vector<cplx> r(std::max(a.c_.size(), b.c_.size()));
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = a.coeff(i) + b.coeff(i);
  return Polynomial(std::move(r));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-1.0) * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.c_.empty() || b.c_.empty()) return {};
  std::vector<cplx> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i)
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  return Polynomial(std::move(r));
}

Polynomial operator*(cplx s, const Polynomial& a) {
  std::vector<cplx> r(a.c_);
  for (auto& c : r) c *= s;
  return Polynomial(std::move(r));
}

Polynomial RationalFunction::derivative_numerator() const {
  return num.derivative() * den - num * den.derivative();
}

namespace {

cplx polish(const Polynomial& p, cplx z, int max_iter) {
  double last_step = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    auto [v, d] = p.eval_with_derivative(z);
    if (v == cplx{} || d == cplx{}) break;
    const cplx step = v / d;
    const double s = std::abs(step);
    if (!std::isfinite(s) || s >= last_step) break;  // no longer contracting
    z -= step;
    last_step = s;
    if (s <= 4e-16 * std::max(1.0, std::abs(z))) break;
  }
  return z;
}

}  // namespace

std::vector<Root> polynomial_roots(const Polynomial& p_in, const RootOptions& options) {
  std::vector<cplx> c = p_in.coeffs();
  if (c.empty()) throw DomainError("polynomial_roots: zero polynomial has no isolated roots");
  double cmax = 0.0;
  for (auto x : c) cmax = std::max(cmax, std::abs(x));
  while (c.size() > 1 && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  // Coefficients at rounding level relative to the largest are noise from
  // upstream arithmetic (e.g. P - w Q with w = P(0)/Q(0)); treat them as zero.
  for (auto& x : c)
    if (std::abs(x) <= 1e-15 * cmax) x = 0.0;

  std::size_t zero_mult = 0;
  while (zero_mult + 1 < c.size() && c[zero_mult] == cplx{}) ++zero_mult;
  std::vector<cplx> reduced(c.begin() + static_cast<std::ptrdiff_t>(zero_mult), c.end());
  const Polynomial q(reduced);

  std::vector<cplx> raw;
  const int n = q.degree();
  if (n >= 1) {
    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    const cplx lead = reduced[static_cast<std::size_t>(n)];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -reduced[static_cast<std::size_t>(i)] / lead;
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw ConvergenceError("companion eigenvalue solver failed");
    for (int i = 0; i < n; ++i) raw.push_back(polish(q, solver.eigenvalues()(i), options.max_newton));
  }

  // Single-linkage clustering of the polished roots.
  std::vector<Root> roots;
  std::vector<int> owner(raw.size(), -1);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (owner[i] >= 0) continue;
    owner[i] = static_cast<int>(i);
    std::vector<std::size_t> members{i};
    for (std::size_t m = 0; m < members.size(); ++m)
      for (std::size_t j = 0; j < raw.size(); ++j)
        if (owner[j] < 0 && std::abs(raw[j] - raw[members[m]]) < options.cluster_tol) {
          owner[j] = static_cast<int>(i);
          members.push_back(j);
        }
    cplx mean{};
    for (auto j : members) mean += raw[j];
    mean /= static_cast<double>(members.size());
    const cplx z = members.size() == 1 ? raw[i] : mean;
    const double scale = q.magnitude_at(z);
    const double resid = std::abs(q(z));
    if (resid > options.accept_tol * scale) {
      throw ConvergenceError("root polish did not converge (relative residual " + std::to_string(resid / scale) + ")");
    }
    roots.push_back({z, static_cast<int>(members.size())});
  }
  if (zero_mult > 0) {
    auto it = std::find_if(roots.begin(), roots.end(), [&](const Root& r) { return std::abs(r.z) < options.cluster_tol; });
    if (it != roots.end()) {
      it->multiplicity += static_cast<int>(zero_mult);
      it->z = 0.0;
    } else {
      roots.push_back({0.0, static_cast<int>(zero_mult)});
    }
  }
  return roots;
}

}  // namespace bundle_lab
