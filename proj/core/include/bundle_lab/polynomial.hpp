#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bundle_lab/common.hpp"

namespace bundle_lab {

/// Dense complex polynomial, coefficients in ascending degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial constant(cplx c) { return Polynomial({c}); }
  static Polynomial identity() { return Polynomial({0.0, 1.0}); }

  /// Degree after dropping exact zero leading coefficients; -1 for zero.
  int degree() const;
  bool is_zero() const { return degree() < 0; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx coeff(std::size_t i) const { return i < c_.size() ? c_[i] : cplx{}; }

  cplx operator()(cplx z) const;
  /// Value and first derivative by Horner's scheme.
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  /// sum |c_i| |z|^i, the natural scale for residuals at z.
  double magnitude_at(cplx z) const;

  Polynomial derivative() const;
  Polynomial conjugated() const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(cplx s, const Polynomial& a);

 private:
  std::vector<cplx> c_;
};

struct RootOptions {
  double cluster_tol = 1e-8;    // roots closer than this merge into one of higher multiplicity
  double accept_tol = 1e-9;  // relative residual |p(z)| / sum|c_i||z|^i accepted after polish
  int max_newton = 60;
};

struct Root {
  cplx z;
  int multiplicity = 1;
};

/// All complex roots via companion-matrix eigenvalues followed by Newton
/// polishing. Leading coefficients below 1e-14 of the largest are dropped
/// (the corresponding roots lie near infinity) and other coefficients below
/// 1e-15 of the largest are zeroed. Throws ConvergenceError when
/// a polished root fails the relative residual test.
std::vector<Root> polynomial_roots(const Polynomial& p, const RootOptions& options = {});

/// P / Q with explicit numerator and denominator.
struct RationalFunction {
  Polynomial num;
  Polynomial den;

  cplx operator()(cplx z) const { return num(z) / den(z); }
  int degree() const { return std::max(num.degree(), den.degree()); }
  /// Numerator of the derivative: P'Q - PQ'.
  Polynomial derivative_numerator() const;
  RationalFunction conjugated() const { return {num.conjugated(), den.conjugated()}; }
};

}  // namespace bundle_lab
