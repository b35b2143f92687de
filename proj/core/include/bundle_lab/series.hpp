#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bundle_lab/blaschke_product.hpp"
#include "bundle_lab/common.hpp"
#include "bundle_lab/polynomial.hpp"
#include "bundle_lab/weights.hpp"

namespace bundle_lab {

/// Truncated Taylor expansion sum_{k<=K} c_k z^k of a function analytic on
/// the disk. `terminates()` marks series known to be exact polynomials.
class PowerSeries {
 public:
  PowerSeries() : c_(1) {}
  explicit PowerSeries(std::vector<cplx> coeffs, bool terminates = false);

  static PowerSeries zero(std::size_t K) { return PowerSeries(std::vector<cplx>(K + 1), true); }
  static PowerSeries monomial(std::size_t n, std::size_t K);
  /// 1 / (1 - conj(a) z) = sum_k conj(a)^k z^k, the Szego kernel at a.
  static PowerSeries geom(cplx a, std::size_t K);

  /// Truncation order K (index of the last stored coefficient).
  std::size_t order() const { return c_.size() - 1; }
  bool terminates() const { return terminates_; }
  cplx operator[](std::size_t k) const { return k < c_.size() ? c_[k] : cplx{}; }
  cplx& operator[](std::size_t k) { return c_.at(k); }
  const std::vector<cplx>& coeffs() const { return c_; }

  PowerSeries truncated(std::size_t K) const;
  PowerSeries star() const;
  /// One past the last index whose coefficient exceeds rel_tol * max |c_k|.
  std::size_t effective_length(double rel_tol) const;
  /// Multiplies by (a - z) / (1 - conj(a) z) in O(K).
  PowerSeries times_moebius_factor(cplx a) const;
  PowerSeries times_blaschke(const BlaschkeProduct& b) const;

 private:
  std::vector<cplx> c_;
  bool terminates_ = false;
};

PowerSeries operator+(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator-(const PowerSeries& a, const PowerSeries& b);
PowerSeries operator*(cplx s, const PowerSeries& a);

/// Cauchy product truncated at min(K_f, K_g).
PowerSeries multiply(const PowerSeries& f, const PowerSeries& g);
/// f / g as formal series; g(0) must be nonzero.
PowerSeries divide(const PowerSeries& f, const PowerSeries& g);
/// Coefficient k of the result is (k+1) f_{k+1}; truncation K-1.
PowerSeries derivative(const PowerSeries& f);
/// Horner evaluation of the truncated polynomial.
cplx eval(const PowerSeries& f, cplx z);
std::pair<cplx, cplx> eval_with_derivative(const PowerSeries& f, cplx z);

/// Estimate of max |g| on the unit circle: dense sampling plus a Lipschitz
/// pad from the sampled derivative.
double sup_on_circle(const PowerSeries& g, std::size_t samples = 4096);

struct Composition {
  PowerSeries series;
  double tail_bound = 0.0;  // |f_{K_f}| s^{K_f} / (1 - s), s = sup|g|; 0 for polynomial f
  double sup_inner = 0.0;
};

/// f o g through order K by Horner's scheme in series arithmetic. Unless f
/// terminates, requires sup_{|z|=1} |g| < 1 - margin (DomainError otherwise).
Composition compose(const PowerSeries& f, const PowerSeries& g, std::size_t K, double margin = 1e-3);

/// <f, g> in H^2_beta = sum_k beta_k^2 conj(g_k) f_k, summed in ascending k
/// with compensation.
cplx inner(const PowerSeries& f, const PowerSeries& g, const WeightSequence& w);
double norm(const PowerSeries& f, const WeightSequence& w);

/// Expression tree over polynomials, Blaschke products, composition, sums,
/// products, scalar multiples and the star involution f*(z) = conj(f(conj z)).
///
/// Textual grammar (prefix form):
///   poly(c0, c1, ...) | blaschke(theta; z1, ...) | compose(outer, inner) |
///   sum(f, g, ...) | product(f, g, ...) | scale(c; f) | star(f) | z
/// with complex literals like 0.5, -2, 0.3i, 1-2i.
class FunctionSpec {
 public:
  FunctionSpec();  // the identity z

  static FunctionSpec polynomial(std::vector<cplx> coeffs);
  static FunctionSpec blaschke(const BlaschkeProduct& b);
  static FunctionSpec compose(const FunctionSpec& outer, const FunctionSpec& inner);
  static FunctionSpec sum(std::vector<FunctionSpec> terms);
  static FunctionSpec product(std::vector<FunctionSpec> factors);
  static FunctionSpec scale(cplx c, const FunctionSpec& f);
  static FunctionSpec star(const FunctionSpec& f);
  static FunctionSpec parse(std::string_view text);

  std::string to_string() const;
  cplx operator()(cplx z) const;
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;
  /// Explicit P/Q; DomainError when a degree exceeds degree_cap.
  RationalFunction rational(int degree_cap = 64) const;
  bool is_polynomial() const;
  std::optional<BlaschkeProduct> as_blaschke() const;
  std::optional<std::vector<cplx>> as_polynomial() const;

  struct Node;

 private:
  explicit FunctionSpec(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
  friend PowerSeries taylor(const FunctionSpec& spec, std::size_t K);
};

/// Taylor coefficients at 0 through order K. Exact for polynomials;
/// Blaschke leaves are expanded factor by factor with geometric series.
PowerSeries taylor(const FunctionSpec& spec, std::size_t K);

/// Parses a complex literal such as `-0.5`, `0.3i`, `1-2i`, `i`.
cplx parse_complex(std::string_view text);

}  // namespace bundle_lab
