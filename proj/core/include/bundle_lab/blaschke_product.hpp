#pragma once

#include <string>
#include <utility>
#include <vector>

#include "bundle_lab/common.hpp"
#include "bundle_lab/polynomial.hpp"

namespace bundle_lab {

/// Finite Blaschke product e^{i theta} prod_j (z_j - z) / (1 - conj(z_j) z).
class BlaschkeProduct {
 public:
  /// Zeros must satisfy |z_j| < 1 - 1e-12; theta is reduced to [0, 2 pi).
  explicit BlaschkeProduct(std::vector<cplx> zeros, double theta = 0.0);

  /// B(z) = z, i.e. zero 0 with theta = pi.
  static BlaschkeProduct identity() { return BlaschkeProduct({cplx{}}, kPi); }

  const std::vector<cplx>& zeros() const { return zeros_; }
  double theta() const { return theta_; }
  std::size_t order() const { return zeros_.size(); }

  cplx operator()(cplx z) const;
  std::pair<cplx, cplx> eval_with_derivative(cplx z) const;

  /// B*(z) = conj(B(conj z)): conjugated zeros, phase -theta.
  BlaschkeProduct star() const;
  RationalFunction rational() const;
  /// Literal form `blaschke(theta; z1, z2, ...)`.
  std::string to_string() const;

 private:
  std::vector<cplx> zeros_;
  double theta_ = 0.0;
};

/// Order-one Blaschke product e^{i theta} (z0 - z) / (1 - conj(z0) z).
class MoebiusTransform {
 public:
  MoebiusTransform(cplx z0, double theta) : b_({z0}, theta) {}
  explicit MoebiusTransform(const BlaschkeProduct& b);

  cplx z0() const { return b_.zeros().front(); }
  double theta() const { return b_.theta(); }
  cplx operator()(cplx z) const { return b_(z); }
  const BlaschkeProduct& product() const { return b_; }

 private:
  BlaschkeProduct b_;
};

double normalize_angle(double theta);
std::string format_complex(cplx z);

}  // namespace bundle_lab
