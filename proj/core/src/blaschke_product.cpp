#include "bundle_lab/blaschke_product.hpp"

#include <cmath>
#include <cstdio>

namespace bundle_lab {

double normalize_angle(double theta) {
  double t = std::fmod(theta, 2.0 * kPi);
  if (t < 0.0) t += 2.0 * kPi;
  if (t >= 2.0 * kPi) t = 0.0;
  return t;
}

std::string format_complex(cplx z) {
  char buf[80];
  if (z.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17g", z.real());
  } else if (z.real() == 0.0) {
    std::snprintf(buf, sizeof buf, "%.17gi", z.imag());
  } else {
    std::snprintf(buf, sizeof buf, "%.17g%+.17gi", z.real(), z.imag());
  }
  return buf;
}

BlaschkeProduct::BlaschkeProduct(std::vector<cplx> zeros, double theta)
    : zeros_(std::move(zeros)), theta_(normalize_angle(theta)) {
  if (!std::isfinite(theta)) throw DomainError("Blaschke phase must be finite");
  for (auto z : zeros_) {
    if (!(std::abs(z) < 1.0 - 1e-12)) {
      throw DomainError("Blaschke zero " + format_complex(z) + " is not strictly inside the unit disk");
    }
  }
}

cplx BlaschkeProduct::operator()(cplx z) const {
  cplx v = std::polar(1.0, theta_);
  for (auto a : zeros_) v *= (a - z) / (1.0 - std::conj(a) * z);
  return v;
}

std::pair<cplx, cplx> BlaschkeProduct::eval_with_derivative(cplx z) const {
  cplx v = std::polar(1.0, theta_);
  cplx d{};
  for (auto a : zeros_) {
    const cplx den = 1.0 - std::conj(a) * z;
    const cplx t = (a - z) / den;
    const cplx dt = (std::norm(a) - 1.0) / (den * den);
    d = d * t + v * dt;
    v *= t;
  }
  return {v, d};
}

BlaschkeProduct BlaschkeProduct::star() const {
  std::vector<cplx> z(zeros_.size());
  for (std::size_t i = 0; i < z.size(); ++i) z[i] = std::conj(zeros_[i]);
  return BlaschkeProduct(std::move(z), -theta_);
}

RationalFunction BlaschkeProduct::rational() const {
  Polynomial num = Polynomial::constant(std::polar(1.0, theta_));
  Polynomial den = Polynomial::constant(1.0);
  for (auto a : zeros_) {
    num = num * Polynomial({a, -1.0});
    den = den * Polynomial({1.0, -std::conj(a)});
  }
  return {num, den};
}

std::string BlaschkeProduct::to_string() const {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", theta_);
  std::string s = std::string("blaschke(") + buf + ";";
  for (std::size_t i = 0; i < zeros_.size(); ++i) {
    s += (i == 0 ? " " : ", ") + format_complex(zeros_[i]);
  }
  return s + ")";
}

MoebiusTransform::MoebiusTransform(const BlaschkeProduct& b) : b_(b) {
  if (b.order() != 1) throw DomainError("a Moebius transform is a Blaschke product of order exactly 1");
}

}  // namespace bundle_lab
