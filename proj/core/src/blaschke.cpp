#include "bundle_lab/blaschke.hpp"

#include <algorithm>
#include <cmath>

namespace bundle_lab {

namespace {

constexpr double kInside = 1.0 - 1e-9;
constexpr double kBoundaryWarn = 1e-6;

// Off-axis probe unlikely to coincide with a zero of anything we build.
constexpr cplx kProbe{0.1234567, 0.0567891};

}  // namespace

cplx eval_blaschke(const BlaschkeProduct& b, cplx z) { return b(z); }

std::size_t FiberSolution::count() const {
  std::size_t n = 0;
  for (const auto& r : roots) n += static_cast<std::size_t>(r.multiplicity);
  return n;
}

std::vector<cplx> FiberSolution::points() const {
  std::vector<cplx> out;
  for (const auto& r : roots)
    for (int i = 0; i < r.multiplicity; ++i) out.push_back(r.z);
  return out;
}

FiberSolution solve_fiber(const RationalFunction& r, cplx omega) {
  const Polynomial p = r.num - omega * r.den;
  if (p.is_zero()) throw DomainError("solve_fiber: function is constant at the target value");
  FiberSolution out;
  for (const auto& root : polynomial_roots(p)) {
    const double a = std::abs(root.z);
    if (std::abs(a - 1.0) < kBoundaryWarn) {
      out.warnings.push_back("root " + format_complex(root.z) + " lies within 1e-6 of the unit circle");
    }
    if (a < kInside) out.roots.push_back(root);
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& x, const Root& y) {
    return x.z.real() != y.z.real() ? x.z.real() < y.z.real() : x.z.imag() < y.z.imag();
  });
  return out;
}

FiberSolution solve_fiber(const FunctionSpec& spec, cplx omega) { return solve_fiber(spec.rational(), omega); }

std::vector<Root> critical_points(const FunctionSpec& spec) {
  const RationalFunction r = spec.rational();
  const Polynomial d = r.derivative_numerator();
  std::vector<Root> out;
  if (d.is_zero()) return out;
  const double scale = 1.0 + std::abs(spec.eval_with_derivative(0.0).second);
  for (const auto& root : polynomial_roots(d)) {
    if (std::abs(root.z) >= kInside) continue;
    // Common factors of P and Q leave roots of P'Q - PQ' that are not
    // critical points of P/Q; drop them by checking the derivative itself.
    if (std::abs(spec.eval_with_derivative(root.z).second) > 1e-6 * scale) continue;
    out.push_back(root);
  }
  std::sort(out.begin(), out.end(), [](const Root& x, const Root& y) {
    return x.z.real() != y.z.real() ? x.z.real() < y.z.real() : x.z.imag() < y.z.imag();
  });
  return out;
}

BlaschkeProduct compose_blaschke(const BlaschkeProduct& b1, const BlaschkeProduct& b2) {
  std::vector<cplx> zeros;
  const RationalFunction r2 = b2.rational();
  for (auto a : b1.zeros()) {
    const FiberSolution f = solve_fiber(r2, a);
    if (f.count() != b2.order()) {
      throw ConvergenceError("compose_blaschke: fiber over " + format_complex(a) + " has " +
                             std::to_string(f.count()) + " points, expected " + std::to_string(b2.order()));
    }
    for (auto z : f.points()) zeros.push_back(z);
  }
  const BlaschkeProduct unphased(zeros, 0.0);
  cplx probe = kProbe;
  cplx u = unphased(probe);
  // Move the probe if it happens to sit on a zero.
  for (int i = 0; std::abs(u) < 1e-6 && i < 16; ++i) {
    probe *= cplx(0.9, 0.3);
    u = unphased(probe);
  }
  const cplx target = b1(b2(probe));
  return BlaschkeProduct(std::move(zeros), std::arg(target / u));
}

MoebiusTransform moebius_inverse(const MoebiusTransform& phi) {
  const cplx rot = std::polar(1.0, phi.theta());
  MoebiusTransform psi(rot * phi.z0(), -phi.theta());
  for (int k = 0; k < 20; ++k) {
    const cplx z = std::polar(0.9 * (k + 1) / 20.0, 2.0 * kPi * k * 0.618034);
    const double e = std::max(std::abs(phi(psi(z)) - z), std::abs(psi(phi(z)) - z));
    if (e > 1e-12 * std::max(1.0, 1.0 / (1.0 - std::abs(phi.z0())))) {
      throw InconsistencyError("moebius_inverse: probe identity fails by " + std::to_string(e));
    }
  }
  return psi;
}

}  // namespace bundle_lab
