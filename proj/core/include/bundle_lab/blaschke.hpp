#pragma once

#include <string>
#include <vector>

#include "bundle_lab/blaschke_product.hpp"
#include "bundle_lab/polynomial.hpp"
#include "bundle_lab/series.hpp"

namespace bundle_lab {

cplx eval_blaschke(const BlaschkeProduct& b, cplx z);

/// B1 o B2. Zeros are the B2-preimages of the zeros of B1; the phase is read
/// off by comparing with pointwise evaluation at a probe point.
BlaschkeProduct compose_blaschke(const BlaschkeProduct& b1, const BlaschkeProduct& b2);

/// psi with phi o psi = psi o phi = id, checked on probe points.
MoebiusTransform moebius_inverse(const MoebiusTransform& phi);

struct FiberSolution {
  std::vector<Root> roots;              // distinct roots in the open disk
  std::vector<std::string> warnings;    // roots close to the unit circle
  std::size_t count() const;            // with multiplicity
  std::vector<cplx> points() const;     // each root repeated by multiplicity
};

/// Preimages of omega in the disk: roots of P - omega Q with |z| < 1 - 1e-9.
FiberSolution solve_fiber(const FunctionSpec& spec, cplx omega);
FiberSolution solve_fiber(const RationalFunction& r, cplx omega);

/// Zeros of the derivative inside the disk.
std::vector<Root> critical_points(const FunctionSpec& spec);

}  // namespace bundle_lab
