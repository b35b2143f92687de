#include <cmath>
#include <cstdio>

#include "bundle_lab/frames.hpp"
#include "bundle_lab/version.hpp"

int main() {
  using namespace bundle_lab;
  const auto k = kernel_matrix({0.0, 0.5});
  const double det = std::abs(k.a.determinant());
  std::printf("bundle_lab %s: det %.6f\n", kVersion, det);
  return std::abs(det - 1.0 / 3.0) < 1e-12 ? 0 : 1;
}
