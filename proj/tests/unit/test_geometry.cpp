#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "bundle_lab/blaschke.hpp"
#include "bundle_lab/geometry.hpp"

using namespace bundle_lab;

namespace {

const FunctionSpec kFigure = FunctionSpec::polynomial({2.0, 1.0, 1.0});

// Independent zero count of p - omega inside the disk for a polynomial p.
int zeros_inside(const std::vector<cplx>& p, cplx omega) {
  std::vector<cplx> q = p;
  q[0] -= omega;
  int count = 0;
  for (const auto& r : polynomial_roots(Polynomial(q)))
    if (std::abs(r.z) < 1.0) count += r.multiplicity;
  return count;
}

}  // namespace

TEST_CASE("boundary curves") {
  const auto c = boundary_curve(FunctionSpec(), 256);
  REQUIRE(c.size() >= 256);
  for (auto z : c) CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);

  const auto sq = boundary_curve(FunctionSpec::polynomial({0.0, 0.0, 1.0}), 256);
  for (auto z : sq) CHECK(std::abs(std::abs(z) - 1.0) < 1e-14);

  // The figure curve passes through h(1) = 4 and h(-1) = 2 and loops around 1.66.
  const auto fig = boundary_curve(kFigure, 1024);
  auto near = [&](cplx p) {
    return std::any_of(fig.begin(), fig.end(), [&](cplx z) { return std::abs(z - p) < 1e-2; });
  };
  CHECK(near(4.0));
  CHECK(near(2.0));
}

TEST_CASE("winding index probes") {
  CHECK(winding_index(kFigure, 2.0) == 1);
  CHECK(winding_index(kFigure, 1.66) == 2);
  CHECK(winding_index(kFigure, 5.0) == 0);
  CHECK(winding_index(FunctionSpec(), 0.3) == 1);
  CHECK(winding_index(FunctionSpec(), 1.5) == 0);
  CHECK(winding_index(FunctionSpec::polynomial({0.0, 0.0, 1.0}), cplx(0.2, 0.1)) == 2);

  const auto on = WindingCounter(kFigure).evaluate(2.0, 1e-9, true, true);
  CHECK(on.on_boundary);
  const auto off = WindingCounter(kFigure).evaluate(1.66);
  CHECK_FALSE(off.on_boundary);
  REQUIRE(off.root_count.has_value());
  CHECK(*off.root_count == 2);
  CHECK(std::abs(off.raw - 2.0) < 1e-6);
}

TEST_CASE("argument principle agrees with root counting on random polynomials") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  int compared = 0;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<cplx> p(4);
    for (auto& c : p) c = cplx(g(rng), g(rng));
    const cplx omega(u(rng), u(rng));
    const WindingCounter counter(FunctionSpec::polynomial(p));
    const auto r = counter.evaluate(omega, 1e-9, false, false);
    if (r.distance < 1e-3) continue;
    CHECK(r.index == zeros_inside(p, omega));
    ++compared;
  }
  CHECK(compared >= 45);
}

TEST_CASE("Blaschke products cover the disk with index equal to their order") {
  const auto b = FunctionSpec::blaschke(BlaschkeProduct({0.1, cplx(-0.3, 0.4), 0.5}, 0.2));
  for (cplx w : {cplx(0.0, 0.0), cplx(0.5, -0.3), cplx(-0.8, 0.1)}) CHECK(winding_index(b, w) == 3);
  CHECK(winding_index(b, 1.5) == 0);
}

TEST_CASE("figure index map") {
  const auto map = index_map(kFigure, {-1.0, 5.0, -3.0, 3.0}, 120);
  CHECK(map.distinct_indices() == std::vector<int>{0, 1, 2});
  CHECK(map.cross_checked > 0);
  for (const auto& r : map.regions) CHECK(r.index >= 0);
  REQUIRE(map.branch_values.size() == 1);
  CHECK(std::abs(map.branch_values[0] - 1.75) < 1e-12);

  // Cells away from the curve agree with an independent root count.
  std::size_t checked = 0;
  for (std::size_t row = 0; row < map.resolution; row += 7)
    for (std::size_t col = 0; col < map.resolution; col += 7) {
      const int idx = map.at(col, row);
      if (idx == IndexMap::kBoundaryCell) continue;
      CHECK(idx == zeros_inside({2.0, 1.0, 1.0}, map.center(col, row)));
      ++checked;
    }
  CHECK(checked > 100);
}

TEST_CASE("index is constant on each flood-fill region") {
  const auto map = index_map(kFigure, {-1.0, 5.0, -3.0, 3.0}, 80);
  std::vector<int> seen(map.cells.size(), 0);
  std::size_t total = 0;
  for (const auto& r : map.regions) {
    CHECK(map.cells[r.seed] == r.index);
    total += r.cells;
  }
  const auto non_boundary = static_cast<std::size_t>(
      std::count_if(map.cells.begin(), map.cells.end(), [](int c) { return c != IndexMap::kBoundaryCell; }));
  CHECK(total == non_boundary);
}

TEST_CASE("index maps of the identity and of z^2") {
  const auto id = index_map(FunctionSpec(), {-2.0, 2.0, -2.0, 2.0}, 60);
  const auto sq = index_map(FunctionSpec::polynomial({0.0, 0.0, 1.0}), {-2.0, 2.0, -2.0, 2.0}, 60);
  for (std::size_t row = 0; row < 60; ++row)
    for (std::size_t col = 0; col < 60; ++col) {
      const int a = id.at(col, row), b = sq.at(col, row);
      if (a == IndexMap::kBoundaryCell) continue;
      const bool inside = std::abs(id.center(col, row)) < 1.0;
      CHECK(a == (inside ? 1 : 0));
      if (b != IndexMap::kBoundaryCell) CHECK(b == (inside ? 2 : 0));
    }
}

TEST_CASE("precomposing with a Moebius map leaves the index map unchanged") {
  const auto h = FunctionSpec::polynomial({0.0, 1.0, 0.5});
  const auto hphi = FunctionSpec::compose(h, FunctionSpec::blaschke(BlaschkeProduct({cplx(0.3, -0.2)}, 0.7)));
  const Bounds box{-2.0, 2.0, -2.0, 2.0};
  const auto a = index_map(h, box, 70);
  const auto b = index_map(hphi, box, 70);
  std::size_t compared = 0;
  for (std::size_t i = 0; i < a.cells.size(); ++i) {
    if (a.cells[i] == IndexMap::kBoundaryCell || b.cells[i] == IndexMap::kBoundaryCell) continue;
    CHECK(a.cells[i] == b.cells[i]);
    ++compared;
  }
  CHECK(compared > a.cells.size() / 2);
}

TEST_CASE("branch values") {
  const auto bv = branch_values(kFigure);
  REQUIRE(bv.size() == 1);
  CHECK(std::abs(bv[0] - 1.75) < 1e-12);
  const auto sq = branch_values(FunctionSpec::polynomial({0.0, 0.0, 1.0}));
  REQUIRE(sq.size() == 1);
  CHECK(std::abs(sq[0]) < 1e-12);
  CHECK(branch_values(FunctionSpec::blaschke(BlaschkeProduct({0.4}, 1.0))).empty());
}

TEST_CASE("svg output") {
  IndexMap tiny;
  tiny.bounds = {-1.0, 1.0, -1.0, 1.0};
  tiny.resolution = 1;
  tiny.cells = {0};
  std::ostringstream os;
  emit_svg(tiny, os);
  const std::string s = os.str();
  CHECK(s.rfind("<?xml", 0) == 0);
  CHECK(s.find("<svg") != std::string::npos);
  CHECK(s.find("</svg>") != std::string::npos);

  std::ostringstream disk;
  emit_svg(index_map(FunctionSpec(), {-2.0, 2.0, -2.0, 2.0}, 40), disk);
  CHECK(disk.str().find("#e41a1c") != std::string::npos);
  CHECK(disk.str().find("#ffd92f") == std::string::npos);

  std::ostringstream fig;
  emit_svg(index_map(kFigure, {-1.0, 5.0, -3.0, 3.0}, 60), fig);
  CHECK(fig.str().find("#e41a1c") != std::string::npos);
  CHECK(fig.str().find("#ffd92f") != std::string::npos);
}
