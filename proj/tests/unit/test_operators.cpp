#include <doctest.h>

#include <cmath>
#include <sstream>

#include "bundle_lab/operators.hpp"

using namespace bundle_lab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("shift matrix") {
  const auto s = shift_matrix(WeightSequence::hardy(), 3).entries;
  Matrix expect = Matrix::Zero(3, 3);
  expect(0, 1) = expect(1, 2) = 1.0;
  CHECK(max_abs(s - expect) == 0.0);
  CHECK(std::abs(shift_matrix(WeightSequence::bergman(1.0), 4).entries(0, 1) - std::sqrt(2.0)) < 1e-14);
  CHECK_THROWS_AS(shift_matrix(WeightSequence::hardy(), 1), DomainError);
}

TEST_CASE("shift is a left inverse of multiplication by z") {
  for (const auto& w : {WeightSequence::hardy(), WeightSequence::bergman(1.0), WeightSequence::nln()}) {
    const std::size_t K = 40;
    const Matrix p = shift_matrix(w, K).entries * mult_matrix(PowerSeries::monomial(1, 1), w, K).entries;
    CHECK(max_abs(p.topLeftCorner(K - 1, K - 1) - Matrix::Identity(K - 1, K - 1)) < 1e-13);
  }
}

TEST_CASE("multiplication matrices") {
  const auto w = WeightSequence::bergman(1.0);
  CHECK(max_abs(mult_matrix(PowerSeries({1.0}), w, 6).entries - Matrix::Identity(6, 6)) == 0.0);
  const auto z_hardy = mult_matrix(PowerSeries::monomial(1, 1), WeightSequence::hardy(), 4).entries;
  Matrix sub = Matrix::Zero(4, 4);
  sub(1, 0) = sub(2, 1) = sub(3, 2) = 1.0;
  CHECK(max_abs(z_hardy - sub) == 0.0);
  CHECK(std::abs(mult_matrix(PowerSeries::monomial(1, 1), w, 4).entries(1, 0) - std::sqrt(0.5)) < 1e-14);

  const auto f = PowerSeries({1.0, cplx(0.5, 1.0), -2.0, 0.25});
  const auto m = mult_matrix(f, w, 10).entries;
  for (Eigen::Index i = 0; i < 10; ++i)
    for (Eigen::Index j = i + 1; j < 10; ++j) CHECK(m(i, j) == cplx{});
}

TEST_CASE("multiplication acts on orthonormal coordinates") {
  const auto w = WeightSequence::bergman(2.0);
  const std::size_t K = 30;
  const auto f = taylor(FunctionSpec::polynomial({0.5, -1.0, cplx(0.0, 2.0)}), K);
  const auto g = taylor(FunctionSpec::polynomial({1.0, 0.25, cplx(-0.5, 0.5), 3.0}), K);
  const Vector lhs = mult_matrix(f, w, K).entries * to_orthonormal(g, w, K);
  const Vector rhs = to_orthonormal(multiply(f, g), w, K);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("calculus matrices") {
  const auto w = WeightSequence::bergman(1.0);
  CHECK(max_abs(calculus_matrix(PowerSeries({1.0}), w, 6).entries - Matrix::Identity(6, 6)) == 0.0);
  const auto hardy = WeightSequence::hardy();
  CHECK(max_abs(calculus_matrix(PowerSeries::monomial(1, 1), hardy, 8).entries - shift_matrix(hardy, 8).entries) == 0.0);
  CHECK(max_abs(calculus_matrix(PowerSeries::monomial(1, 1), w, 8).entries - shift_matrix(w, 8).entries) < 1e-14);

  const auto c = calculus_matrix(PowerSeries({2.0, 1.0, 1.0}), hardy, 6).entries;
  CHECK(c(0, 0) == cplx(2.0));
  CHECK(c(0, 1) == cplx(1.0));
  CHECK(c(0, 2) == cplx(1.0));
  CHECK(c(0, 3) == cplx{});
  for (Eigen::Index i = 1; i < 6; ++i)
    for (Eigen::Index j = 0; j < i; ++j) CHECK(c(i, j) == cplx{});

  // h(S) equals the polynomial in the shift matrix.
  const Matrix s = shift_matrix(w, 12).entries;
  const Matrix poly = 2.0 * Matrix::Identity(12, 12) + s + s * s;
  CHECK(max_abs(calculus_matrix(PowerSeries({2.0, 1.0, 1.0}), w, 12).entries - poly) < 1e-13);
}

TEST_CASE("transport") {
  const auto w = WeightSequence::bergman(1.0);
  CHECK(max_abs(transport_matrix(w, w, 10, Coordinates::Raw).entries - Matrix::Identity(10, 10)) < 1e-15);
  CHECK(max_abs(transport_matrix(w, WeightSequence::nln(), 10).entries - Matrix::Identity(10, 10)) == 0.0);
  const auto d = dual_weights(w);
  const Matrix rt = transport_matrix(w, d, 20, Coordinates::Raw).entries * transport_matrix(d, w, 20, Coordinates::Raw).entries;
  CHECK(max_abs(rt - Matrix::Identity(20, 20)) < 1e-13);
}

TEST_CASE("commutant transport identity") {
  for (const auto& w : {WeightSequence::hardy(), WeightSequence::bergman(1.0), WeightSequence::nln(),
                        WeightSequence::polygrowth(2.0)})
    CHECK(commutant_transport_check(w, 64).max_deviation < 1e-12);
}

TEST_CASE("left inverse identity") {
  const auto trivial = left_inverse_check(BlaschkeProduct::identity(), WeightSequence::hardy(), 64);
  CHECK(trivial.max_deviation < 1e-15);
  const auto a = left_inverse_check(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 256);
  CHECK(a.block >= 200);
  CHECK(a.max_deviation < 1e-10);
  CHECK(left_inverse_check(BlaschkeProduct({0.3}), WeightSequence::bergman(1.0), 256).max_deviation < 1e-10);
  CHECK_THROWS_AS(left_inverse_check(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 8), DomainError);
}

TEST_CASE("matrix csv") {
  Matrix m(1, 2);
  m(0, 0) = cplx(1.0, -0.5);
  m(0, 1) = 2.0;
  std::ostringstream os;
  write_matrix_csv(os, m);
  CHECK(os.str() == "1,-0.5,2,0\r\n");
}
