#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/SVD>

#include "bundle_lab/frames.hpp"

using namespace bundle_lab;

namespace {

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("frame of the identity is the monomial base") {
  const auto f = build_frame(BlaschkeProduct::identity(), WeightSequence::hardy(), 10, 64);
  const Matrix a = f.matrix(Normalization::Beta);
  CHECK(max_abs(a.topRows(11) - Matrix::Identity(11, 11)) < 1e-14);
  CHECK(max_abs(a.bottomRows(64 - 11)) < 1e-15);
  const auto r = riesz_bounds(build_frame(BlaschkeProduct::identity(), WeightSequence::bergman(1.0), 10, 64));
  CHECK(std::abs(r.c1 - 1.0) < 1e-14);
  CHECK(std::abs(r.c2 - 1.0) < 1e-14);
  CHECK(r.verdict == "Riesz-consistent");
  const auto d = dual_frame(f);
  CHECK(max_abs(d.y - a) < 1e-14);
}

TEST_CASE("frame columns") {
  const BlaschkeProduct b({0.0, 0.5});
  const auto hardy = build_frame(b, WeightSequence::hardy(), 4, 64).matrix(Normalization::Raw);
  // Column (j = 1, n = 0) is the kernel at 0.5.
  for (Eigen::Index k = 0; k < 20; ++k) CHECK(std::abs(hardy(k, 1) - std::pow(0.5, static_cast<double>(k))) < 1e-15);

  const auto w = WeightSequence::bergman(1.0);
  const auto a = build_frame(b, w, 4, 128).matrix(Normalization::Beta);
  // Column (j = 0, n = 1) is B itself scaled by 1/beta_1 in orthonormal coordinates.
  const auto bs = taylor(FunctionSpec::blaschke(b), 127);
  for (std::size_t k = 0; k < 128; ++k)
    CHECK(std::abs(a(static_cast<Eigen::Index>(k), 2) - bs[k] * w.beta(k) / w.beta(1)) < 1e-14);
}

TEST_CASE("Hardy Gram is block diagonal with the kernel matrix") {
  const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 40, 256);
  const auto g = gram(f, Normalization::Raw);
  Matrix block(2, 2);
  block << 1.0, 1.0, 1.0, 4.0 / 3.0;
  Matrix expect = Matrix::Zero(g.gram.rows(), g.gram.cols());
  for (Eigen::Index n = 0; n <= 40; ++n) expect.block(2 * n, 2 * n, 2, 2) = block;
  CHECK(max_abs(g.gram - expect) < 1e-8);
  CHECK(g.tail_bound < 1e-8);
}

TEST_CASE("a zero off the origin is normalized by conjugation") {
  const BlaschkeProduct b({0.3, cplx(-0.2, 0.4)}, 0.5);
  const auto f = build_frame(b, WeightSequence::hardy(), 10, 128);
  REQUIRE(f.conjugator.has_value());
  CHECK(std::abs(f.b(0.0)) < 1e-15);
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.3, 0.5)}) CHECK(std::abs(f.b(z) - b((*f.conjugator)(z))) < 1e-13);
}

TEST_CASE("frames need distinct zeros and room in the truncation") {
  CHECK_THROWS_AS(build_frame(BlaschkeProduct({0.0, 0.0}), WeightSequence::hardy(), 4, 64), DomainError);
  CHECK_THROWS_AS(build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 40, 64), TruncationRangeError);
}

TEST_CASE("Riesz bounds agree with an SVD of the frame") {
  const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::bergman(1.0), 30, 256);
  const auto r = riesz_bounds_at(f);
  Eigen::JacobiSVD<Matrix> svd(f.matrix(Normalization::Beta));
  const auto& s = svd.singularValues();
  CHECK(r.c1 == doctest::Approx(s(s.size() - 1)).epsilon(1e-8));
  CHECK(r.c2 == doctest::Approx(s(0)).epsilon(1e-10));
  CHECK(r.c1 > 0.0);
  CHECK(r.c1 <= r.c2);
  CHECK(std::isfinite(r.cond));
}

TEST_CASE("Moebius frame degenerates on reciprocal-nln weights") {
  const auto w = WeightSequence::parse("reciprocal:nln");
  const auto r = riesz_bounds(moebius_frame(0.5, w, 60, 512));
  REQUIRE(r.stability.has_value());
  CHECK(r.verdict == "degenerating");
  CHECK(r.stability->c2 > r.c2);
}

TEST_CASE("dual frame") {
  const auto f = build_frame(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 40, 512);
  const auto d = dual_frame(f);
  CHECK(d.residual < 1e-8);
  const Matrix direct = d.y.adjoint() * f.matrix(Normalization::Beta);
  CHECK(max_abs(direct - Matrix::Identity(direct.rows(), direct.cols())) < 1e-8);
}

TEST_CASE("kernel matrix") {
  const auto one = kernel_matrix({0.0});
  CHECK(std::abs(one.a(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(one.inverse(0, 0) - 1.0) < 1e-15);

  const auto two = kernel_matrix({0.0, 0.5});
  CHECK(std::abs(two.a(1, 1) - 4.0 / 3.0) < 1e-15);
  CHECK(std::abs(two.a.determinant() - 1.0 / 3.0) < 1e-14);

  const auto three = kernel_matrix({0.0, 0.5, -0.5});
  Matrix expect(3, 3);
  expect << 1.0, 1.0, 1.0, 1.0, 4.0 / 3.0, 0.8, 1.0, 0.8, 4.0 / 3.0;
  CHECK(max_abs(three.a - expect) < 1e-15);
  CHECK(three.min_singular > 0.0);
  CHECK(max_abs(three.a * three.inverse - Matrix::Identity(3, 3)) < 1e-12);

  CHECK_THROWS_AS(kernel_matrix({0.1, 0.1}), DomainError);
  CHECK_THROWS_AS(kernel_matrix({1.0}), DomainError);
  CHECK_THROWS_AS(kernel_matrix({}), DomainError);
}

TEST_CASE("kernel matrix is positive definite on random point sets") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<cplx> pts;
    for (int i = 0; i < 5; ++i) pts.push_back(std::polar(0.9 * std::sqrt(u(rng)), 2 * kPi * u(rng)));
    const auto k = kernel_matrix(pts);
    Eigen::SelfAdjointEigenSolver<Matrix> es(k.a);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("scaled-shift Gram identity") {
  const auto trivial = cpb_check(BlaschkeProduct::identity(), WeightSequence::hardy(), 10, 64);
  CHECK(trivial.max_deviation < 1e-14);
  CHECK(cpb_check(BlaschkeProduct({0.0, 0.5}), WeightSequence::hardy(), 30, 512).max_deviation < 1e-8);
  CHECK(cpb_check(BlaschkeProduct({0.0, cplx(0.0, 0.3)}), WeightSequence::bergman(1.0), 30, 512).max_deviation < 1e-8);
  CHECK_THROWS_AS(cpb_check(BlaschkeProduct({0.5}), WeightSequence::hardy(), 10, 64), DomainError);
}

TEST_CASE("Moebius duality pairing") {
  const auto rot = moebius_duality_check(0.0, WeightSequence::bergman(1.0), 20, 128);
  CHECK(rot.max_deviation < 1e-14);
  CHECK(std::abs(rot.scale - 1.0) < 1e-14);

  const auto h = moebius_duality_check(0.5, WeightSequence::hardy(), 40, 512);
  CHECK(h.max_deviation < 1e-8);
  CHECK(std::abs(h.scale - 1.0 / 0.75) < 1e-8);

  const auto b = moebius_duality_check(cplx(0.0, 0.3), WeightSequence::bergman(1.0), 40, 512);
  CHECK(b.max_deviation < 1e-8);
  CHECK(std::abs(b.scale - 1.0 / 0.91) < 1e-8);
}

TEST_CASE("column norm profiles") {
  const auto hardy = column_norm_profile(0.5, WeightSequence::hardy(), 200);
  CHECK(std::abs(hardy[0] - 1.0) < 1e-12);
  // In H^2 every phi^n / beta_n is a unit vector.
  for (double r : hardy) CHECK(std::abs(r - 1.0) < 1e-10);

  const auto berg = column_norm_profile(0.5, WeightSequence::bergman(1.0), 400);
  const auto [lo, hi] = std::minmax_element(berg.begin() + 50, berg.end());
  CHECK(*hi / *lo < 1.5);

  const auto nln = column_norm_profile(0.5, WeightSequence::parse("reciprocal:nln"), 400);
  for (std::size_t n = 51; n <= 400; ++n) CHECK(nln[n] >= nln[n - 1]);
  CHECK(nln[400] > 1.5 * nln[100]);

  const auto tiny = column_norm_profile(1e-6, WeightSequence::bergman(1.0), 100);
  for (double r : tiny) CHECK(std::abs(r - 1.0) < 1e-3);
}

TEST_CASE("norms of powers of the Moebius derivative") {
  CHECK(std::abs(claim_norm(0.5, 1) - std::sqrt(5.0 / 3.0)) < 1e-10);
  for (double t : {0.3, 0.5, 0.7})
    for (int N = 1; N <= 5; ++N) CHECK(claim_norm(t, N) >= claim_lower_bound(t, N));
  // Closed form for N = 1: (1 - t^2)^2 sum (k+1)^2 t^{2k} = (1 + t^2) / (1 - t^2).
  for (double t : {0.3, 0.7}) CHECK(std::abs(claim_norm(t, 1) - std::sqrt((1 + t * t) / (1 - t * t))) < 1e-10);
  CHECK_THROWS_AS(claim_norm(1.0, 1), DomainError);
}
