#include <doctest.h>

#include <cmath>

#include "bundle_lab/classify.hpp"

using namespace bundle_lab;

namespace {

const WeightSequence kBergman = WeightSequence::bergman(1.0);
const FunctionSpec kOuter = FunctionSpec::polynomial({0.0, 1.0, 0.0, 2.0});

FunctionSpec over(const BlaschkeProduct& b) { return FunctionSpec::compose(kOuter, FunctionSpec::blaschke(b)); }

FunctionSpec moebius(cplx z0, double theta) { return FunctionSpec::blaschke(BlaschkeProduct({z0}, theta)); }

}  // namespace

TEST_CASE("intertwiner of the identity") {
  DouglasOptions o;
  o.K = 64;
  o.n_max = 20;
  o.keep_matrix = true;
  const auto c = douglas_intertwiner(BlaschkeProduct::identity(), WeightSequence::hardy(), o);
  CHECK(c.accepted);
  CHECK(c.residual == 0.0);
  CHECK(std::abs(c.cond - 1.0) < 1e-12);
  REQUIRE(c.x.cols() == 21);
  CHECK((c.x.topRows(21) - Matrix::Identity(21, 21)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("intertwiner for an order-two product") {
  DouglasOptions o;
  o.K = 256;
  o.n_max = 40;
  const auto c = douglas_intertwiner(BlaschkeProduct({0.0, 0.5}), kBergman, o);
  CHECK(c.accepted);
  CHECK(c.status == "accepted");
  CHECK(c.residual < 1e-10);
  CHECK(std::abs(c.cond_change) < 0.05);
  CHECK(c.tail < 1e-8);

  // Doubling keeps the residual at the rounding floor and the condition number stable.
  o.K = 512;
  o.n_max = 80;
  const auto d = douglas_intertwiner(BlaschkeProduct({0.0, 0.5}), kBergman, o);
  CHECK(d.accepted);
  CHECK(d.residual < 1e-10);
  CHECK(std::abs(d.cond - c.cond) / c.cond < 0.05);
}

TEST_CASE("intertwiner fails for the Moebius frame on reciprocal-nln weights") {
  DouglasOptions o;
  o.K = 256;
  o.n_max = 60;
  const auto c = douglas_intertwiner(BlaschkeProduct({0.5}), WeightSequence::parse("reciprocal:nln"), o);
  CHECK_FALSE(c.accepted);
  CHECK(c.status.rfind("failed", 0) == 0);
  CHECK((!std::isfinite(c.cond) || c.cond_doubled > c.cond));

  o.K = 128;
  o.n_max = 16;
  const auto small = douglas_intertwiner(BlaschkeProduct({0.5}), WeightSequence::parse("reciprocal:nln"), o);
  CHECK_FALSE(small.accepted);
  CHECK(small.cond_doubled > small.cond);
}

TEST_CASE("jordan models") {
  const auto b2 = jordan(FunctionSpec::blaschke(BlaschkeProduct({0.1, cplx(-0.3, 0.2)}, 0.4)), WeightSequence::hardy());
  CHECK(b2.decomposition.m == 2);
  CHECK(b2.accepted);
  CHECK(b2.certificate.residual < 1e-10);

  const auto comp = jordan(over(BlaschkeProduct({0.0, 0.4})), kBergman);
  CHECK(comp.decomposition.m == 2);
  CHECK(comp.accepted);
  CHECK(comp.h_residual < 1e-10 * std::max(1.0, comp.h_residual_scale));
  CHECK(moebius_match(comp.decomposition.h_spec(), kOuter).has_value());

  const auto prime = jordan(kOuter, kBergman);
  CHECK(prime.decomposition.m == 1);
  CHECK(prime.accepted);
}

TEST_CASE("Moebius matching") {
  const auto sq = FunctionSpec::polynomial({0.0, 0.0, 1.0});
  const auto same = moebius_match(sq, sq);
  REQUIRE(same.has_value());
  CHECK(std::abs(same->phi.z0()) < 1e-8);
  CHECK(same->residual < 1e-8);

  const auto phi_sq = FunctionSpec::product({moebius(0.3, 0.0), moebius(0.3, 0.0)});
  const auto m = moebius_match(sq, phi_sq);
  REQUIRE(m.has_value());
  CHECK(std::abs(m->phi.z0() - 0.3) < 1e-6);
  CHECK(std::abs(m->phi.theta()) < 1e-6);

  CHECK_FALSE(moebius_match(kOuter, sq).has_value());

  // Random precomposition is recovered.
  const auto g = FunctionSpec::polynomial({0.2, 1.0, 0.3, 0.4});
  const auto gp = FunctionSpec::compose(g, moebius(cplx(0.25, -0.1), 1.3));
  const auto r = moebius_match(g, gp);
  REQUIRE(r.has_value());
  for (cplx z : {cplx(0.1, 0.2), cplx(-0.5, 0.3)}) CHECK(std::abs(g(r->phi(z)) - gp(z)) < 1e-8);
}

TEST_CASE("similarity verdicts") {
  const auto h1 = over(BlaschkeProduct({0.0, 0.4}));
  const auto h2 = over(BlaschkeProduct({0.2, -0.5}));
  const auto v = similar(h1, h2, kBergman);
  CHECK(v.kind == VerdictKind::Similar);
  CHECK(v.m1 == 2);
  CHECK(v.m2 == 2);
  CHECK(v.match.has_value());
  CHECK(v.evidence.size() == 2);
  CHECK(similar(h2, h1, kBergman).kind == VerdictKind::Similar);

  const auto h3 = over(BlaschkeProduct({0.0, 0.3, cplx(-0.2, 0.3)}));
  const auto n = similar(h1, h3, kBergman);
  CHECK(n.kind == VerdictKind::NotSimilar);
  CHECK(n.reason == "order mismatch");
  CHECK(similar(h3, h1, kBergman).kind == VerdictKind::NotSimilar);

  const auto sq = FunctionSpec::polynomial({0.0, 0.0, 1.0});
  const auto phi_sq = FunctionSpec::product({moebius(0.3, 0.0), moebius(0.3, 0.0)});
  CHECK(similar(sq, phi_sq, kBergman).kind == VerdictKind::Similar);

  CHECK(similar(h1, FunctionSpec::compose(h1, moebius(cplx(0.1, 0.2), 0.5)), kBergman).kind == VerdictKind::Similar);
  CHECK(to_string(VerdictKind::NotSimilar) == "not_similar");
}

TEST_CASE("doubled-operator consistency") {
  const auto h1 = over(BlaschkeProduct({0.0, 0.4}));
  const auto h2 = over(BlaschkeProduct({0.2, -0.5}));
  const auto k = kaplansky(h1, h2, kBergman);
  CHECK(k.single_verdict.kind == VerdictKind::Similar);
  CHECK(k.double_verdict.kind == VerdictKind::Similar);
  CHECK(k.consistent);

  const auto h3 = over(BlaschkeProduct({0.0, 0.3, cplx(-0.2, 0.3)}));
  const auto n = kaplansky(h1, h3, kBergman);
  CHECK(n.single_verdict.kind == VerdictKind::NotSimilar);
  CHECK(n.double_verdict.kind == VerdictKind::NotSimilar);
  CHECK(n.consistent);
}

TEST_CASE("counterexample probes") {
  const auto berg = counterexample_probe(0.5, kBergman, 400);
  CHECK(berg.verdict == "similarity-consistent");
  CHECK(berg.growth < 1.25);

  const auto nln = counterexample_probe(0.5, WeightSequence::parse("reciprocal:nln"), 400);
  CHECK(nln.verdict == "no bounded similarity at probed scales");
  CHECK(nln.growth > 1.5);

  const auto tiny = counterexample_probe(1e-6, kBergman, 64);
  for (double r : tiny.profile) CHECK(std::abs(r - 1.0) < 1e-3);

  CHECK_THROWS_AS(counterexample_probe(1.0, kBergman, 100), DomainError);
  CHECK_THROWS_AS(counterexample_probe(0.5, kBergman, 8), DomainError);
}
