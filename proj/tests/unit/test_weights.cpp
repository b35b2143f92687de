#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "bundle_lab/weights.hpp"

using namespace bundle_lab;

TEST_CASE("beta of presets") {
  CHECK(beta(WeightSequence::hardy(), 7) == 1.0);
  CHECK(beta(WeightSequence::hardy(), 0) == 1.0);
  CHECK(beta(WeightSequence::bergman(1.0), 1) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  const double nln1 = 1.5 * std::exp(std::pow(std::log(4.0), 2) - std::pow(std::log(3.0), 2));
  CHECK(beta(WeightSequence::nln(), 1) == doctest::Approx(nln1).epsilon(1e-13));
}

TEST_CASE("beta is the running product of weights") {
  for (const auto& w : {WeightSequence::bergman(1.0), WeightSequence::bergman(2.5), WeightSequence::polygrowth(3.0),
                        WeightSequence::nln(), WeightSequence::reciprocal(WeightSequence::nln())}) {
    double b = 1.0;
    for (std::size_t k = 1; k < 200; ++k) {
      b *= w.weight(k);
      CHECK(w.weight(k) > 0.0);
      CHECK(w.beta(k) == doctest::Approx(b).epsilon(1e-12));
    }
    const auto v = w.betas(50);
    REQUIRE(v.size() == 50);
    CHECK(v[0] == 1.0);
    CHECK(v[49] == doctest::Approx(w.beta(49)).epsilon(1e-12));
  }
}

TEST_CASE("bergman weights follow the closed form") {
  const auto w = WeightSequence::bergman(1.5);
  for (std::size_t j : {1u, 2u, 10u, 1000u})
    CHECK(w.weight(j) == doctest::Approx(std::sqrt((j + 1.0) / (j + 2 * 1.5 + 1.0))).epsilon(1e-14));
}

TEST_CASE("growth classification") {
  const auto hardy = growth_classify(WeightSequence::hardy(), 1000);
  CHECK(hardy.sup_val == 0.0);
  CHECK(hardy.classification == GrowthClass::Polynomial);
  CHECK(hardy.certified);

  const auto berg = growth_classify(WeightSequence::bergman(2.0), 100000);
  CHECK(berg.classification == GrowthClass::Polynomial);
  CHECK(berg.sup_val < 2.0);
  CHECK(berg.sup_val > 1.999);

  const auto nln = growth_classify(WeightSequence::nln(), 10000);
  CHECK(nln.classification == GrowthClass::Intermediate);
  const double expect = std::log(10003.0) + std::log(10002.0) + 1.0;
  CHECK(nln.last_val == doctest::Approx(expect).epsilon(1e-3));
  CHECK(nln.last_val == doctest::Approx(19.42).epsilon(1e-3));
  CHECK(nln.tail_trend > 0.0);

  CHECK(growth_classify(WeightSequence::reciprocal(WeightSequence::nln()), 1000).classification ==
        GrowthClass::Intermediate);
  CHECK(to_string(GrowthClass::Undetermined) == "empirical-undetermined");
  CHECK_THROWS_AS(growth_classify(WeightSequence::hardy(), 5), DomainError);
}

TEST_CASE("sup_val is the maximum over the probed range") {
  const auto w = WeightSequence::polygrowth(2.0);
  const auto r = growth_classify(w, 500);
  double best = 0.0;
  for (std::size_t k = 1; k <= 500; ++k) best = std::max(best, (k + 1.0) * std::abs(w.weight(k) - 1.0));
  CHECK(r.sup_val == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("dual weights") {
  CHECK(dual_weights(WeightSequence::hardy()).id() == "hardy");
  const auto d = dual_weights(WeightSequence::bergman(1.0));
  CHECK(d.weight(1) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
  for (const auto& w : {WeightSequence::bergman(1.0), WeightSequence::nln(), WeightSequence::polygrowth(1.0)}) {
    const auto dd = dual_weights(dual_weights(w));
    for (std::size_t k = 1; k < 100; ++k) CHECK(dd.weight(k) == doctest::Approx(w.weight(k)).epsilon(1e-14));
    for (std::size_t k = 0; k < 100; ++k) CHECK(dual_weights(w).beta(k) * w.beta(k) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("equivalence") {
  const auto hh = equivalent(WeightSequence::hardy(), WeightSequence::hardy(), 1000);
  CHECK(hh.equivalent);
  CHECK(hh.k1 == 1.0);
  CHECK(hh.k2 == 1.0);

  const auto small = equivalent(WeightSequence::hardy(), WeightSequence::nln(), 100);
  const auto large = equivalent(WeightSequence::hardy(), WeightSequence::nln(), 1000);
  CHECK_FALSE(large.equivalent);
  CHECK(large.k2 / large.k1 > small.k2 / small.k1);

  // beta_k = 2/(k+2) against sqrt(6/((k+2)(k+3))): ratio sqrt(3(k+2)/(2(k+3))) -> sqrt(3/2).
  const auto a = WeightSequence::reciprocal(WeightSequence::polygrowth(1.0));
  const auto b = WeightSequence::bergman(1.0);
  const auto eq = equivalent(a, b, 5000);
  CHECK(eq.equivalent);
  CHECK(eq.k2 == doctest::Approx(std::sqrt(1.5 * 5002.0 / 5003.0)).epsilon(1e-10));
  CHECK(eq.k1 == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t k : {10u, 100u, 1000u})
    CHECK(b.beta(k) / a.beta(k) == doctest::Approx(std::sqrt(1.5 * (k + 2.0) / (k + 3.0))).epsilon(1e-10));

  // Unequal exponents: bergman(1) against w_k = (k+2)/(k+1) grows without bound.
  const auto far = equivalent(b, WeightSequence::polygrowth(1.0), 1000);
  CHECK_FALSE(far.equivalent);
  CHECK(far.k2 > 1e5);
}

TEST_CASE("preset parsing and ids") {
  for (const char* id : {"hardy", "nln", "bergman:alpha=1", "polygrowth:M=2", "reciprocal:nln", "reciprocal:bergman:alpha=0.5"})
    CHECK(WeightSequence::parse(id).id() == id);
  CHECK_THROWS_AS(WeightSequence::parse("bergman"), ParseError);
  CHECK_THROWS_AS(WeightSequence::parse("cauchy"), ParseError);
  CHECK_THROWS_AS(WeightSequence::parse("bergman:alpha=x"), ParseError);
  CHECK_THROWS_AS(WeightSequence::bergman(-1.0), DomainError);
  CHECK_THROWS_AS(WeightSequence::hardy().weight(0), DomainError);
}

TEST_CASE("explicit lists") {
  CHECK_THROWS_AS(WeightSequence::explicit_list({1.0, -2.0}), DomainError);
  const auto w = WeightSequence::explicit_list({2.0, 0.5, 3.0});
  CHECK(w.beta(3) == doctest::Approx(3.0));
  CHECK(w.max_index() == std::optional<std::size_t>(3));
  CHECK_THROWS_AS(w.beta(4), TruncationRangeError);

  const auto path = std::filesystem::temp_directory_path() / "bundle_lab_weights_test.csv";
  {
    std::ofstream f(path);
    f << "2.0\n0.5\n";
  }
  CHECK(WeightSequence::from_csv(path.string()).beta(2) == doctest::Approx(1.0));
  {
    std::ofstream f(path);
    f << "2.0\nabc\n";
  }
  try {
    WeightSequence::from_csv(path.string());
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 1);
  }
  std::filesystem::remove(path);
}
