#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "egai/config.hpp"
#include "egai/evidence.hpp"

using namespace egai;

TEST_CASE("evidence construction validates its domain") {
  CHECK(Evidence::e(0.0).value() == 0.0);
  CHECK(Evidence::e(300.0).is_e());
  CHECK_THROWS_AS(Evidence::e(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Evidence::e(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(Evidence::e(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);

  CHECK(Evidence::p(0.0).is_p());
  CHECK(Evidence::p(1.0).value() == 1.0);
  CHECK_THROWS_AS(Evidence::p(1.0000001), std::invalid_argument);
  CHECK_THROWS_AS(Evidence::p(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(Evidence::p(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
}

TEST_CASE("make_decision follows the type-specific rejection rules") {
  CHECK(make_decision(Evidence::e(300.0), 0.005).reject);   // 300 >= 200
  CHECK_FALSE(make_decision(Evidence::e(100.0), 0.005).reject);
  CHECK(make_decision(Evidence::p(0.03), 0.05).reject);
  CHECK_FALSE(make_decision(Evidence::p(0.06), 0.05).reject);
}

TEST_CASE("level zero never rejects") {
  CHECK_FALSE(make_decision(Evidence::e(1e9), 0.0).reject);
  CHECK_FALSE(make_decision(Evidence::p(0.0), 0.0).reject);
}

TEST_CASE("boundary values reject under the weak inequalities") {
  // e exactly equal to 1/level
  CHECK(make_decision(Evidence::e(200.0), 0.005).reject);
  CHECK(make_decision(Evidence::e(8.0), 0.125).reject);
  // p exactly equal to level
  CHECK(make_decision(Evidence::p(0.05), 0.05).reject);
}

TEST_CASE("decisions are deterministic in (evidence, level)") {
  for (double level : {0.0, 1e-6, 0.01, 0.5, 1.0}) {
    for (double v : {0.0, 0.3, 1.0, 2.0, 1e6}) {
      const auto a = make_decision(Evidence::e(v), level);
      const auto b = make_decision(Evidence::e(v), level);
      CHECK(a.reject == b.reject);
      CHECK(a.level == b.level);
    }
  }
  CHECK_THROWS_AS(make_decision(Evidence::e(1.0), 1.5), std::invalid_argument);
  CHECK_THROWS_AS(make_decision(Evidence::e(1.0), -0.1), std::invalid_argument);
}

TEST_CASE("config bounds are enforced and named") {
  RaiConfig ok;
  CHECK_NOTHROW(ok.validate());

  RaiConfig bad = ok;
  bad.omega1 = 0.5;
  CHECK_THROWS_WITH_AS(bad.validate(), "omega1 must lie in (0,0.5)",
                       std::invalid_argument);
  bad = ok;
  bad.phi = 0.6;
  CHECK_THROWS_WITH_AS(bad.validate(), "phi must lie in [0,0.5]",
                       std::invalid_argument);
  bad = ok;
  bad.psi = -0.1;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.lambda = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.decay = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ok;
  bad.alpha = 1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("gamma sequence: default sums toward 1 and is memoized") {
  GammaSequence gamma;
  CHECK(gamma.at(1) == doctest::Approx(6.0 / (M_PI * M_PI)).epsilon(1e-15));
  CHECK(gamma.at(2) == doctest::Approx(6.0 / (M_PI * M_PI) / 4.0).epsilon(1e-15));
  CHECK(gamma.partial_sum(100000) < 1.0);
  CHECK(gamma.partial_sum(100000) > 0.99999);
}

TEST_CASE("gamma sequence rejects negative terms and oversized sums") {
  GammaSequence negative([](std::int64_t t) { return t == 3 ? -0.1 : 0.1; });
  CHECK_NOTHROW(negative.at(2));
  CHECK_THROWS_AS(negative.at(3), std::invalid_argument);

  GammaSequence oversized([](std::int64_t) { return 0.3; });
  CHECK_NOTHROW(oversized.at(3)); // 0.9
  CHECK_THROWS_AS(oversized.at(4), std::invalid_argument);

  auto finite = GammaSequence::from_weights({0.5, 0.25});
  CHECK(finite.at(1) == 0.5);
  CHECK(finite.at(3) == 0.0);
  CHECK(finite.partial_sum(10) == doctest::Approx(0.75));
}
