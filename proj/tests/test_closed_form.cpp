#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relay/closed_form.hpp"
#include "relay/error.hpp"

namespace relay::closed_form {
namespace {

using testing::Rational;

TEST(SpeedDiscrete, Examples) {
  EXPECT_NEAR(speed_discrete(3, 0.5), 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(speed_discrete(5, 0.3), 0.7 / 3.8, 1e-15);
  EXPECT_NEAR(speed_discrete(11, 0.1), 0.9 / 3.8, 1e-15);
  EXPECT_NEAR(speed_discrete(301, 0.2), 0.8 / (2 * 60.8), 1e-15);
}

TEST(SpeedDiscrete, SmallEpsilonLimit) {
  for (std::int64_t N : {3, 11, 1001}) EXPECT_NEAR(speed_discrete(N, 1e-12), 0.5, 1e-9);
}

TEST(SpeedDiscrete, RejectsBoundary) {
  EXPECT_THROW(speed_discrete(5, 0.0), relay::ModelError);
  EXPECT_THROW(speed_discrete(4, 0.3), relay::ModelError);
}

TEST(CostDiscrete, Examples) {
  EXPECT_NEAR(cost_discrete(11, 0.1), 0.1 * 0.9 / 3.8, 1e-15);
  EXPECT_NEAR(cost_discrete(5, 0.3), 0.3 * 0.7 / 3.8, 1e-15);
  EXPECT_NEAR(cost_discrete(5, 1e-12), 0.0, 1e-11);
}

TEST(DirectionDiscrete, ExamplesAndConsistency) {
  EXPECT_NEAR(direction_prob_discrete(5, 0.3), 4.5 / 7.6, 1e-15);
  EXPECT_NEAR(direction_prob_discrete(5, 1 - 1e-12), 0.5, 1e-11);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 200; ++k) {
    const std::int64_t N = 3 + 2 * static_cast<std::int64_t>(rng() % 500);
    const double eps = (1 + rng() % 999) / 1000.0;
    EXPECT_DOUBLE_EQ(direction_prob_discrete(N, eps), (speed_discrete(N, eps) + 1) / 2);
    EXPECT_DOUBLE_EQ(cost_discrete(N, eps), eps * speed_discrete(N, eps));
  }
}

TEST(SpeedDiscrete, DecreasingInNAndEpsilon) {
  for (std::int64_t N = 3; N < 200; N += 2) {
    for (int k = 1; k < 19; ++k) {
      const double e = k / 20.0;
      EXPECT_GT(speed_discrete(N, e), speed_discrete(N, e + 0.05));
      EXPECT_GT(speed_discrete(N, e), speed_discrete(N + 2, e));
    }
  }
}

TEST(CostDiscrete, ConcaveInEpsilon) {
  for (std::int64_t N : {3, 5, 11, 51, 301}) {
    for (int k = 1; k < 18; ++k) {
      const double a = cost_discrete(N, k / 20.0), b = cost_discrete(N, (k + 1) / 20.0),
                   c = cost_discrete(N, (k + 2) / 20.0);
      EXPECT_LE(a + c, 2 * b + 1e-15) << "N=" << N << " k=" << k;
    }
  }
}

TEST(Continuous, Examples) {
  EXPECT_DOUBLE_EQ(speed_continuous(2, 1, 1), 0.25);
  EXPECT_DOUBLE_EQ(cost_continuous(2, 1, 1), 0.25);
  EXPECT_DOUBLE_EQ(direction_prob_continuous(2, 1, 1), 0.625);
  EXPECT_DOUBLE_EQ(speed_continuous(1, 1, 1), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cost_continuous(1, 1, 1), 1.0 / 3.0);
  EXPECT_THROW(speed_continuous(1, 1, 0), relay::ModelError);
}

TEST(Continuous, CostSpeedRatioAndDimensionlessForm) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    const double N = u(rng), v = u(rng), r = u(rng);
    const double s = speed_continuous(N, v, r);
    EXPECT_NEAR(cost_continuous(N, v, r) * v / r, s, 1e-14 * s);
    const auto d = dimensionless(alpha(N, v, r));
    EXPECT_NEAR(v * d.f, s, 1e-14 * s);
    EXPECT_NEAR(r * d.g, cost_continuous(N, v, r), 1e-14);
    EXPECT_NEAR(direction_prob_continuous(N, v, r), (s / v + 1) / 2, 1e-14);
  }
}

TEST(Dimensionless, Examples) {
  EXPECT_DOUBLE_EQ(dimensionless(2.0).f, 0.25);
  EXPECT_DOUBLE_EQ(dimensionless(2.0).g, 0.25);
  EXPECT_NEAR(dimensionless(1e-12).f, 0.5, 1e-12);
  EXPECT_THROW(dimensionless(0.0), relay::ModelError);
}

// Exact rational values of the scaled lattice speed: with eps = 1/(2N),
// 3 s(N, eps) - 1 = 3 (2N - 1) / (2 (3N - 2)) - 1 = 1 / (2 (3N - 2)).
TEST(ScalingLimit, MatchesRationalOracle) {
  for (std::int64_t N : {5, 21, 101, 1001}) {
    const Rational s = testing::lattice_speed(N, Rational(1, 2 * N));
    const Rational err = Rational(3) * s - Rational(1);
    EXPECT_EQ(err, Rational(1, 2 * (3 * N - 2)));
    const auto e = scaling_limit_error(N, 1.0, 1.0);
    EXPECT_DOUBLE_EQ(e.epsilon, 1.0 / (2.0 * N));
    EXPECT_NEAR(e.speed, err.value(), 1e-13);
    EXPECT_NEAR(e.cost, err.value(), 1e-12);
  }
  EXPECT_EQ(testing::lattice_speed(5, Rational(1, 10)), Rational(9, 26));
  EXPECT_EQ(testing::lattice_speed(101, Rational(1, 202)), Rational(201, 602));
}

TEST(ScalingLimit, QuotedValuesAndMonotoneApproach) {
  EXPECT_NEAR(scaling_limit_error(5, 1, 1).speed, 0.0385, 5e-5);
  EXPECT_NEAR(scaling_limit_error(101, 1, 1).speed, 0.00166, 5e-6);
  double previous = 1.0;
  for (std::int64_t N : {5, 21, 101, 1001}) {
    const double e = scaling_limit_error(N, 1, 1).speed;
    EXPECT_LT(e, previous);
    previous = e;
  }
  EXPECT_LT(previous, 0.002);
}

}  // namespace
}  // namespace relay::closed_form
