#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "relay/model.hpp"
#include "relay/random.hpp"

namespace relay {
namespace {

TEST(DiscreteValidation, AcceptsOddNAndOpenEpsilon) {
  EXPECT_FALSE(discrete_config_error({5, 2, 0.3}).has_value());
  EXPECT_NO_THROW(validate_discrete({5, 2, 0.3}));
}

TEST(DiscreteValidation, RejectsEvenN) {
  EXPECT_EQ(discrete_config_error({4, 2, 0.3}), ErrorCode::EvenN);
  try {
    validate_discrete({4, 2, 0.3});
    FAIL() << "expected ModelError";
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::EvenN);
  }
}

TEST(DiscreteValidation, RejectsClosedEpsilonEndpoints) {
  EXPECT_EQ(discrete_config_error({5, 2, 1.0}), ErrorCode::EpsilonOutOfRange);
  EXPECT_EQ(discrete_config_error({5, 2, 0.0}), ErrorCode::EpsilonOutOfRange);
  EXPECT_EQ(discrete_config_error({5, 2, std::nan("")}), ErrorCode::EpsilonOutOfRange);
}

TEST(DiscreteValidation, RejectsSmallNAndM) {
  EXPECT_EQ(discrete_config_error({1, 2, 0.3}), ErrorCode::NOutOfRange);
  EXPECT_EQ(discrete_config_error({5, 1, 0.3}), ErrorCode::MTooSmall);
}

TEST(ContinuousValidation, RejectsNonpositiveParameters) {
  EXPECT_FALSE(continuous_config_error({2.0, 1.0, 1.0, 2}).has_value());
  EXPECT_EQ(continuous_config_error({0.0, 1.0, 1.0, 2}), ErrorCode::NOutOfRange);
  EXPECT_EQ(continuous_config_error({1.0, 0.0, 1.0, 2}), ErrorCode::SpeedOutOfRange);
  EXPECT_EQ(continuous_config_error({1.0, 1.0, 0.0, 2}), ErrorCode::RateOutOfRange);
  EXPECT_EQ(continuous_config_error({1.0, 1.0, 1.0, 1}), ErrorCode::MTooSmall);
}

TEST(CircleDelta, Examples) {
  EXPECT_EQ(circle_delta(std::int64_t{3}, std::int64_t{1}, std::int64_t{5}), 2);
  EXPECT_EQ(circle_delta(std::int64_t{1}, std::int64_t{3}, std::int64_t{5}), 3);
  EXPECT_DOUBLE_EQ(circle_delta(0.25, 0.75, 1.0), 0.5);
}

TEST(CircleDelta, PropertyRangeAndAntisymmetry) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::int64_t N = 3 + 2 * static_cast<std::int64_t>(rng() % 50);
    const auto a = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N));
    const auto b = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(N));
    const auto d = circle_delta(a, b, N);
    ASSERT_GE(d, 0);
    ASSERT_LT(d, N);
    ASSERT_EQ((d + circle_delta(b, a, N)) % N, 0);
    ASSERT_EQ(wrap_position(b + d, N), a);
  }
}

TEST(WrapPosition, StaysInHalfOpenRange) {
  EXPECT_DOUBLE_EQ(wrap_position(1.0, 1.0), 0.0);
  EXPECT_DOUBLE_EQ(wrap_position(-0.25, 1.0), 0.75);
  EXPECT_EQ(wrap_position(std::int64_t{-1}, std::int64_t{5}), 4);
  EXPECT_EQ(wrap_position(std::int64_t{5}, std::int64_t{5}), 0);
  // A tiny negative value would round up to N under plain fmod + N.
  const double w = wrap_position(-1e-18, 1.0);
  EXPECT_GE(w, 0.0);
  EXPECT_LT(w, 1.0);
}

TEST(DirectionHelpers, SignAndReverse) {
  EXPECT_EQ(sign(Direction::Clockwise), 1);
  EXPECT_EQ(sign(Direction::CounterClockwise), -1);
  EXPECT_EQ(reversed(Direction::Clockwise), Direction::CounterClockwise);
  EXPECT_EQ(direction_from_sign(-1), Direction::CounterClockwise);
}

TEST(Random, StreamsAreReproducibleAndDistinct) {
  const SeedSpec seed{42, 3};
  auto a = make_engine(seed, 1);
  auto b = make_engine(seed, 1);
  auto c = make_engine(seed, 2);
  auto d = make_engine({42, 4}, 1);
  const auto x = a();
  EXPECT_EQ(x, b());
  EXPECT_NE(x, c());
  EXPECT_NE(x, d());
}

TEST(Random, ReplicaStreamsLayout) {
  ReplicaStreams streams({9, 0}, 3);
  EXPECT_EQ(streams.walker_count(), 3u);
  auto control = make_engine({9, 0}, 0);
  auto walker2 = make_engine({9, 0}, 3);
  EXPECT_EQ(streams.control()(), control());
  EXPECT_EQ(streams.walker(2)(), walker2());
}

}  // namespace
}  // namespace relay
