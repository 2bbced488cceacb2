#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relay/closed_form.hpp"
#include "relay/discrete_sim.hpp"
#include "relay/estimators.hpp"
#include "relay/replicas.hpp"

namespace relay {
namespace {

constexpr auto kCw = Direction::Clockwise;
constexpr auto kCcw = Direction::CounterClockwise;

DiscreteState make_state(std::vector<std::int64_t> x, std::vector<Direction> d, std::size_t carrier) {
  DiscreteState s;
  s.positions = std::move(x);
  s.directions = std::move(d);
  s.carrier = carrier;
  return s;
}

TEST(ApplyStep, OppositeWalkersSeparate) {
  const DiscreteConfig cfg{5, 2, 0.3};
  auto s = make_state({0, 0}, {kCw, kCcw}, 0);
  Engine tie(1);
  const std::array<bool, 2> flips{false, false};
  EXPECT_FALSE(apply_step(s, cfg, flips, tie));
  EXPECT_EQ(s.positions, (std::vector<std::int64_t>{1, 4}));
  EXPECT_EQ(s.directions, (std::vector<Direction>{kCw, kCcw}));
  EXPECT_EQ(s.carrier, 0u);
  EXPECT_EQ(s.t, 1);
}

TEST(ApplyStep, CounterClockwiseCarrierHandsOff) {
  const DiscreteConfig cfg{5, 2, 0.3};
  auto s = make_state({1, 4}, {kCcw, kCw}, 0);
  Engine tie(1);
  const std::array<bool, 2> flips{false, false};
  EXPECT_TRUE(apply_step(s, cfg, flips, tie));
  EXPECT_EQ(s.positions, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(s.directions, (std::vector<Direction>{kCcw, kCw}));
  EXPECT_EQ(s.carrier, 1u);
}

TEST(ApplyStep, FlipHappensAfterMoveAndBeforeHandoff) {
  const DiscreteConfig cfg{5, 2, 0.3};
  // Walkers meet at 0; the carrier's flip to -1 triggers the handoff.
  auto s = make_state({4, 1}, {kCw, kCcw}, 0);
  Engine tie(1);
  const std::array<bool, 2> flips{true, true};
  EXPECT_TRUE(apply_step(s, cfg, flips, tie));
  EXPECT_EQ(s.positions, (std::vector<std::int64_t>{0, 0}));
  EXPECT_EQ(s.directions, (std::vector<Direction>{kCcw, kCw}));
  EXPECT_EQ(s.carrier, 1u);
}

TEST(ApplyStep, UniformTieBreakAmongCandidates) {
  const DiscreteConfig cfg{5, 3, 0.3};
  std::array<int, 3> counts{};
  const std::array<bool, 3> flips{false, false, false};
  const int trials = 20000;
  for (int k = 0; k < trials; ++k) {
    auto s = make_state({1, 4, 4}, {kCcw, kCw, kCw}, 0);
    Engine tie(static_cast<std::uint64_t>(k));
    ASSERT_TRUE(apply_step(s, cfg, flips, tie));
    ++counts[s.carrier];
  }
  EXPECT_EQ(counts[0], 0);
  // Binomial(20000, 1/2) has standard deviation ~71.
  EXPECT_NEAR(counts[1], trials / 2, 4 * 71);
  EXPECT_EQ(counts[1] + counts[2], trials);
}

TEST(ApplyStep, AgreesWithReferenceTransitionOnRandomStates) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5000; ++trial) {
    const int N = 3 + 2 * static_cast<int>(rng() % 6);
    const testing::FullChain oracle{N, 0.3};
    const auto ref = oracle.state(static_cast<int>(rng() % static_cast<std::uint64_t>(oracle.size())));
    const bool f1 = rng() & 1, f2 = rng() & 1;
    auto s = make_state({ref.x1, ref.x2}, {direction_from_sign(ref.d1), direction_from_sign(ref.d2)},
                        static_cast<std::size_t>(ref.carrier));
    Engine tie(0);
    const std::array<bool, 2> flips{f1, f2};
    apply_step(s, {N, 2, 0.3}, flips, tie);
    const auto expect = oracle.successor(ref, f1, f2);
    ASSERT_EQ(s.positions[0], expect.x1);
    ASSERT_EQ(s.positions[1], expect.x2);
    ASSERT_EQ(sign(s.directions[0]), expect.d1);
    ASSERT_EQ(sign(s.directions[1]), expect.d2);
    ASSERT_EQ(static_cast<int>(s.carrier), expect.carrier);
  }
}

TEST(StepProperties, InvariantsHoldAlongTrajectories) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const DiscreteConfig cfg{3 + 2 * static_cast<std::int64_t>(rng() % 10),
                             2 + static_cast<int>(rng() % 4), 0.05 + 0.9 * (rng() % 1000) / 1000.0};
    ReplicaStreams streams({static_cast<std::uint64_t>(trial), 0}, cfg.m);
    auto s = sample_uniform_state(cfg, streams.control());
    for (int k = 0; k < 500; ++k) {
      const auto before = s;
      step(s, cfg, streams);
      ASSERT_NO_THROW(check_state(s, cfg));
      ASSERT_FALSE(is_excluded(s));
      for (std::size_t j = 0; j < s.positions.size(); ++j) {
        const auto moved = wrap_position(before.positions[j] + sign(before.directions[j]), cfg.N);
        ASSERT_EQ(s.positions[j], moved);
      }
      if (s.carrier != before.carrier) {
        // A new carrier always sits with the old one and heads clockwise.
        ASSERT_EQ(s.positions[s.carrier], s.positions[before.carrier]);
        ASSERT_EQ(s.directions[s.carrier], kCw);
        ASSERT_EQ(s.directions[before.carrier], kCcw);
      }
    }
  }
}

TEST(SampleNu, ShapeAndBalance) {
  const DiscreteConfig cfg{5, 2, 0.3};
  Engine engine(3);
  int carrier_first = 0;
  const int samples = 100000;
  for (int k = 0; k < samples; ++k) {
    const auto s = sample_nu(cfg, engine);
    ASSERT_EQ(s.positions[0], s.positions[1]);
    ASSERT_NE(s.directions[0], s.directions[1]);
    ASSERT_EQ(s.directions[s.carrier], kCw);
    ASSERT_TRUE(in_regeneration_set(s));
    carrier_first += s.carrier == 0;
  }
  // sd of Binomial(1e5, 1/2) is ~158.
  EXPECT_NEAR(carrier_first, samples / 2, 4 * 158);
}

TEST(SampleNu, RequiresTwoWalkers) {
  Engine engine(3);
  try {
    sample_nu({5, 3, 0.3}, engine);
    FAIL();
  } catch (const ModelError& e) {
    EXPECT_EQ(e.code(), ErrorCode::MNotTwo);
  }
}

TEST(CheckState, RejectsMalformedStates) {
  const DiscreteConfig cfg{5, 2, 0.3};
  EXPECT_THROW(check_state(make_state({0, 5}, {kCw, kCw}, 0), cfg), ModelError);
  EXPECT_THROW(check_state(make_state({0, 1}, {kCw, kCw}, 2), cfg), ModelError);
  EXPECT_THROW(check_state(make_state({0}, {kCw}, 0), cfg), ModelError);
}

// The full two-walker chain, built independently, has the closed-form speed
// and a uniform (X, D) marginal.
class FullChainOracle : public ::testing::TestWithParam<std::pair<int, double>> {};

TEST_P(FullChainOracle, SpeedAndUniformMarginal) {
  const auto [N, eps] = GetParam();
  const testing::FullChain chain{N, eps};
  const auto pi = chain.stationary();
  double speed = 0.0, jump = 0.0;
  std::vector<double> marginal(static_cast<std::size_t>(chain.size() / 2), 0.0);
  for (int i = 0; i < chain.size(); ++i) {
    const auto s = chain.state(i);
    const double p = pi[static_cast<std::size_t>(i)];
    speed += p * (s.carrier == 0 ? s.d1 : s.d2);
    marginal[static_cast<std::size_t>(i / 2)] += p;
    for (int f1 = 0; f1 < 2; ++f1) {
      for (int f2 = 0; f2 < 2; ++f2) {
        const double w = (f1 ? eps : 1 - eps) * (f2 ? eps : 1 - eps);
        if (chain.successor(s, f1, f2).carrier != s.carrier) jump += p * w;
      }
    }
  }
  EXPECT_NEAR(speed, closed_form::speed_discrete(N, eps), 1e-9);
  EXPECT_NEAR(jump, closed_form::cost_discrete(N, eps), 1e-9);
  for (double q : marginal) EXPECT_NEAR(q, 1.0 / (4.0 * N * N), 1e-9);
}

INSTANTIATE_TEST_SUITE_P(SmallLattices, FullChainOracle,
                         ::testing::Values(std::pair{3, 0.5}, std::pair{3, 0.1}, std::pair{5, 0.3},
                                           std::pair{7, 0.7}));

TEST(SimulateDiscrete, SpeedMatchesClosedFormOnSmallCircle) {
  const DiscreteConfig cfg{3, 2, 0.5};
  DiscreteRunOptions o;
  o.steps = 1'000'000;
  const auto report = simulate_discrete(cfg, o, {123, 0});
  const auto s = estimators::speed_estimate(report);
  const auto c = estimators::cost_estimate(report);
  EXPECT_NEAR(s.point, 1.0 / 6.0, 3 * s.std_error);
  EXPECT_NEAR(c.point, 0.5 / 6.0, 3 * c.std_error);
  EXPECT_DOUBLE_EQ(report.total_time, 1e6);
  EXPECT_EQ(report.batches.size(), 50u);
}

TEST(SimulateDiscrete, SameSeedSameReport) {
  const DiscreteConfig cfg{7, 2, 0.2};
  DiscreteRunOptions o;
  o.steps = 20000;
  o.trace_every = 1000;
  const auto a = simulate_discrete(cfg, o, {5, 1});
  const auto b = simulate_discrete(cfg, o, {5, 1});
  const auto c = simulate_discrete(cfg, o, {5, 2});
  EXPECT_EQ(a.displacement_sum, b.displacement_sum);
  EXPECT_EQ(a.jump_count, b.jump_count);
  EXPECT_EQ(a.cycles.size(), b.cycles.size());
  EXPECT_EQ(a.running_trace.size(), 20u);
  EXPECT_EQ(a.running_trace.back().time, 20000.0);
  EXPECT_TRUE(a.displacement_sum != c.displacement_sum || a.jump_count != c.jump_count);
}

TEST(SimulateDiscrete, ThreadCountDoesNotChangeResults) {
  const DiscreteConfig cfg{5, 2, 0.3};
  DiscreteRunOptions o;
  o.steps = 20000;
  auto fn = [&](std::size_t i) { return simulate_discrete(cfg, o, {77, i}); };
  const auto one = run_replicas(6, 1, fn);
  const auto many = run_replicas(6, 4, fn);
  for (std::size_t i = 0; i < 6; ++i) {
    EXPECT_EQ(one[i].displacement_sum, many[i].displacement_sum);
    EXPECT_EQ(one[i].jump_count, many[i].jump_count);
  }
}

TEST(SimulateDiscrete, RegenerationCyclesAreConsistent) {
  const DiscreteConfig cfg{5, 2, 0.3};
  DiscreteRunOptions o;
  o.steps = 200000;
  o.initial = RegenerationStart{};
  const auto report = simulate_discrete(cfg, o, {8, 0});
  ASSERT_GT(report.cycles.size(), 1000u);
  EXPECT_EQ(report.cycle_span, 10.0);
  for (const auto& c : report.cycles) {
    ASSERT_GT(c.length, 0.0);
    ASSERT_TRUE(c.relative_displacement == 0.0 || c.relative_displacement == 10.0);
    ASSERT_LE(std::abs(c.displacement), c.length);
    ASSERT_LE(c.jumps, 1);
  }
}

TEST(SimulateDiscrete, CellHistogramCountsEverySample) {
  const DiscreteConfig cfg{5, 2, 0.3};
  DiscreteRunOptions o;
  o.steps = 10000;
  o.uniformity_gap = 10;
  const auto report = simulate_discrete(cfg, o, {8, 0});
  ASSERT_EQ(report.cell_counts.size(), discrete_cell_count(cfg));
  EXPECT_EQ(discrete_cell_count(cfg), 100u);
  std::uint64_t total = 0;
  for (auto n : report.cell_counts) total += n;
  EXPECT_EQ(total, 1000u);
}

}  // namespace
}  // namespace relay
