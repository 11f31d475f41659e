#include <gtest/gtest.h>

#include <random>

#include "qkdsim/key_pool.hpp"

using namespace qkdsim;

TEST(PoolThresholds, RejectsMisordering) {
  EXPECT_NO_THROW((PoolThresholds{2e6, 10e6, 50e6}.validate()));
  EXPECT_THROW((PoolThresholds{10e6, 2e6, 50e6}.validate()), ConfigError);
  EXPECT_THROW((PoolThresholds{2e6, 50e6, 50e6}.validate()), ConfigError);
  EXPECT_THROW((PoolThresholds{-1, 10e6, 50e6}.validate()), ConfigError);
}

TEST(Classify, BoundaryConvention) {
  PoolThresholds t;
  EXPECT_EQ(classify(40e6, t), PoolState::Ready);
  EXPECT_EQ(classify(10e6, t), PoolState::Ready);
  EXPECT_EQ(classify(9.999999e6, t), PoolState::Warning);
  EXPECT_EQ(classify(2e6, t), PoolState::Warning);
  EXPECT_EQ(classify(1e6, t), PoolState::Unavailable);
  EXPECT_EQ(to_string(PoolState::Warning), "warning");
}

TEST(KeyPool, AccruesAndCapsAtMax) {
  KeyPool p({}, 4e6, 40e6);
  p.accrue(1.0);
  EXPECT_DOUBLE_EQ(p.current_bits(), 44e6);
  p.accrue(5.0);
  EXPECT_DOUBLE_EQ(p.current_bits(), 50e6);
  EXPECT_DOUBLE_EQ(p.wasted_bits(), 10e6);
  EXPECT_DOUBLE_EQ(p.generated_bits(), 20e6);
}

TEST(KeyPool, TimeRegressionIsFatal) {
  KeyPool p({}, 1e6, 20e6);
  p.accrue(3.0);
  EXPECT_THROW(p.accrue(2.0), SimulationIntegrityError);
}

TEST(KeyPool, ConsumeIsAllOrNothingAndKeepsMin) {
  KeyPool p({}, 1.0, 2e6 + 4000);
  EXPECT_EQ(p.consume(4000, 0.0), ConsumeResult::Consumed);
  EXPECT_DOUBLE_EQ(p.current_bits(), 2e6);
  EXPECT_EQ(p.consume(1, 0.0), ConsumeResult::Insufficient);
  EXPECT_DOUBLE_EQ(p.current_bits(), 2e6);
  EXPECT_THROW(p.consume(0, 0.0), std::invalid_argument);
  EXPECT_THROW(p.consume(-5, 0.0), std::invalid_argument);
}

TEST(KeyPool, WarningPoolStillServesData) {
  KeyPool p({}, 1.0, 9e6);
  EXPECT_EQ(p.state(0.0), PoolState::Warning);
  EXPECT_EQ(p.consume(4000, 0.0), ConsumeResult::Consumed);
}

TEST(KeyPool, UnavailablePoolRefusesData) {
  KeyPool p({}, 1.0, 1e6);
  EXPECT_EQ(p.state(0.0), PoolState::Unavailable);
  EXPECT_EQ(p.consume(4000, 0.0), ConsumeResult::Insufficient);
}

TEST(KeyPool, RejectsBadConstruction) {
  EXPECT_THROW(KeyPool({}, 0.0, 1e6), ConfigError);
  EXPECT_THROW(KeyPool({}, 1e6, 60e6), ConfigError);
}

TEST(KeyPool, ConsumptionRateTracksSteadyLoad) {
  KeyPool p({}, 10e6, 50e6);
  // 6 Mbps as 1500 packets/s of 4000 bits for 10 s
  double t = 0.0;
  for (int i = 1; i <= 15000; ++i) {
    t = i / 1500.0;
    ASSERT_EQ(p.consume(4000, t), ConsumeResult::Consumed);
  }
  EXPECT_NEAR(p.consumption_rate_bps(t), 6e6, 0.01 * 6e6);
  // decays with time constant 1 s once traffic stops
  EXPECT_NEAR(p.consumption_rate_bps(t + 1.0), p.consumption_rate_bps(t) * std::exp(-1.0), 1.0);
}

TEST(KeyPoolProperty, BoundsAndFloorOverManyRandomOps) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PoolThresholds t;
  KeyPool p(t, 3e6, 20e6);
  double now = 0.0;
  double consumed = 0.0;
  for (int i = 0; i < 1'000'000; ++i) {
    now += u(rng) * 0.01;
    if (u(rng) < 0.3) {
      p.accrue(now);
    } else {
      const double before_bits = (p.accrue(now), p.current_bits());
      const double bits = 1.0 + u(rng) * 2e6;
      const auto r = p.consume(bits, now);
      if (r == ConsumeResult::Consumed) {
        consumed += bits;
        ASSERT_DOUBLE_EQ(p.current_bits(), before_bits - bits);
      } else {
        ASSERT_LT(before_bits - bits, t.min_bits);
        ASSERT_EQ(p.current_bits(), before_bits);
      }
    }
    ASSERT_LE(p.current_bits(), t.max_bits);
    ASSERT_GE(p.current_bits(), t.min_bits);
  }
  EXPECT_DOUBLE_EQ(p.consumed_bits(), consumed);
  // generated = kept + wasted + consumed, up to rounding of the running sums
  const double balance = p.initial_bits() + p.generated_bits() - p.wasted_bits() - p.consumed_bits();
  EXPECT_NEAR(balance, p.current_bits(), 1e-6 * p.generated_bits());
}
