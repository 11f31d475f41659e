#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "qkdsim/link_metric.hpp"

using namespace qkdsim;

namespace {
LinkMetricInputs in(double gen, double traffic, double max, double cur, double min = 0.0) {
  return {gen, traffic, cur, max, min};
}
}  // namespace

TEST(RecoveryCapability, WorkedExampleValues) {
  const double a = recovery_capability(in(4e6, 1e6, 50e6, 40e6));
  const double b = recovery_capability(in(8.5e6, 10e6, 50e6, 30e6));
  EXPECT_NEAR(a, 0.3, 0.3 * 1e-12);
  EXPECT_NEAR(b, -0.075, 0.075 * 1e-12);
  const std::vector<double> path{a, b};
  EXPECT_NEAR(path_capability(path), -0.075, 0.075 * 1e-12);
  const std::vector<LinkMetricInputs> links{in(4e6, 1e6, 50e6, 40e6), in(8.5e6, 10e6, 50e6, 30e6)};
  EXPECT_DOUBLE_EQ(path_capability(links), b);
}

TEST(RecoveryCapability, FullPool) {
  EXPECT_EQ(recovery_capability(in(5e6, 1e6, 50e6, 50e6)), kInfinity);
  EXPECT_EQ(recovery_capability(in(5e6, 5e6, 50e6, 50e6)), kInfinity);
  // deficit at a full pool: clamped denominator, large negative
  EXPECT_DOUBLE_EQ(recovery_capability(in(5e6, 6e6, 50e6, 50e6)), -1e6 / kCapabilityEpsilonBits);
}

TEST(PathCapability, SmallCases) {
  const std::vector<double> one{0.7};
  EXPECT_DOUBLE_EQ(path_capability(one), 0.7);
  const std::vector<double> with_inf{kInfinity, 0.3};
  EXPECT_DOUBLE_EQ(path_capability(with_inf), 0.3);
  EXPECT_THROW(path_capability(std::span<const double>{}), std::invalid_argument);
  EXPECT_THROW(path_capability(std::span<const LinkMetricInputs>{}), std::invalid_argument);
}

TEST(SustainableWorkingTime, Cases) {
  EXPECT_DOUBLE_EQ(sustainable_working_time(in(5.6e6, 6e6, 50e6, 10e6, 0.0)), 25.0);
  EXPECT_DOUBLE_EQ(sustainable_working_time(in(5.6e6, 6e6, 50e6, 10e6, 2e6)), 20.0);
  EXPECT_EQ(sustainable_working_time(in(4e6, 1e6, 50e6, 40e6)), kInfinity);
  EXPECT_EQ(sustainable_working_time(in(4e6, 4e6, 50e6, 40e6)), kInfinity);
}

TEST(RecoveryCapabilityProperty, Monotone) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 20000; ++i) {
    const double max = 50e6;
    const double cur = u(rng) * (max - 1e6);  // keep away from the epsilon clamp
    const double gen = 1e5 + u(rng) * 1e7;
    const double traffic = u(rng) * 1e7;
    const double base = recovery_capability(in(gen, traffic, max, cur));
    ASSERT_GT(recovery_capability(in(gen * 1.01 + 1, traffic, max, cur)), base);
    ASSERT_LT(recovery_capability(in(gen, traffic * 1.01 + 1, max, cur)), base);
    if (gen > traffic) ASSERT_GT(recovery_capability(in(gen, traffic, max, cur + 1e5)), base);
  }
}

TEST(Extrapolation, AgesAndClamps) {
  KeyStateAd ad{20e6, 50e6, 5e6, 6e6};
  EXPECT_DOUBLE_EQ(extrapolate_cur_bits(ad, 0.0, 2e6), 20e6);
  EXPECT_DOUBLE_EQ(extrapolate_cur_bits(ad, 5.0, 2e6), 15e6);
  EXPECT_DOUBLE_EQ(extrapolate_cur_bits(ad, 100.0, 2e6), 2e6);
  KeyStateAd up{45e6, 50e6, 5e6, 1e6};
  EXPECT_DOUBLE_EQ(extrapolate_cur_bits(up, 10.0, 2e6), 50e6);
  KeyStateAd low{1e6, 50e6, 1e6, 3e6};
  EXPECT_DOUBLE_EQ(extrapolate_cur_bits(low, 10.0, 2e6), 1e6);
}
