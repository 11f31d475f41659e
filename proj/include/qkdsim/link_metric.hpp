#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>

#include "qkdsim/key_pool.hpp"
#include "qkdsim/messages.hpp"
#include "qkdsim/types.hpp"

namespace qkdsim {

/// Per-link inputs to the key-aware routing metrics.
struct LinkMetricInputs {
  double gen_rate_bps = 0.0;  ///< key generation rate of the link
  double traffic_bps = 0.0;   ///< key consumption rate crossing the link
  double cur_bits = 0.0;      ///< remaining keys
  double max_bits = 0.0;      ///< pool capacity
  double min_bits = 0.0;      ///< unspendable reserve
};

/// Denominator clamp for a full (or nearly full) pool.
inline constexpr double kCapabilityEpsilonBits = 1000.0;

/// Time until the spendable part of the pool runs out, or +inf when
/// generation keeps up with consumption. Counts only bits above MIN.
inline Seconds sustainable_working_time(const LinkMetricInputs& m) {
  if (m.traffic_bps <= m.gen_rate_bps) return kInfinity;
  return std::max(0.0, m.cur_bits - m.min_bits) / (m.traffic_bps - m.gen_rate_bps);
}

/// Key recovery capability (1/s): net generation over the room left to MAX.
/// Higher means the pool refills towards full faster.
inline double recovery_capability(const LinkMetricInputs& m) {
  const double surplus = m.gen_rate_bps - m.traffic_bps;
  const double room = m.max_bits - m.cur_bits;
  if (room <= 0.0 && surplus >= 0.0) return kInfinity;
  return surplus / std::max(room, kCapabilityEpsilonBits);
}

/// Path priority is its weakest link.
inline double path_capability(std::span<const double> link_capabilities) {
  if (link_capabilities.empty()) throw std::invalid_argument("path_capability: empty path");
  return *std::min_element(link_capabilities.begin(), link_capabilities.end());
}

inline double path_capability(std::span<const LinkMetricInputs> links) {
  if (links.empty()) throw std::invalid_argument("path_capability: empty path");
  double best = kInfinity;
  for (const auto& l : links) best = std::min(best, recovery_capability(l));
  return best;
}

/// Ages an advertisement to `age` seconds after it was measured, assuming
/// generation and consumption held steady. Never extrapolates past MAX, and
/// never below MIN unless the advertised value already was.
inline double extrapolate_cur_bits(const KeyStateAd& ad, Seconds age, double min_bits) {
  const double est = ad.cur_bits + (ad.gen_rate_bps - ad.measured_consumption_bps) * std::max(0.0, age);
  const double lo = std::min(ad.cur_bits, min_bits);
  return std::clamp(est, lo, std::max(lo, ad.max_bits));
}

}  // namespace qkdsim
