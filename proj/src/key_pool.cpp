#include "qkdsim/key_pool.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qkdsim {

void PoolThresholds::validate() const {
  if (!(min_bits >= 0.0 && min_bits < warn_bits && warn_bits < max_bits)) {
    throw ConfigError("pool thresholds must satisfy 0 <= min < warn < max");
  }
}

std::string_view to_string(PoolState s) {
  switch (s) {
    case PoolState::Ready: return "ready";
    case PoolState::Warning: return "warning";
    case PoolState::Unavailable: return "unavailable";
  }
  return "?";
}

PoolState classify(double cur_bits, const PoolThresholds& t) {
  if (cur_bits >= t.warn_bits) return PoolState::Ready;
  if (cur_bits >= t.min_bits) return PoolState::Warning;
  return PoolState::Unavailable;
}

KeyPool::KeyPool(PoolThresholds thresholds, double gen_rate_bps, double initial_bits,
                 Seconds start_time)
    : thresholds_(thresholds), gen_rate_bps_(gen_rate_bps), cur_bits_(initial_bits),
      initial_bits_(initial_bits), last_accrual_(start_time), ema_time_(start_time) {
  thresholds_.validate();
  if (!(gen_rate_bps_ > 0.0)) throw ConfigError("key generation rate must be positive");
  if (!(initial_bits >= 0.0 && initial_bits <= thresholds_.max_bits)) {
    throw ConfigError("initial pool content must lie in [0, max]");
  }
}

void KeyPool::accrue(Seconds now) {
  if (now < last_accrual_) {
    throw SimulationIntegrityError("key pool accrual time regression: " + std::to_string(now) +
                                   " < " + std::to_string(last_accrual_));
  }
  const double produced = gen_rate_bps_ * (now - last_accrual_);
  const double room = thresholds_.max_bits - cur_bits_;
  generated_bits_ += produced;
  if (produced > room) {
    wasted_bits_ += produced - room;
    cur_bits_ = thresholds_.max_bits;
  } else {
    cur_bits_ += produced;
  }
  last_accrual_ = now;
}

ConsumeResult KeyPool::consume(double bits, Seconds now) {
  if (!(bits > 0.0)) throw std::invalid_argument("consume_keys: bits must be positive");
  accrue(now);
  if (cur_bits_ - bits < thresholds_.min_bits) return ConsumeResult::Insufficient;
  cur_bits_ -= bits;
  consumed_bits_ += bits;

  ema_bps_ = ema_bps_ * std::exp(-(now - ema_time_) / kRateTimeConstant) + bits / kRateTimeConstant;
  ema_time_ = now;
  return ConsumeResult::Consumed;
}

PoolState KeyPool::state(Seconds now) {
  accrue(now);
  return classify(cur_bits_, thresholds_);
}

double KeyPool::consumption_rate_bps(Seconds now) const {
  const Seconds age = std::max(0.0, now - ema_time_);
  return ema_bps_ * std::exp(-age / kRateTimeConstant);
}

}  // namespace qkdsim
