#pragma once

#include <string_view>

#include "qkdsim/types.hpp"

namespace qkdsim {

/// MIN reserves authentication key and is never spendable; WARN is the
/// pre-sensing threshold; MAX bounds storage.
struct PoolThresholds {
  double min_bits = 2e6;
  double warn_bits = 10e6;
  double max_bits = 50e6;

  /// Throws ConfigError unless 0 <= min < warn < max.
  void validate() const;
};

enum class PoolState { Ready, Warning, Unavailable };

std::string_view to_string(PoolState s);

/// Classification with the boundary convention cur == warn -> Ready,
/// cur == min -> Warning.
PoolState classify(double cur_bits, const PoolThresholds& t);

enum class ConsumeResult { Consumed, Insufficient };

/// Key inventory of one undirected link, shared by both endpoints.
///
/// Generation is continuous at the link rate and materialized lazily: every
/// observation first accrues up to `now`. Bits generated while the pool sits
/// at MAX are discarded and tallied in wasted_bits().
class KeyPool {
 public:
  KeyPool(PoolThresholds thresholds, double gen_rate_bps, double initial_bits,
          Seconds start_time = 0.0);

  /// Throws SimulationIntegrityError if `now` precedes the last accrual.
  void accrue(Seconds now);

  /// All-or-nothing draw that never crosses MIN. Throws std::invalid_argument
  /// for bits <= 0.
  ConsumeResult consume(double bits, Seconds now);

  PoolState state(Seconds now);

  double current_bits() const { return cur_bits_; }
  Seconds last_accrual_time() const { return last_accrual_; }
  double gen_rate_bps() const { return gen_rate_bps_; }
  const PoolThresholds& thresholds() const { return thresholds_; }

  /// Exponentially weighted consumption rate (time constant 1 s), decayed to `now`.
  double consumption_rate_bps(Seconds now) const;

  double generated_bits() const { return generated_bits_; }
  double wasted_bits() const { return wasted_bits_; }
  double consumed_bits() const { return consumed_bits_; }
  double initial_bits() const { return initial_bits_; }

  static constexpr double kRateTimeConstant = 1.0;

 private:
  PoolThresholds thresholds_;
  double gen_rate_bps_;
  double cur_bits_;
  double initial_bits_;
  Seconds last_accrual_;

  double generated_bits_ = 0.0;
  double wasted_bits_ = 0.0;
  double consumed_bits_ = 0.0;

  double ema_bps_ = 0.0;
  Seconds ema_time_ = 0.0;
};

}  // namespace qkdsim
