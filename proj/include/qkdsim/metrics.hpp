#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "qkdsim/types.hpp"

namespace qkdsim {

enum class DropReason : std::uint8_t { NoRoute = 0, KeyInsufficient = 1, TtlExceeded = 2 };
inline constexpr std::size_t kDropReasonCount = 3;

std::string_view to_string(DropReason r);

struct DataPacket {
  std::uint64_t id = 0;
  std::uint32_t flow = 0;
  NodeId src = 0;
  NodeId dst = 0;
  std::uint32_t size_bits = 0;
  Seconds send_time = 0.0;
  /// Nodes reached so far, excluding the source; one OTP draw per entry.
  std::vector<NodeId> hops_traversed;
  std::uint64_t keys_consumed_bits = 0;
  bool finalized = false;
};

struct Delivered {
  Seconds time;
};
struct Dropped {
  DropReason reason;
};
using Outcome = std::variant<Delivered, Dropped>;

/// Per-second accounting, bucketed by packet send time (routing key bits by
/// consumption time).
struct Bucket {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::uint64_t keys_delivered_bits = 0;  ///< DPS contribution
  std::uint64_t keys_total_bits = 0;      ///< TPS contribution
  std::uint64_t routing_key_bits = 0;
  double owd_sum_s = 0.0;
  std::uint64_t owd_count = 0;
};

/// Snapshot taken by each metrics tick.
struct TickRecord {
  Seconds time = 0.0;
  std::uint32_t links_ready = 0;
  std::uint32_t links_warning = 0;
  std::uint32_t links_unavailable = 0;
  double mean_pool_bits = 0.0;
};

class MetricsLog {
 public:
  explicit MetricsLog(Seconds duration, Seconds bucket_width = 1.0);

  /// Finalizes a packet. Throws SimulationIntegrityError on a second call for
  /// the same packet.
  void record_outcome(DataPacket& packet, const Outcome& outcome);
  void add_routing_bits(Seconds when, std::uint64_t bits);
  void add_tick(const TickRecord& tick) { ticks_.push_back(tick); }

  const std::vector<Bucket>& buckets() const { return buckets_; }
  const std::vector<TickRecord>& ticks() const { return ticks_; }
  Seconds bucket_width() const { return width_; }

  std::uint64_t dps_bits() const { return dps_; }
  std::uint64_t tps_bits() const { return tps_; }
  std::uint64_t dropped_key_bits() const { return dropped_keys_; }
  std::uint64_t routing_key_bits() const { return routing_; }
  std::uint64_t packets_sent() const { return sent_; }
  std::uint64_t packets_delivered() const { return delivered_; }
  const std::array<std::uint64_t, kDropReasonCount>& drops() const { return drops_; }
  std::uint64_t drops(DropReason r) const { return drops_[static_cast<std::size_t>(r)]; }
  double owd_sum_s() const { return owd_sum_; }

 private:
  Bucket& bucket_at(Seconds t);

  Seconds width_;
  std::vector<Bucket> buckets_;
  std::vector<TickRecord> ticks_;
  std::uint64_t dps_ = 0, tps_ = 0, dropped_keys_ = 0, routing_ = 0;
  std::uint64_t sent_ = 0, delivered_ = 0;
  std::array<std::uint64_t, kDropReasonCount> drops_{};
  double owd_sum_ = 0.0;
};

struct BucketSummary {
  Seconds start = 0.0;
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::optional<double> pdr;  ///< nullopt for empty buckets
  std::uint64_t keys_delivered_bits = 0;
  std::uint64_t keys_total_bits = 0;
  std::uint64_t routing_key_bits = 0;
  std::optional<double> mean_owd_s;
};

/// Run-level aggregates. Ratios with an empty denominator are nullopt, never 0.
struct RunSummary {
  std::uint64_t packets_sent = 0;
  std::uint64_t packets_delivered = 0;
  std::array<std::uint64_t, kDropReasonCount> drops{};
  std::uint64_t dps_bits = 0;
  std::uint64_t tps_bits = 0;
  std::optional<double> qku;
  std::optional<double> pdr_overall;
  std::uint64_t routing_key_bits = 0;
  std::optional<double> mean_owd_s;
  std::vector<BucketSummary> buckets;
};

RunSummary finalize(const MetricsLog& log);

/// QKU = DPS / TPS, undefined when nothing was spent on data.
inline std::optional<double> quantum_key_utilization(std::uint64_t dps, std::uint64_t tps) {
  if (tps == 0) return std::nullopt;
  return static_cast<double>(dps) / static_cast<double>(tps);
}

}  // namespace qkdsim
