#include "qkdsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qkdsim {

std::string_view to_string(DropReason r) {
  switch (r) {
    case DropReason::NoRoute: return "no_route";
    case DropReason::KeyInsufficient: return "key_insufficient";
    case DropReason::TtlExceeded: return "ttl_exceeded";
  }
  return "?";
}

MetricsLog::MetricsLog(Seconds duration, Seconds bucket_width) : width_(bucket_width) {
  if (!(bucket_width > 0.0) || !(duration > 0.0)) {
    throw std::invalid_argument("metrics: duration and bucket width must be positive");
  }
  buckets_.resize(static_cast<std::size_t>(std::ceil(duration / bucket_width)));
}

Bucket& MetricsLog::bucket_at(Seconds t) {
  auto idx = static_cast<std::size_t>(std::max(0.0, std::floor(t / width_)));
  return buckets_[std::min(idx, buckets_.size() - 1)];
}

void MetricsLog::record_outcome(DataPacket& packet, const Outcome& outcome) {
  if (packet.finalized) {
    throw SimulationIntegrityError("packet " + std::to_string(packet.id) + " finalized twice");
  }
  packet.finalized = true;
  Bucket& b = bucket_at(packet.send_time);
  ++b.packets_sent;
  ++sent_;
  b.keys_total_bits += packet.keys_consumed_bits;
  tps_ += packet.keys_consumed_bits;
  if (const auto* d = std::get_if<Delivered>(&outcome)) {
    ++b.packets_delivered;
    ++delivered_;
    b.keys_delivered_bits += packet.keys_consumed_bits;
    dps_ += packet.keys_consumed_bits;
    const double owd = d->time - packet.send_time;
    b.owd_sum_s += owd;
    ++b.owd_count;
    owd_sum_ += owd;
  } else {
    ++drops_[static_cast<std::size_t>(std::get<Dropped>(outcome).reason)];
    dropped_keys_ += packet.keys_consumed_bits;
  }
}

void MetricsLog::add_routing_bits(Seconds when, std::uint64_t bits) {
  bucket_at(when).routing_key_bits += bits;
  routing_ += bits;
}

RunSummary finalize(const MetricsLog& log) {
  RunSummary s;
  s.packets_sent = log.packets_sent();
  s.packets_delivered = log.packets_delivered();
  s.drops = log.drops();
  s.dps_bits = log.dps_bits();
  s.tps_bits = log.tps_bits();
  s.qku = quantum_key_utilization(s.dps_bits, s.tps_bits);
  if (s.packets_sent > 0) {
    s.pdr_overall = static_cast<double>(s.packets_delivered) / static_cast<double>(s.packets_sent);
  }
  if (s.packets_delivered > 0) s.mean_owd_s = log.owd_sum_s() / static_cast<double>(s.packets_delivered);
  s.routing_key_bits = log.routing_key_bits();

  const auto& buckets = log.buckets();
  s.buckets.reserve(buckets.size());
  for (std::size_t i = 0; i < buckets.size(); ++i) {
    const Bucket& b = buckets[i];
    BucketSummary bs;
    bs.start = static_cast<double>(i) * log.bucket_width();
    bs.packets_sent = b.packets_sent;
    bs.packets_delivered = b.packets_delivered;
    if (b.packets_sent > 0) {
      bs.pdr = static_cast<double>(b.packets_delivered) / static_cast<double>(b.packets_sent);
    }
    bs.keys_delivered_bits = b.keys_delivered_bits;
    bs.keys_total_bits = b.keys_total_bits;
    bs.routing_key_bits = b.routing_key_bits;
    if (b.owd_count > 0) bs.mean_owd_s = b.owd_sum_s / static_cast<double>(b.owd_count);
    s.buckets.push_back(bs);
  }
  return s;
}

}  // namespace qkdsim
