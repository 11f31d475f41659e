#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <unordered_map>
#include <utility>
#include <variant>
#include <vector>

#include "qkdsim/event_queue.hpp"
#include "qkdsim/key_pool.hpp"
#include "qkdsim/messages.hpp"
#include "qkdsim/metrics.hpp"
#include "qkdsim/olsr_node.hpp"
#include "qkdsim/routing.hpp"
#include "qkdsim/topology.hpp"
#include "qkdsim/workload.hpp"

namespace qkdsim {

struct SimConfig {
  Seconds duration_s = 100.0;
  std::uint64_t seed = 1;
  Seconds hello_interval_s = 2.0;
  Seconds tc_interval_s = 5.0;
  int neighbor_hold_multiplier = 3;
  Seconds per_hop_processing_delay_s = 1e-3;
  double fiber_speed_km_per_s = 2e5;
  Seconds metrics_tick_s = 1.0;

  Seconds neighbor_hold() const { return neighbor_hold_multiplier * hello_interval_s; }
  Seconds topology_hold() const { return 3.0 * tc_interval_s; }

  /// Throws ConfigError on non-positive durations/intervals or a hold
  /// multiplier below 2.
  void validate() const;
};

enum class RoutingMode {
  Dynamic,       ///< HELLO/TC protocol running
  StaticMinHop,  ///< precomputed min-hop routes, no routing messages
};

struct SimOptions {
  Protocol protocol = Protocol::Olsr;
  bool extrapolate_key_state = true;
  RoutingMode routing = RoutingMode::Dynamic;
  PoolThresholds thresholds{};
  /// Initial content of every pool; MAX when unset.
  std::optional<double> initial_pool_bits;
  std::map<LinkId, double> initial_pool_override;
  /// (src, dst) pairs whose path changes are logged as PathSwitch records.
  std::vector<std::pair<NodeId, NodeId>> tracked_pairs;
};

/// Pseudorandom stream with a portable mapping from 64-bit draws to doubles.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double exponential(double rate) { return -std::log1p(-uniform()) / rate; }

 private:
  std::mt19937_64 gen_;
};

struct EmitHello {
  NodeId node;
};
struct EmitTc {
  NodeId node;
};
struct PacketRef {
  std::uint64_t id;
};
using Message =
    std::variant<std::shared_ptr<const HelloMessage>, std::shared_ptr<const TcMessage>, PacketRef>;
struct DeliverMessage {
  LinkId link;
  NodeId from;
  NodeId to;
  Message message;
};
struct PacketArrival {
  std::uint32_t flow;
};
struct RouteRecompute {
  NodeId node;
};
struct MetricsTick {};

using EventKind =
    std::variant<EmitHello, EmitTc, DeliverMessage, PacketArrival, RouteRecompute, MetricsTick>;

struct PathSwitch {
  Seconds time = 0.0;
  NodeId src = 0;
  NodeId dst = 0;
  std::vector<NodeId> from;  ///< empty if there was no route
  std::vector<NodeId> to;    ///< empty if the route was lost
};

struct LinkStats {
  double data_bits = 0.0;
  double routing_bits = 0.0;
  /// Data keys drawn while the pool was below WARN (the pre-sensing band).
  double data_bits_below_warn = 0.0;
  std::optional<Seconds> first_below_warn;
  std::optional<Seconds> first_hello_suppressed;
  std::uint64_t hellos_sent = 0;
  std::uint64_t hellos_suppressed = 0;      ///< QOLSR gate closed
  std::uint64_t routing_insufficient = 0;   ///< routing message could not be keyed
  std::uint64_t data_insufficient = 0;
};

/// Hooks for tests and tracing; all default to no-ops.
class SimObserver {
 public:
  virtual ~SimObserver() = default;
  virtual void on_delivery(const DataPacket&, Seconds) {}
  virtual void on_drop(const DataPacket&, DropReason, Seconds) {}
  virtual void on_route_change(NodeId /*node*/, NodeId /*dst*/, const Route* /*before*/,
                               const Route* /*after*/, Seconds) {}
};

struct RunResult {
  MetricsLog log;
  RunSummary summary;
  std::uint64_t trace_hash = 0;
  std::uint64_t events_executed = 0;
  std::vector<PathSwitch> path_switches;
  std::uint64_t route_changes = 0;
  std::vector<LinkStats> links;
  std::uint64_t in_flight_packets = 0;
  std::uint64_t in_flight_key_bits = 0;
  std::uint64_t malformed_messages = 0;
  double wasted_generation_bits = 0.0;
  /// Sum over pools of bits drawn, for the key-ledger audit.
  double pool_consumed_bits = 0.0;
};

/// One deterministic simulation instance. Single-threaded; independent
/// instances share nothing and may run concurrently.
class Simulator {
 public:
  Simulator(Topology topo, SimConfig cfg, SimOptions opts, Workload workload);
  Simulator(const Simulator&) = delete;
  Simulator& operator=(const Simulator&) = delete;

  /// Executes every event with fire time <= duration_s.
  RunResult run();

  void set_observer(SimObserver* observer) { observer_ = observer; }

  const Topology& topology() const { return topo_; }
  const OlsrNode& node(NodeId n) const { return nodes_.at(n - 1); }
  const KeyPool& pool(LinkId l) const { return pools_.at(l); }
  Seconds now() const { return queue_.now(); }
  const SimConfig& config() const { return cfg_; }

  /// Schedules delivery of `message` across `link` after propagation plus
  /// processing delay. Key consumption is the caller's job.
  void transmit(LinkId link, NodeId from, Message message);
  Seconds link_delay(LinkId link) const;

 private:
  void dispatch(Event<EventKind>& ev);
  void on_emit_hello(NodeId n);
  void on_emit_tc(NodeId n);
  void on_deliver(DeliverMessage& d);
  void on_packet_arrival(std::uint32_t flow);
  void on_route_check(NodeId n);
  void on_tick();

  void forward(NodeId at, DataPacket& p);
  void finish(DataPacket& p, const Outcome& outcome);
  bool send_routing(NodeId from, LinkId link, std::uint64_t bits);
  KeyStateAd advertise(LinkId link);
  void note_consumption(LinkId link);
  void recompute_routes(NodeId n);
  void schedule_next_arrival(std::uint32_t flow);
  Seconds jittered(Seconds interval);
  void hash_event(const Event<EventKind>& ev);
  void mix(std::uint64_t v);
  void mix_bytes(const std::vector<std::uint8_t>& bytes);

  Topology topo_;
  SimConfig cfg_;
  SimOptions opts_;
  Workload workload_;
  Rng rng_;
  EventQueue<EventKind> queue_;
  std::vector<KeyPool> pools_;
  std::vector<OlsrNode> nodes_;
  MetricsLog log_;
  std::vector<LinkStats> link_stats_;
  std::unordered_map<std::uint64_t, DataPacket> in_flight_;
  std::uint64_t next_packet_id_ = 0;
  std::uint64_t trace_hash_ = 0xcbf29ce484222325ULL;
  std::uint64_t events_ = 0;
  std::uint64_t route_changes_ = 0;
  std::uint64_t malformed_ = 0;
  std::vector<PathSwitch> path_switches_;
  std::vector<std::vector<NodeId>> tracked_dsts_;  // per source node
  SimObserver* observer_ = nullptr;
  bool ran_ = false;
};

}  // namespace qkdsim
