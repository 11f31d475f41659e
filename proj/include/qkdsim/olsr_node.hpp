#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <utility>
#include <vector>

#include "qkdsim/key_pool.hpp"
#include "qkdsim/messages.hpp"
#include "qkdsim/path_select.hpp"
#include "qkdsim/topology.hpp"

namespace qkdsim {

/// Greedy MPR selection: first every neighbor that is the only way to reach
/// some strict two-hop node, then repeatedly the neighbor covering the most
/// still-uncovered two-hop nodes (ties: larger two-hop degree, then lower id).
///
/// `reach` maps each symmetric neighbor to the nodes it advertises as its own
/// symmetric neighbors. Strict two-hop nodes exclude `self` and `neighbors`.
std::set<NodeId> select_mprs(NodeId self, const std::set<NodeId>& neighbors,
                             const std::map<NodeId, std::set<NodeId>>& reach);

struct NeighborEntry {
  LinkId link = kNoLink;
  bool symmetric = false;
  Seconds expiry = 0.0;
};

struct TwoHopEntry {
  std::set<NodeId> reach;
  Seconds expiry = 0.0;
};

struct TopologyRecord {
  std::uint64_t ansn = 0;
  Seconds expiry = 0.0;
};

struct KeyStateRecord {
  KeyStateAd ad;
  Seconds measured_at = 0.0;
  PoolState category = PoolState::Ready;
};

struct Timers {
  Seconds neighbor_hold = 6.0;
  Seconds topology_hold = 15.0;
  Seconds duplicate_hold = 30.0;
};

/// Protocol tables of one node: link sensing, two-hop and MPR state,
/// topology learned from TC floods and the freshest key state per link.
///
/// The node never touches key pools; the simulator gates, charges and
/// transmits the messages this class builds.
class OlsrNode {
 public:
  OlsrNode(NodeId id, const Topology& topo, PoolThresholds thresholds, Timers timers);

  NodeId id() const { return id_; }

  struct HelloOutcome {
    bool neighborhood_changed = false;  ///< symmetric set or two-hop view changed
    bool category_flip = false;         ///< advertised pool state category changed
    bool malformed = false;
  };
  HelloOutcome handle_hello(const HelloMessage& msg, LinkId arrival_link, Seconds now);

  struct TcOutcome {
    bool duplicate = false;
    bool accepted = false;  ///< from a symmetric neighbor, not our own
    bool topology_changed = false;
    bool category_flip = false;
    bool forward = false;  ///< sender selected us as MPR
  };
  TcOutcome handle_tc(const TcMessage& msg, NodeId sender, Seconds now);

  /// Drops expired neighbor, two-hop, selector and duplicate entries.
  /// Returns true if the symmetric neighborhood or two-hop view changed.
  bool purge(Seconds now);

  /// True if some topology record has expired but is still stored.
  bool has_expired_topology(Seconds now) const;
  void purge_topology(Seconds now);

  /// Recomputes the MPR set from the current tables.
  void update_mprs(Seconds now);

  HelloMessage build_hello(LinkId link, const KeyStateAd& ad, Seconds now) const;

  /// Returns nullopt when there are no MPR selectors. `ads` must describe the
  /// node's own links. Bumps ANSN if the selector set changed.
  std::optional<TcMessage> build_tc(std::vector<LinkAd> ads, Seconds now);

  std::set<NodeId> symmetric_neighbors(Seconds now) const;
  std::map<NodeId, std::set<NodeId>> two_hop_view(Seconds now) const;
  std::set<NodeId> mpr_selectors(Seconds now) const;
  const std::set<NodeId>& mpr_set() const { return mpr_set_; }
  std::uint64_t ansn() const { return ansn_; }

  const std::map<NodeId, NeighborEntry>& neighbor_table() const { return neighbors_; }
  /// (last_hop, destination) -> record, as learned from TC messages.
  const std::map<std::pair<NodeId, NodeId>, TopologyRecord>& topology_table() const { return topology_; }
  const std::map<LinkId, KeyStateRecord>& key_state() const { return key_state_; }

  const RouteMap& routes() const { return routes_; }
  void set_routes(RouteMap routes) { routes_ = std::move(routes); }

  const Topology& topology() const { return *topo_; }
  const PoolThresholds& thresholds() const { return thresholds_; }

 private:
  bool store_key_state(LinkId link, const KeyStateAd& ad, Seconds measured_at);

  NodeId id_;
  const Topology* topo_;
  PoolThresholds thresholds_;
  Timers timers_;

  std::map<NodeId, NeighborEntry> neighbors_;
  std::map<NodeId, TwoHopEntry> two_hop_;
  std::set<NodeId> mpr_set_;
  std::map<NodeId, Seconds> selectors_;
  bool selectors_changed_ = false;
  std::uint64_t ansn_ = 0;
  std::uint64_t tc_seq_ = 0;

  std::map<std::pair<NodeId, NodeId>, TopologyRecord> topology_;
  std::map<NodeId, std::uint64_t> originator_ansn_;
  std::map<LinkId, KeyStateRecord> key_state_;
  std::map<std::pair<NodeId, std::uint64_t>, Seconds> duplicates_;

  RouteMap routes_;
};

}  // namespace qkdsim
