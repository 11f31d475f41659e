#include "qkdsim/olsr_node.hpp"

#include <algorithm>
#include <optional>

namespace qkdsim {

std::set<NodeId> select_mprs(NodeId self, const std::set<NodeId>& neighbors,
                             const std::map<NodeId, std::set<NodeId>>& reach) {
  // covers[y] = strict two-hop nodes reachable through neighbor y
  std::map<NodeId, std::set<NodeId>> covers;
  std::set<NodeId> strict;
  for (NodeId y : neighbors) {
    auto it = reach.find(y);
    auto& c = covers[y];
    if (it == reach.end()) continue;
    for (NodeId x : it->second) {
      if (x == self || neighbors.count(x)) continue;
      c.insert(x);
      strict.insert(x);
    }
  }

  std::set<NodeId> mprs;
  std::set<NodeId> uncovered = strict;
  auto take = [&](NodeId y) {
    mprs.insert(y);
    for (NodeId x : covers[y]) uncovered.erase(x);
  };

  for (NodeId x : strict) {
    std::optional<NodeId> only;
    int count = 0;
    for (const auto& [y, c] : covers) {
      if (c.count(x)) {
        ++count;
        only = y;
      }
    }
    if (count == 1) take(*only);
  }

  while (!uncovered.empty()) {
    NodeId best = 0;
    std::size_t best_gain = 0, best_degree = 0;
    for (const auto& [y, c] : covers) {
      if (mprs.count(y)) continue;
      std::size_t gain = 0;
      for (NodeId x : c) gain += uncovered.count(x);
      if (gain == 0) continue;
      // `covers` iterates in ascending id, so strict '>' keeps the lower id on ties
      if (gain > best_gain || (gain == best_gain && c.size() > best_degree)) {
        best = y;
        best_gain = gain;
        best_degree = c.size();
      }
    }
    if (best == 0) break;  // unreachable: every strict node has a cover
    take(best);
  }
  return mprs;
}

OlsrNode::OlsrNode(NodeId id, const Topology& topo, PoolThresholds thresholds, Timers timers)
    : id_(id), topo_(&topo), thresholds_(thresholds), timers_(timers) {}

std::set<NodeId> OlsrNode::symmetric_neighbors(Seconds now) const {
  std::set<NodeId> out;
  for (const auto& [n, e] : neighbors_) {
    if (e.symmetric && e.expiry > now) out.insert(n);
  }
  return out;
}

std::map<NodeId, std::set<NodeId>> OlsrNode::two_hop_view(Seconds now) const {
  std::map<NodeId, std::set<NodeId>> out;
  auto sym = symmetric_neighbors(now);
  for (const auto& [n, e] : two_hop_) {
    if (e.expiry > now && sym.count(n)) out[n] = e.reach;
  }
  return out;
}

std::set<NodeId> OlsrNode::mpr_selectors(Seconds now) const {
  std::set<NodeId> out;
  for (const auto& [n, expiry] : selectors_) {
    if (expiry > now) out.insert(n);
  }
  return out;
}

bool OlsrNode::store_key_state(LinkId link, const KeyStateAd& ad, Seconds measured_at) {
  const PoolState cat = classify(ad.cur_bits, thresholds_);
  auto it = key_state_.find(link);
  if (it == key_state_.end()) {
    key_state_.emplace(link, KeyStateRecord{ad, measured_at, cat});
    return false;
  }
  if (measured_at < it->second.measured_at) return false;
  const bool flip = it->second.category != cat;
  it->second = KeyStateRecord{ad, measured_at, cat};
  return flip;
}

OlsrNode::HelloOutcome OlsrNode::handle_hello(const HelloMessage& msg, LinkId arrival_link,
                                              Seconds now) {
  HelloOutcome out;
  const Link& l = topo_->link(arrival_link);
  if (!l.has_endpoint(id_) || l.other(id_) != msg.originator || msg.link != arrival_link) {
    out.malformed = true;
    return out;
  }
  const NodeId from = msg.originator;
  const auto sym_before = symmetric_neighbors(now);
  const auto two_hop_before = two_hop_view(now);

  auto listed = std::find_if(msg.neighbors.begin(), msg.neighbors.end(),
                             [this](const HelloEntry& e) { return e.neighbor == id_; });
  const bool heard_back = listed != msg.neighbors.end();

  NeighborEntry& entry = neighbors_[from];
  entry.link = arrival_link;
  entry.symmetric = heard_back;
  entry.expiry = now + timers_.neighbor_hold;

  if (heard_back) {
    TwoHopEntry th;
    for (const auto& e : msg.neighbors) {
      if (e.code != LinkCode::Heard && e.neighbor != id_) th.reach.insert(e.neighbor);
    }
    th.expiry = now + timers_.neighbor_hold;
    two_hop_[from] = std::move(th);
  } else {
    two_hop_.erase(from);
  }

  const bool selects_us = heard_back && listed->code == LinkCode::Mpr;
  if (selects_us) {
    auto [it, inserted] = selectors_.insert_or_assign(from, now + timers_.neighbor_hold);
    (void)it;
    if (inserted) selectors_changed_ = true;
  } else if (selectors_.erase(from) > 0) {
    selectors_changed_ = true;
  }

  out.category_flip = store_key_state(arrival_link, msg.ad, msg.origin_time);
  out.neighborhood_changed =
      symmetric_neighbors(now) != sym_before || two_hop_view(now) != two_hop_before;
  return out;
}

OlsrNode::TcOutcome OlsrNode::handle_tc(const TcMessage& msg, NodeId sender, Seconds now) {
  TcOutcome out;
  if (msg.originator == id_) return out;
  auto nb = neighbors_.find(sender);
  if (nb == neighbors_.end() || !nb->second.symmetric || nb->second.expiry <= now) return out;

  const auto key = std::make_pair(msg.originator, msg.seq);
  if (auto d = duplicates_.find(key); d != duplicates_.end() && d->second > now) {
    out.duplicate = true;
    return out;
  }
  duplicates_[key] = now + timers_.duplicate_hold;
  out.accepted = true;

  auto valid_from = [&](NodeId orig) {
    std::set<NodeId> s;
    for (const auto& [k, rec] : topology_) {
      if (k.first == orig && rec.expiry > now) s.insert(k.second);
    }
    return s;
  };

  auto known = originator_ansn_.find(msg.originator);
  if (known == originator_ansn_.end() || msg.ansn >= known->second) {
    const auto before = valid_from(msg.originator);
    if (known == originator_ansn_.end() || msg.ansn > known->second) {
      std::erase_if(topology_, [&](const auto& kv) { return kv.first.first == msg.originator; });
    }
    for (NodeId s : msg.selectors) {
      topology_[{msg.originator, s}] = TopologyRecord{msg.ansn, now + timers_.topology_hold};
    }
    originator_ansn_[msg.originator] = msg.ansn;
    out.topology_changed = valid_from(msg.originator) != before;
  }

  for (const auto& la : msg.ads) {
    if (la.link >= topo_->links().size()) continue;
    if (store_key_state(la.link, la.ad, msg.origin_time)) out.category_flip = true;
  }

  auto sel = selectors_.find(sender);
  out.forward = sel != selectors_.end() && sel->second > now;
  return out;
}

bool OlsrNode::purge(Seconds now) {
  // Entries expiring exactly at `now` are already invisible to the views, so
  // the baseline is what was valid up to and including `now`.
  std::set<NodeId> sym_prev;
  for (const auto& [n, e] : neighbors_) {
    if (e.symmetric && e.expiry >= now) sym_prev.insert(n);
  }
  std::map<NodeId, std::set<NodeId>> th_prev;
  for (const auto& [n, e] : two_hop_) {
    if (e.expiry >= now && sym_prev.count(n)) th_prev[n] = e.reach;
  }

  std::erase_if(neighbors_, [now](const auto& kv) { return kv.second.expiry <= now; });
  std::erase_if(two_hop_, [now](const auto& kv) { return kv.second.expiry <= now; });
  const auto sel_before = selectors_.size();
  std::erase_if(selectors_, [now](const auto& kv) { return kv.second <= now; });
  if (selectors_.size() != sel_before) selectors_changed_ = true;
  std::erase_if(duplicates_, [now](const auto& kv) { return kv.second <= now; });

  return symmetric_neighbors(now) != sym_prev || two_hop_view(now) != th_prev;
}

bool OlsrNode::has_expired_topology(Seconds now) const {
  return std::any_of(topology_.begin(), topology_.end(),
                     [now](const auto& kv) { return kv.second.expiry <= now; });
}

void OlsrNode::purge_topology(Seconds now) {
  std::erase_if(topology_, [now](const auto& kv) { return kv.second.expiry <= now; });
}

void OlsrNode::update_mprs(Seconds now) {
  mpr_set_ = select_mprs(id_, symmetric_neighbors(now), two_hop_view(now));
}

HelloMessage OlsrNode::build_hello(LinkId link, const KeyStateAd& ad, Seconds now) const {
  HelloMessage h;
  h.originator = id_;
  h.link = link;
  h.origin_time = now;
  h.ad = ad;
  for (const auto& [n, e] : neighbors_) {
    if (e.expiry <= now) continue;
    LinkCode code = LinkCode::Heard;
    if (e.symmetric) code = mpr_set_.count(n) ? LinkCode::Mpr : LinkCode::Symmetric;
    h.neighbors.push_back({n, code});
  }
  return h;
}

std::optional<TcMessage> OlsrNode::build_tc(std::vector<LinkAd> ads, Seconds now) {
  auto sel = mpr_selectors(now);
  if (sel.empty()) return std::nullopt;
  if (selectors_changed_) {
    ++ansn_;
    selectors_changed_ = false;
  }
  TcMessage tc;
  tc.originator = id_;
  tc.seq = ++tc_seq_;
  tc.ansn = ansn_;
  tc.origin_time = now;
  tc.selectors.assign(sel.begin(), sel.end());
  tc.ads = std::move(ads);
  return tc;
}

}  // namespace qkdsim
