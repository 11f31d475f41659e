#include "qkdsim/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace qkdsim {

void SimConfig::validate() const {
  if (!(duration_s > 0.0)) throw ConfigError("duration_s must be positive");
  if (!(hello_interval_s > 0.0)) throw ConfigError("hello_interval_s must be positive");
  if (!(tc_interval_s > 0.0)) throw ConfigError("tc_interval_s must be positive");
  if (neighbor_hold_multiplier < 2) throw ConfigError("neighbor_hold_multiplier must be >= 2");
  if (!(per_hop_processing_delay_s >= 0.0)) throw ConfigError("per_hop_processing_delay_s must be >= 0");
  if (!(fiber_speed_km_per_s > 0.0)) throw ConfigError("fiber_speed_km_per_s must be positive");
  if (!(metrics_tick_s > 0.0)) throw ConfigError("metrics_tick_s must be positive");
}

Simulator::Simulator(Topology topo, SimConfig cfg, SimOptions opts, Workload workload)
    : topo_(std::move(topo)), cfg_(cfg), opts_(std::move(opts)), workload_(std::move(workload)),
      rng_(cfg.seed), log_((cfg.validate(), cfg.duration_s), cfg.metrics_tick_s) {
  opts_.thresholds.validate();
  if (workload_.kappa_bits == 0) throw ConfigError("packet size must be positive");

  const double init = opts_.initial_pool_bits.value_or(opts_.thresholds.max_bits);
  pools_.reserve(topo_.links().size());
  for (LinkId id = 0; id < topo_.links().size(); ++id) {
    auto ov = opts_.initial_pool_override.find(id);
    pools_.emplace_back(opts_.thresholds, topo_.link(id).key_gen_rate_bps,
                        ov != opts_.initial_pool_override.end() ? ov->second : init, 0.0);
  }
  link_stats_.resize(topo_.links().size());

  Timers timers{cfg_.neighbor_hold(), cfg_.topology_hold(), 30.0};
  nodes_.reserve(topo_.node_count());
  for (NodeId n = 1; n <= topo_.node_count(); ++n) nodes_.emplace_back(n, topo_, opts_.thresholds, timers);

  tracked_dsts_.resize(topo_.node_count());
  for (const auto& [s, t] : opts_.tracked_pairs) {
    if (!topo_.contains(s) || !topo_.contains(t) || s == t) throw ConfigError("bad tracked pair");
    tracked_dsts_[s - 1].push_back(t);
  }

  for (const Flow& f : workload_.flows) {
    if (!topo_.contains(f.src) || !topo_.contains(f.dst) || f.src == f.dst) {
      throw ConfigError("flow endpoints must be distinct topology nodes");
    }
    if (f.pinned && !topo_.find_link(f.src, f.dst)) {
      throw ConfigError("pinned flow needs a direct link " + std::to_string(f.src) + "-" +
                        std::to_string(f.dst));
    }
    if (!(f.rate_pps >= 0.0)) throw ConfigError("flow rate must be non-negative");
  }
}

Seconds Simulator::link_delay(LinkId link) const {
  return topo_.link(link).length_km / cfg_.fiber_speed_km_per_s + cfg_.per_hop_processing_delay_s;
}

void Simulator::transmit(LinkId link, NodeId from, Message message) {
  const Link& l = topo_.link(link);
  if (!l.has_endpoint(from)) throw SimulationIntegrityError("transmit: sender is not on the link");
  queue_.schedule(queue_.now() + link_delay(link),
                  DeliverMessage{link, from, l.other(from), std::move(message)});
}

Seconds Simulator::jittered(Seconds interval) {
  // uniform jitter in [-0.25, 0) x interval
  return interval - 0.25 * interval * (1.0 - rng_.uniform());
}

void Simulator::schedule_next_arrival(std::uint32_t flow) {
  const Flow& f = workload_.flows[flow];
  if (f.rate_pps <= 0.0) return;
  const Seconds gap = workload_.arrivals == ArrivalProcess::Poisson ? rng_.exponential(f.rate_pps)
                                                                    : 1.0 / f.rate_pps;
  queue_.schedule(queue_.now() + gap, PacketArrival{flow});
}

RunResult Simulator::run() {
  if (ran_) throw SimulationIntegrityError("Simulator::run may only be called once");
  ran_ = true;

  if (opts_.routing == RoutingMode::StaticMinHop) {
    LinkGraph full(topo_.node_count());
    for (const auto& l : topo_.links()) full.add_edge(l.a, l.b);
    for (auto& node : nodes_) node.set_routes(min_hop_routes(full, node.id()));
  } else {
    for (NodeId n = 1; n <= topo_.node_count(); ++n) {
      queue_.schedule(0.25 * cfg_.hello_interval_s * rng_.uniform(), EmitHello{n});
    }
    for (NodeId n = 1; n <= topo_.node_count(); ++n) {
      queue_.schedule(jittered(cfg_.tc_interval_s), EmitTc{n});
    }
  }
  for (std::uint32_t i = 0; i < workload_.flows.size(); ++i) schedule_next_arrival(i);
  const auto ticks = static_cast<std::uint64_t>(std::floor(cfg_.duration_s / cfg_.metrics_tick_s + 1e-9));
  for (std::uint64_t k = 1; k <= ticks; ++k) {
    queue_.schedule(static_cast<double>(k) * cfg_.metrics_tick_s, MetricsTick{});
  }

  while (!queue_.empty() && *queue_.next_time() <= cfg_.duration_s) {
    auto ev = queue_.pop();
    ++events_;
    hash_event(ev);
    dispatch(ev);
  }

  RunResult r{log_, finalize(log_)};
  r.trace_hash = trace_hash_;
  r.events_executed = events_;
  r.path_switches = path_switches_;
  r.route_changes = route_changes_;
  r.links = link_stats_;
  r.malformed_messages = malformed_;
  r.in_flight_packets = in_flight_.size();
  for (const auto& [_, p] : in_flight_) r.in_flight_key_bits += p.keys_consumed_bits;
  for (auto& pool : pools_) {
    pool.accrue(std::max(queue_.now(), pool.last_accrual_time()));
    r.wasted_generation_bits += pool.wasted_bits();
    r.pool_consumed_bits += pool.consumed_bits();
  }
  return r;
}

void Simulator::dispatch(Event<EventKind>& ev) {
  std::visit(
      [this](auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, EmitHello>) on_emit_hello(k.node);
        else if constexpr (std::is_same_v<K, EmitTc>) on_emit_tc(k.node);
        else if constexpr (std::is_same_v<K, DeliverMessage>) on_deliver(k);
        else if constexpr (std::is_same_v<K, PacketArrival>) on_packet_arrival(k.flow);
        else if constexpr (std::is_same_v<K, RouteRecompute>) on_route_check(k.node);
        else on_tick();
      },
      ev.kind);
}

KeyStateAd Simulator::advertise(LinkId link) {
  KeyPool& pool = pools_[link];
  const Seconds now = queue_.now();
  pool.accrue(now);
  return KeyStateAd{pool.current_bits(), pool.thresholds().max_bits, pool.gen_rate_bps(),
                    pool.consumption_rate_bps(now)};
}

void Simulator::note_consumption(LinkId link) {
  LinkStats& st = link_stats_[link];
  if (!st.first_below_warn && pools_[link].current_bits() < opts_.thresholds.warn_bits) {
    st.first_below_warn = queue_.now();
  }
}

bool Simulator::send_routing(NodeId from, LinkId link, std::uint64_t bits) {
  (void)from;
  KeyPool& pool = pools_[link];
  const Seconds now = queue_.now();
  LinkStats& st = link_stats_[link];
  if (!hello_gate(opts_.protocol, pool, now)) {
    ++st.hellos_suppressed;
    if (!st.first_hello_suppressed) st.first_hello_suppressed = now;
    return false;
  }
  if (pool.consume(static_cast<double>(bits), now) == ConsumeResult::Insufficient) {
    ++st.routing_insufficient;
    return false;
  }
  st.routing_bits += static_cast<double>(bits);
  note_consumption(link);
  log_.add_routing_bits(now, bits);
  return true;
}

void Simulator::on_emit_hello(NodeId n) {
  const Seconds now = queue_.now();
  OlsrNode& node = nodes_[n - 1];
  for (const auto& adj : topo_.adjacent(n)) {
    auto msg = std::make_shared<HelloMessage>(node.build_hello(adj.link, advertise(adj.link), now));
    if (!send_routing(n, adj.link, msg->size_bits())) continue;
    ++link_stats_[adj.link].hellos_sent;
    transmit(adj.link, n, std::shared_ptr<const HelloMessage>(std::move(msg)));
  }
  queue_.schedule(now + jittered(cfg_.hello_interval_s), EmitHello{n});
}

void Simulator::on_emit_tc(NodeId n) {
  const Seconds now = queue_.now();
  OlsrNode& node = nodes_[n - 1];
  const auto sym = node.symmetric_neighbors(now);
  std::vector<LinkAd> ads;
  for (NodeId m : sym) {
    const LinkId l = node.neighbor_table().at(m).link;
    ads.push_back({l, advertise(l)});
  }
  if (auto tc = node.build_tc(std::move(ads), now)) {
    auto msg = std::make_shared<const TcMessage>(std::move(*tc));
    for (NodeId m : sym) {
      const LinkId l = node.neighbor_table().at(m).link;
      if (send_routing(n, l, msg->size_bits())) transmit(l, n, msg);
    }
  }
  queue_.schedule(now + jittered(cfg_.tc_interval_s), EmitTc{n});
}

void Simulator::on_deliver(DeliverMessage& d) {
  const Seconds now = queue_.now();
  OlsrNode& node = nodes_[d.to - 1];
  if (auto* hello = std::get_if<std::shared_ptr<const HelloMessage>>(&d.message)) {
    auto out = node.handle_hello(**hello, d.link, now);
    if (out.malformed) {
      ++malformed_;
      return;
    }
    if (out.neighborhood_changed) node.update_mprs(now);
    if (out.neighborhood_changed || (out.category_flip && opts_.protocol != Protocol::Olsr)) {
      recompute_routes(d.to);
    }
    queue_.schedule(now + cfg_.neighbor_hold(), RouteRecompute{d.to});
    return;
  }
  if (auto* tc = std::get_if<std::shared_ptr<const TcMessage>>(&d.message)) {
    auto out = node.handle_tc(**tc, d.from, now);
    if (!out.accepted) return;
    if (out.topology_changed || (out.category_flip && opts_.protocol != Protocol::Olsr)) {
      recompute_routes(d.to);
    }
    if (out.forward) {
      for (NodeId m : node.symmetric_neighbors(now)) {
        if (m == d.from) continue;
        const LinkId l = node.neighbor_table().at(m).link;
        if (send_routing(d.to, l, (*tc)->size_bits())) transmit(l, d.to, *tc);
      }
    }
    return;
  }
  const auto id = std::get<PacketRef>(d.message).id;
  DataPacket& p = in_flight_.at(id);
  if (d.to == p.dst) {
    finish(p, Delivered{now});
  } else if (p.hops_traversed.size() >= topo_.node_count()) {
    finish(p, Dropped{DropReason::TtlExceeded});
  } else {
    forward(d.to, p);
  }
}

void Simulator::on_packet_arrival(std::uint32_t flow) {
  const Flow& f = workload_.flows[flow];
  DataPacket p;
  p.id = next_packet_id_++;
  p.flow = flow;
  p.src = f.src;
  p.dst = f.dst;
  p.size_bits = workload_.kappa_bits;
  p.send_time = queue_.now();
  auto [it, _] = in_flight_.emplace(p.id, std::move(p));
  forward(f.src, it->second);
  schedule_next_arrival(flow);
}

void Simulator::forward(NodeId at, DataPacket& p) {
  const Seconds now = queue_.now();
  NodeId next = 0;
  if (workload_.flows[p.flow].pinned) {
    next = p.dst;
  } else {
    const auto& routes = nodes_[at - 1].routes();
    auto r = routes.find(p.dst);
    if (r == routes.end()) {
      finish(p, Dropped{DropReason::NoRoute});
      return;
    }
    next = r->second.next_hop();
  }
  const LinkId link = *topo_.find_link(at, next);
  KeyPool& pool = pools_[link];
  LinkStats& st = link_stats_[link];
  if (pool.consume(p.size_bits, now) == ConsumeResult::Insufficient) {
    ++st.data_insufficient;
    finish(p, Dropped{DropReason::KeyInsufficient});
    return;
  }
  st.data_bits += p.size_bits;
  if (pool.current_bits() < opts_.thresholds.warn_bits) st.data_bits_below_warn += p.size_bits;
  note_consumption(link);
  p.keys_consumed_bits += p.size_bits;
  p.hops_traversed.push_back(next);
  transmit(link, at, PacketRef{p.id});
}

void Simulator::finish(DataPacket& p, const Outcome& outcome) {
  log_.record_outcome(p, outcome);
  if (observer_) {
    if (const auto* d = std::get_if<Delivered>(&outcome)) observer_->on_delivery(p, d->time);
    else observer_->on_drop(p, std::get<Dropped>(outcome).reason, queue_.now());
  }
  in_flight_.erase(p.id);
}

void Simulator::on_route_check(NodeId n) {
  const Seconds now = queue_.now();
  OlsrNode& node = nodes_[n - 1];
  const bool changed = node.purge(now);
  if (changed) node.update_mprs(now);
  if (changed || node.has_expired_topology(now)) recompute_routes(n);
}

void Simulator::recompute_routes(NodeId n) {
  const Seconds now = queue_.now();
  OlsrNode& node = nodes_[n - 1];
  node.purge_topology(now);
  RouteMap fresh = compute_routes(node, {opts_.protocol, opts_.extrapolate_key_state}, now);
  const RouteMap& old = node.routes();

  for (NodeId dst = 1; dst <= topo_.node_count(); ++dst) {
    if (dst == n) continue;
    auto a = old.find(dst);
    auto b = fresh.find(dst);
    const Route* before = a == old.end() ? nullptr : &a->second;
    const Route* after = b == fresh.end() ? nullptr : &b->second;
    const bool same = (!before && !after) || (before && after && before->path == after->path);
    if (same) continue;
    ++route_changes_;
    if (observer_) observer_->on_route_change(n, dst, before, after, now);
    const auto& tracked = tracked_dsts_[n - 1];
    if (std::find(tracked.begin(), tracked.end(), dst) != tracked.end()) {
      path_switches_.push_back(PathSwitch{now, n, dst, before ? before->path : std::vector<NodeId>{},
                                          after ? after->path : std::vector<NodeId>{}});
    }
  }
  node.set_routes(std::move(fresh));
}

void Simulator::on_tick() {
  const Seconds now = queue_.now();
  TickRecord t;
  t.time = now;
  double sum = 0.0;
  for (auto& pool : pools_) {
    switch (pool.state(now)) {
      case PoolState::Ready: ++t.links_ready; break;
      case PoolState::Warning: ++t.links_warning; break;
      case PoolState::Unavailable: ++t.links_unavailable; break;
    }
    sum += pool.current_bits();
  }
  t.mean_pool_bits = pools_.empty() ? 0.0 : sum / static_cast<double>(pools_.size());
  log_.add_tick(t);
}

void Simulator::mix(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    trace_hash_ ^= (v >> (8 * i)) & 0xffU;
    trace_hash_ *= 0x100000001b3ULL;
  }
}

void Simulator::mix_bytes(const std::vector<std::uint8_t>& bytes) {
  for (auto b : bytes) {
    trace_hash_ ^= b;
    trace_hash_ *= 0x100000001b3ULL;
  }
}

void Simulator::hash_event(const Event<EventKind>& ev) {
  mix(std::bit_cast<std::uint64_t>(ev.fire_time));
  mix(ev.sequence);
  mix(ev.kind.index());
  std::visit(
      [this](const auto& k) {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, EmitHello> || std::is_same_v<K, EmitTc> ||
                      std::is_same_v<K, RouteRecompute>) {
          mix(k.node);
        } else if constexpr (std::is_same_v<K, PacketArrival>) {
          mix(k.flow);
        } else if constexpr (std::is_same_v<K, DeliverMessage>) {
          mix(k.link);
          mix(k.from);
          mix(k.to);
          if (auto* h = std::get_if<std::shared_ptr<const HelloMessage>>(&k.message)) mix_bytes(encode(**h));
          else if (auto* t = std::get_if<std::shared_ptr<const TcMessage>>(&k.message)) mix_bytes(encode(**t));
          else mix(std::get<PacketRef>(k.message).id);
        }
      },
      ev.kind);
}

}  // namespace qkdsim
