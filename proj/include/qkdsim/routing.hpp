#pragma once

#include <string_view>

#include "qkdsim/key_pool.hpp"
#include "qkdsim/link_metric.hpp"
#include "qkdsim/olsr_node.hpp"
#include "qkdsim/path_select.hpp"

namespace qkdsim {

enum class Protocol { Olsr, Qolsr, MultiSpf };

std::string_view to_string(Protocol p);
/// Accepts "olsr", "qolsr", "multispf". Throws ConfigError otherwise.
Protocol parse_protocol(std::string_view name);

/// Whether routing messages may be sent over a link, before the key draw.
/// OLSR and multi-SPF only need the message to fit above MIN (checked by
/// the draw itself); QOLSR additionally stays silent once the pool leaves
/// Ready. Data packets are never subject to this gate.
bool hello_gate(Protocol p, KeyPool& pool, Seconds now);

/// QOLSR's gate on its own: send routing messages only from a Ready pool.
inline bool hello_gate_qolsr(KeyPool& pool, Seconds now) {
  return pool.state(now) == PoolState::Ready;
}

struct RouteOptions {
  Protocol protocol = Protocol::Olsr;
  /// Age remote key-state advertisements forward to `now`.
  bool extrapolate = true;
};

/// Metric inputs for `link` as known at `node`, or nullopt if the node holds
/// no advertisement for it.
std::optional<LinkMetricInputs> known_link_metric(const OlsrNode& node, LinkId link, Seconds now,
                                                  bool extrapolate);

/// Builds the graph of links known to `node`: its live symmetric neighbor
/// links plus unexpired TC-learned links not touching itself. For key-aware
/// protocols, links whose estimated pool is Unavailable are dropped and edge
/// weights carry the protocol metric.
LinkGraph known_link_graph(const OlsrNode& node, const RouteOptions& opts, Seconds now);

/// OLSR: minimum hop count.
RouteMap compute_routes_min_hop(const OlsrNode& node, Seconds now);
/// QOLSR: maximize the bottleneck key recovery capability.
RouteMap compute_routes_qolsr(const OlsrNode& node, Seconds now, bool extrapolate = true);
/// multi-SPF baseline: maximize the bottleneck of remaining key bits.
RouteMap compute_routes_multispf(const OlsrNode& node, Seconds now, bool extrapolate = true);

RouteMap compute_routes(const OlsrNode& node, const RouteOptions& opts, Seconds now);

}  // namespace qkdsim
