#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "pctc/mobility.hpp"
#include "pctc/topology.hpp"

namespace pctc {

enum class RouteMetric {
  /// Minimum hop count (first RREQ to arrive wins).
  SP,
  /// Maximum bottleneck weight.
  RPTa,
};

std::string_view to_string(RouteMetric metric);

struct Flow {
  std::uint32_t id = 0;
  NodeId src = 0;
  NodeId dst = 0;
  double start = 0.0;
  double end = 0.0;
  RouteMetric metric = RouteMetric::SP;
};

enum class RouteEventKind { established, broken, rerouted, unreachable };

std::string_view to_string(RouteEventKind kind);

struct RouteEvent {
  std::uint32_t flow = 0;
  double t = 0.0;
  RouteEventKind kind = RouteEventKind::established;
  std::optional<PathInfo> path;
};

/// Route from `src` to `dst` using only edges of `topology`; nullopt when
/// unreachable. SP uses breadth-first search visiting neighbors in
/// ascending id order; RPTa uses the widest-path search.
std::optional<PathInfo> find_route(const Graph& topology, NodeId src, NodeId dst, RouteMetric metric);

/// A topology valid from time `t` until the next snapshot.
struct TopologySnapshot {
  double t = 0.0;
  Graph topology;
};

struct FlowParams {
  /// Re-routing penalty charged after every successful re-route (s).
  double delta = 1.0;
  /// Link rate (Mb/s).
  double rate = 2.0;
  double hop_delay_ms = 5.0;
};

struct FlowSummary {
  std::uint32_t flow = 0;
  RouteMetric metric = RouteMetric::SP;
  std::size_t reroutes = 0;
  double downtime = 0.0;
  double uptime = 0.0;
  double delivered_mb = 0.0;
  /// Delivered volume over flow duration (Mb/s).
  double throughput = 0.0;
  double delay_ms = 0.0;
  std::size_t hops_initial = 0;
};

struct FlowRun {
  std::vector<RouteEvent> events;
  std::vector<FlowSummary> summaries;
};

/// Replays flows over ground truth. A path breaks at the first frame where
/// one of its links is dead; discovery then runs on the current snapshot
/// restricted to links alive at that frame. A flow without a route retries
/// at each later snapshot. Every successful re-route delays traffic by
/// `delta`.
///
/// Throughput proxy: rate * serving time * 1/max(1, mean path degree / 2),
/// divided by the flow duration. Delay proxy: hop_delay_ms times the
/// time-weighted hop count plus 1000 * delta * reroutes per delivered Mb.
FlowRun run_flows(const GroundTruth& truth, std::span<const Flow> flows, std::span<const TopologySnapshot> schedule,
                  const FlowParams& params);

}  // namespace pctc
