#include "pctc/routing.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

namespace pctc {

std::string_view to_string(RouteMetric metric) { return metric == RouteMetric::SP ? "SP" : "RPTa"; }

std::string_view to_string(RouteEventKind kind) {
  switch (kind) {
    case RouteEventKind::established:
      return "established";
    case RouteEventKind::broken:
      return "broken";
    case RouteEventKind::rerouted:
      return "rerouted";
    case RouteEventKind::unreachable:
      return "unreachable";
  }
  return "unknown";
}

namespace {

std::optional<PathInfo> min_hop_path(const Graph& topology, NodeId src, NodeId dst) {
  std::vector<NodeId> parent(topology.size(), WidestTree::kNone);
  std::vector<bool> seen(topology.size(), false);
  std::deque<NodeId> queue{src};
  seen[src] = true;
  while (!queue.empty() && !seen[dst]) {
    const NodeId at = queue.front();
    queue.pop_front();
    topology.for_each_neighbor(at, [&](NodeId next, const WeightedEdge&) {
      if (seen[next]) return;
      seen[next] = true;
      parent[next] = at;
      queue.push_back(next);
    });
  }
  if (!seen[dst]) return std::nullopt;
  PathInfo path;
  for (NodeId at = dst; at != WidestTree::kNone; at = parent[at]) path.nodes.push_back(at);
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.hops = path.nodes.size() - 1;
  path.weight = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    path.weight = std::min(path.weight, topology.find_edge(path.nodes[i], path.nodes[i + 1])->w);
  }
  return path;
}

}  // namespace

std::optional<PathInfo> find_route(const Graph& topology, NodeId src, NodeId dst, RouteMetric metric) {
  if (src >= topology.size() || dst >= topology.size()) throw Error("route endpoint not in topology");
  if (metric == RouteMetric::SP) return min_hop_path(topology, src, dst);
  return widest_path_tree(topology, src).path_to(dst);
}

namespace {

constexpr double kTimeTolerance = 1e-9;

struct FlowState {
  bool started = false;
  bool up = false;
  bool ever_established = false;
  PathInfo path;
  double serve_from = 0.0;
  double contention = 1.0;
  double uptime = 0.0;
  double delivered = 0.0;
  double hop_time = 0.0;
  std::size_t breaks = 0;
  std::size_t hops_initial = 0;
};

double contention_factor(const PathInfo& path, const Graph& topology) {
  double degree_sum = 0.0;
  for (NodeId node : path.nodes) degree_sum += static_cast<double>(topology.degree(node));
  const double mean_degree = degree_sum / static_cast<double>(path.nodes.size());
  return 1.0 / std::max(1.0, mean_degree / 2.0);
}

bool path_alive(const PathInfo& path, const GroundTruth& truth, std::size_t frame) {
  for (std::size_t i = 0; i + 1 < path.nodes.size(); ++i) {
    if (!truth.alive(path.nodes[i], path.nodes[i + 1], frame)) return false;
  }
  return true;
}

/// Snapshot topology restricted to links alive at one frame; rebuilt only
/// when the (snapshot, frame) pair changes.
class DiscoveryView {
 public:
  DiscoveryView(const GroundTruth& truth, std::span<const TopologySnapshot> schedule)
      : truth_(truth), schedule_(schedule) {}

  const Graph& at(std::size_t snapshot, std::size_t frame) {
    if (snapshot != snapshot_ || frame != frame_) {
      const Graph& full = schedule_[snapshot].topology;
      graph_ = Graph(full.size());
      for (const auto& edge : full.edges()) {
        if (truth_.alive(edge.u, edge.v, frame)) graph_.add_edge(edge);
      }
      snapshot_ = snapshot;
      frame_ = frame;
    }
    return graph_;
  }

 private:
  const GroundTruth& truth_;
  std::span<const TopologySnapshot> schedule_;
  Graph graph_;
  std::size_t snapshot_ = static_cast<std::size_t>(-1);
  std::size_t frame_ = static_cast<std::size_t>(-1);
};

}  // namespace

FlowRun run_flows(const GroundTruth& truth, std::span<const Flow> flows, std::span<const TopologySnapshot> schedule,
                  const FlowParams& params) {
  const Trajectory& trajectory = truth.trajectory();
  FlowRun run;
  if (flows.empty()) return run;
  if (schedule.empty()) throw Error("topology schedule is empty");
  for (const auto& flow : flows) {
    if (flow.src == flow.dst) throw Error("flow " + std::to_string(flow.id) + " has src == dst");
    if (!(flow.start < flow.end)) throw Error("flow " + std::to_string(flow.id) + " must have start < end");
    if (flow.start + kTimeTolerance < schedule.front().t) {
      throw Error("flow " + std::to_string(flow.id) + " starts before the first topology snapshot");
    }
  }

  // Frame at which each snapshot takes effect.
  std::vector<std::size_t> refresh_frame;
  for (const auto& snap : schedule) {
    refresh_frame.push_back(static_cast<std::size_t>(std::ceil(snap.t / trajectory.dt() - 1e-9)));
  }

  DiscoveryView view(truth, schedule);
  std::vector<FlowState> states(flows.size());
  std::size_t snapshot = 0;

  auto close_interval = [&](FlowState& s, double until) {
    if (!s.up || until <= s.serve_from) return;
    const double span = until - s.serve_from;
    s.uptime += span;
    s.delivered += params.rate * s.contention * span;
    s.hop_time += static_cast<double>(s.path.hops) * span;
    s.serve_from = until;
  };

  auto discover = [&](const Flow& flow, FlowState& s, std::size_t frame, double t, double penalty) {
    auto path = find_route(view.at(snapshot, frame), flow.src, flow.dst, flow.metric);
    if (!path) return false;
    s.path = std::move(*path);
    s.contention = contention_factor(s.path, schedule[snapshot].topology);
    s.up = true;
    s.serve_from = t + penalty;
    return true;
  };

  for (std::size_t k = 0; k < trajectory.frames(); ++k) {
    const double t = trajectory.time(k);
    const bool refresh = std::find(refresh_frame.begin(), refresh_frame.end(), k) != refresh_frame.end();
    while (snapshot + 1 < schedule.size() && refresh_frame[snapshot + 1] <= k) ++snapshot;
    if (refresh_frame[snapshot] > k) continue;

    for (std::size_t i = 0; i < flows.size(); ++i) {
      const Flow& flow = flows[i];
      FlowState& s = states[i];
      if (t + kTimeTolerance < flow.start || t > flow.end + kTimeTolerance) continue;
      const double now = std::max(t, flow.start);

      if (!s.started) {
        s.started = true;
        if (discover(flow, s, k, now, 0.0)) {
          s.ever_established = true;
          s.hops_initial = s.path.hops;
          run.events.push_back({flow.id, now, RouteEventKind::established, s.path});
        } else {
          run.events.push_back({flow.id, now, RouteEventKind::unreachable, std::nullopt});
        }
      } else if (s.up) {
        if (path_alive(s.path, truth, k)) continue;
        close_interval(s, now);
        s.up = false;
        ++s.breaks;
        run.events.push_back({flow.id, now, RouteEventKind::broken, s.path});
        if (discover(flow, s, k, now, params.delta)) {
          run.events.push_back({flow.id, now, RouteEventKind::rerouted, s.path});
        } else {
          run.events.push_back({flow.id, now, RouteEventKind::unreachable, std::nullopt});
        }
      } else if (refresh) {
        const bool reroute = s.ever_established;
        if (discover(flow, s, k, now, reroute ? params.delta : 0.0)) {
          if (!s.ever_established) s.hops_initial = s.path.hops;
          s.ever_established = true;
          run.events.push_back({flow.id, now, reroute ? RouteEventKind::rerouted : RouteEventKind::established, s.path});
        }
      }
    }
  }

  for (std::size_t i = 0; i < flows.size(); ++i) {
    const Flow& flow = flows[i];
    FlowState& s = states[i];
    close_interval(s, std::min(flow.end, trajectory.end_time()));
    const double duration = flow.end - flow.start;
    FlowSummary summary;
    summary.flow = flow.id;
    summary.metric = flow.metric;
    summary.reroutes = s.breaks;
    summary.uptime = s.uptime;
    summary.downtime = duration - s.uptime;
    summary.delivered_mb = s.delivered;
    summary.throughput = s.delivered / duration;
    summary.hops_initial = s.hops_initial;
    if (s.uptime > 0.0 && s.delivered > 0.0) {
      summary.delay_ms = params.hop_delay_ms * (s.hop_time / s.uptime) +
                         1000.0 * params.delta * static_cast<double>(s.breaks) / s.delivered;
    } else {
      summary.delay_ms = std::numeric_limits<double>::infinity();
    }
    run.summaries.push_back(summary);
  }
  return run;
}

}  // namespace pctc
