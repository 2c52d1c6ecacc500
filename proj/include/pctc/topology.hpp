#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "pctc/core.hpp"

namespace pctc {

/// Undirected link with its traffic-carrying weight w = r (t_a - delta), in Mb.
struct WeightedEdge {
  NodeId u = 0;
  NodeId v = 0;
  double w = 0.0;
  double r = 0.0;
  double t_a = 0.0;
};

/// r * max(t_a - delta, 0). An infinite t_a is capped at `cap` seconds.
double edge_weight(double t_a, double r, double delta, double cap);

/// Undirected simple graph over dense node ids [0, size()). Used both for
/// the original link graph and for topologies derived from it.
class Graph {
 public:
  explicit Graph(std::size_t n = 0) : adjacency_(n) {}

  [[nodiscard]] std::size_t size() const { return adjacency_.size(); }
  [[nodiscard]] std::size_t edge_count() const { return edges_.size(); }
  [[nodiscard]] const std::vector<WeightedEdge>& edges() const { return edges_; }

  /// Adds an undirected edge. Throws Error on self loops, duplicates, ids
  /// out of range or negative weights. Stored with u < v.
  void add_edge(WeightedEdge edge);

  [[nodiscard]] const WeightedEdge* find_edge(NodeId u, NodeId v) const;
  [[nodiscard]] bool has_edge(NodeId u, NodeId v) const { return find_edge(u, v) != nullptr; }
  [[nodiscard]] std::size_t degree(NodeId u) const { return adjacency_[u].size(); }

  /// Neighbors of `u` in ascending id order.
  [[nodiscard]] std::vector<NodeId> neighbors(NodeId u) const;

  template <typename Fn>
  void for_each_neighbor(NodeId u, Fn&& fn) const {
    for (const auto& [v, index] : adjacency_[u]) fn(v, edges_[index]);
  }

 private:
  std::vector<std::vector<std::pair<NodeId, std::size_t>>> adjacency_;
  std::vector<WeightedEdge> edges_;
};

/// A path with its bottleneck weight W = min edge weight.
struct PathInfo {
  std::vector<NodeId> nodes;
  double weight = 0.0;
  std::size_t hops = 0;
};

/// Path ranking: larger W, then fewer hops, then the lexicographically
/// smaller sorted list of node ids. Every key is reversal invariant.
struct PathLabel {
  bool reached = false;
  double weight = 0.0;
  std::size_t hops = 0;
  std::vector<NodeId> sorted_ids;

  [[nodiscard]] bool better_than(const PathLabel& other) const;
};

/// Widest-path search result from one source.
struct WidestTree {
  static constexpr NodeId kNone = std::numeric_limits<NodeId>::max();

  NodeId source = 0;
  std::vector<PathLabel> labels;
  std::vector<NodeId> parent;
  /// Order in which nodes were marked visited.
  std::vector<NodeId> visit_order;

  [[nodiscard]] bool reached(NodeId v) const { return labels[v].reached; }
  /// Path from source to `v`; nullopt when unreachable.
  [[nodiscard]] std::optional<PathInfo> path_to(NodeId v) const;
};

/// Bottleneck Dijkstra from `source`: the source starts at +infinity, the
/// node with the best label among unvisited ones becomes the next current
/// node, and a neighbor's label is replaced only by a strictly better one.
/// `ids` maps local indices to the ids used for tie-breaking (identity when
/// empty).
WidestTree widest_path_tree(const Graph& graph, NodeId source, std::span<const NodeId> ids = {});

/// Center plus its one-hop neighbors with every original edge among them.
struct LocalGraph {
  NodeId center = 0;
  /// Ascending ids; includes the center.
  std::vector<NodeId> members;
  std::vector<WeightedEdge> edges;
};

LocalGraph make_local_graph(const Graph& original, NodeId center);

struct LocalResult {
  NodeId center = 0;
  /// Most reliable path from the center to every other member.
  std::vector<PathInfo> paths;
  /// First hops of those paths, ascending.
  std::vector<NodeId> preserved;
};

/// Runs the localized widest-path procedure at the center of `local` and
/// keeps the center's neighbors that start some most-reliable path.
LocalResult widest_paths_local(const LocalGraph& local);

/// Every node's preserved neighbor set (index = node id).
std::vector<std::vector<NodeId>> preserved_neighbors(const Graph& original);

/// Number of links kept by exactly one of their ends.
std::size_t count_asymmetric(const Graph& original, const std::vector<std::vector<NodeId>>& preserved);

/// How the per-node decisions are merged into an undirected topology.
enum class SymmetryRule {
  /// Keep a link only when both ends preserve it.
  mutual,
  /// Keep a link when either end preserves it.
  either,
  /// Require both ends to agree; throw TopologyInvariantError otherwise.
  strict,
};

class TopologyInvariantError : public Error {
 public:
  TopologyInvariantError(NodeId u, NodeId v);
  NodeId u;
  NodeId v;
};

/// Runs the local procedure at every node and merges the results.
Graph build_topology(const Graph& original, SymmetryRule rule = SymmetryRule::mutual);

/// True iff `result` spans the same nodes and has the same connected
/// components as `original`.
bool check_connectivity(const Graph& original, const Graph& result);

/// True iff the neighbor relation of `result` is symmetric and every edge
/// of `result` exists in `original`.
bool check_symmetric_subgraph(const Graph& original, const Graph& result);

/// Reliable-path weight in `result` over reliable-path weight in
/// `original` for the pair (u, v). Throws Error when the pair is
/// disconnected in `original`.
double spanner_factor(const Graph& original, const Graph& result, NodeId u, NodeId v);

/// H(n) / n. Throws Error for n == 0.
double control_intensity_formula(std::size_t n);

struct TopologyStats {
  std::vector<std::size_t> original_degree;
  std::vector<std::size_t> phi;
  double avg_degree_before = 0.0;
  double avg_degree_after = 0.0;
  std::size_t max_degree_before = 0;
  std::size_t max_degree_after = 0;
  /// Mean of phi / n over nodes with n > 0 (1.0 when there are none).
  double control_intensity = 1.0;
};

TopologyStats stats(const Graph& original, const Graph& result);

/// CSV (u, v, w, t_a).
void write_topology_csv(std::ostream& out, const Graph& topology);
/// CSV (id, n, phi).
void write_stats_csv(std::ostream& out, const TopologyStats& stats);

}  // namespace pctc
