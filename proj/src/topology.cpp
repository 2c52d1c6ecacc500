#include "pctc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <ostream>
#include <string>

namespace pctc {

double edge_weight(double t_a, double r, double delta, double cap) {
  const double available = std::isinf(t_a) ? cap : t_a;
  return r * std::max(available - delta, 0.0);
}

void Graph::add_edge(WeightedEdge edge) {
  if (edge.u == edge.v) throw Error("self loop at node " + std::to_string(edge.u));
  if (edge.u >= size() || edge.v >= size()) throw Error("edge endpoint out of range");
  if (!(edge.w >= 0.0)) throw Error("edge weight must be >= 0");
  if (has_edge(edge.u, edge.v)) {
    throw Error("duplicate edge " + std::to_string(edge.u) + "-" + std::to_string(edge.v));
  }
  if (edge.u > edge.v) std::swap(edge.u, edge.v);
  const std::size_t index = edges_.size();
  edges_.push_back(edge);
  for (const auto& [a, b] : {std::pair{edge.u, edge.v}, std::pair{edge.v, edge.u}}) {
    auto& list = adjacency_[a];
    const auto at = std::lower_bound(list.begin(), list.end(), b,
                                     [](const auto& entry, NodeId id) { return entry.first < id; });
    list.insert(at, {b, index});
  }
}

const WeightedEdge* Graph::find_edge(NodeId u, NodeId v) const {
  if (u >= size() || v >= size()) return nullptr;
  const auto& list = adjacency_[u];
  const auto at =
      std::lower_bound(list.begin(), list.end(), v, [](const auto& entry, NodeId id) { return entry.first < id; });
  return at != list.end() && at->first == v ? &edges_[at->second] : nullptr;
}

std::vector<NodeId> Graph::neighbors(NodeId u) const {
  std::vector<NodeId> out;
  out.reserve(adjacency_[u].size());
  for (const auto& entry : adjacency_[u]) out.push_back(entry.first);
  return out;
}

bool PathLabel::better_than(const PathLabel& other) const {
  if (reached != other.reached) return reached;
  if (weight != other.weight) return weight > other.weight;
  if (hops != other.hops) return hops < other.hops;
  return sorted_ids < other.sorted_ids;
}

std::optional<PathInfo> WidestTree::path_to(NodeId v) const {
  if (!reached(v)) return std::nullopt;
  PathInfo path;
  for (NodeId at = v; at != kNone; at = parent[at]) path.nodes.push_back(at);
  std::reverse(path.nodes.begin(), path.nodes.end());
  path.weight = labels[v].weight;
  path.hops = labels[v].hops;
  return path;
}

namespace {

PathLabel extend(const PathLabel& from, double w, NodeId id) {
  PathLabel out;
  out.reached = true;
  out.weight = std::min(from.weight, w);
  out.hops = from.hops + 1;
  out.sorted_ids.reserve(from.sorted_ids.size() + 1);
  const auto at = std::lower_bound(from.sorted_ids.begin(), from.sorted_ids.end(), id);
  out.sorted_ids.insert(out.sorted_ids.end(), from.sorted_ids.begin(), at);
  out.sorted_ids.push_back(id);
  out.sorted_ids.insert(out.sorted_ids.end(), at, from.sorted_ids.end());
  return out;
}

}  // namespace

WidestTree widest_path_tree(const Graph& graph, NodeId source, std::span<const NodeId> ids) {
  const std::size_t m = graph.size();
  if (source >= m) throw Error("source node out of range");
  auto id_of = [&](NodeId i) { return ids.empty() ? i : ids[i]; };

  WidestTree tree;
  tree.source = source;
  tree.labels.resize(m);
  tree.parent.assign(m, WidestTree::kNone);
  std::vector<bool> visited(m, false);

  // The source is "infinitely wide"; everyone else starts unreached.
  tree.labels[source] = {true, std::numeric_limits<double>::infinity(), 0, {id_of(source)}};
  NodeId current = source;
  while (true) {
    visited[current] = true;
    tree.visit_order.push_back(current);
    graph.for_each_neighbor(current, [&](NodeId v, const WeightedEdge& edge) {
      if (visited[v]) return;
      PathLabel candidate = extend(tree.labels[current], edge.w, id_of(v));
      if (candidate.better_than(tree.labels[v])) {
        tree.labels[v] = std::move(candidate);
        tree.parent[v] = current;
      }
    });
    NodeId next = WidestTree::kNone;
    for (NodeId k = 0; k < m; ++k) {
      if (visited[k] || !tree.labels[k].reached) continue;
      if (next == WidestTree::kNone || tree.labels[k].better_than(tree.labels[next])) next = k;
    }
    if (next == WidestTree::kNone) break;
    current = next;
  }
  return tree;
}

LocalGraph make_local_graph(const Graph& original, NodeId center) {
  LocalGraph local;
  local.center = center;
  local.members = original.neighbors(center);
  local.members.insert(std::lower_bound(local.members.begin(), local.members.end(), center), center);
  std::vector<bool> member(original.size(), false);
  for (NodeId id : local.members) member[id] = true;
  for (NodeId a : local.members) {
    original.for_each_neighbor(a, [&](NodeId b, const WeightedEdge& edge) {
      if (a < b && member[b]) local.edges.push_back(edge);
    });
  }
  return local;
}

LocalResult widest_paths_local(const LocalGraph& local) {
  const auto& members = local.members;
  auto index_of = [&](NodeId id) {
    const auto at = std::lower_bound(members.begin(), members.end(), id);
    if (at == members.end() || *at != id) throw Error("local graph edge touches non-member " + std::to_string(id));
    return static_cast<NodeId>(at - members.begin());
  };

  Graph graph(members.size());
  for (const auto& edge : local.edges) {
    WeightedEdge e = edge;
    e.u = index_of(edge.u);
    e.v = index_of(edge.v);
    graph.add_edge(e);
  }
  const NodeId center = index_of(local.center);
  const WidestTree tree = widest_path_tree(graph, center, members);

  LocalResult result;
  result.center = local.center;
  for (NodeId k = 0; k < members.size(); ++k) {
    if (k == center) continue;
    auto path = tree.path_to(k);
    if (!path) continue;
    for (auto& node : path->nodes) node = members[node];
    result.paths.push_back(std::move(*path));
    if (tree.parent[k] == center) result.preserved.push_back(members[k]);
  }
  return result;
}

std::vector<std::vector<NodeId>> preserved_neighbors(const Graph& original) {
  std::vector<std::vector<NodeId>> out(original.size());
  for (NodeId u = 0; u < original.size(); ++u) out[u] = widest_paths_local(make_local_graph(original, u)).preserved;
  return out;
}

namespace {

bool contains(const std::vector<NodeId>& sorted, NodeId id) {
  return std::binary_search(sorted.begin(), sorted.end(), id);
}

}  // namespace

std::size_t count_asymmetric(const Graph& original, const std::vector<std::vector<NodeId>>& preserved) {
  std::size_t count = 0;
  for (const auto& edge : original.edges()) {
    if (contains(preserved[edge.u], edge.v) != contains(preserved[edge.v], edge.u)) ++count;
  }
  return count;
}

TopologyInvariantError::TopologyInvariantError(NodeId u_, NodeId v_)
    : Error("asymmetric preservation of link " + std::to_string(u_) + "-" + std::to_string(v_)), u(u_), v(v_) {}

Graph build_topology(const Graph& original, SymmetryRule rule) {
  const auto preserved = preserved_neighbors(original);
  Graph result(original.size());
  for (const auto& edge : original.edges()) {
    const bool by_u = contains(preserved[edge.u], edge.v);
    const bool by_v = contains(preserved[edge.v], edge.u);
    bool keep = false;
    switch (rule) {
      case SymmetryRule::mutual:
        keep = by_u && by_v;
        break;
      case SymmetryRule::either:
        keep = by_u || by_v;
        break;
      case SymmetryRule::strict:
        if (by_u != by_v) throw TopologyInvariantError(edge.u, edge.v);
        keep = by_u;
        break;
    }
    if (keep) result.add_edge(edge);
  }
  return result;
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) { parent_[find(a)] = find(b); }

 private:
  std::vector<std::size_t> parent_;
};

DisjointSets components(const Graph& graph) {
  DisjointSets sets(graph.size());
  for (const auto& edge : graph.edges()) sets.unite(edge.u, edge.v);
  return sets;
}

}  // namespace

bool check_connectivity(const Graph& original, const Graph& result) {
  if (original.size() != result.size()) return false;
  DisjointSets before = components(original);
  DisjointSets after = components(result);
  for (NodeId u = 0; u < original.size(); ++u) {
    for (NodeId v = u + 1; v < original.size(); ++v) {
      if ((before.find(u) == before.find(v)) != (after.find(u) == after.find(v))) return false;
    }
  }
  return true;
}

bool check_symmetric_subgraph(const Graph& original, const Graph& result) {
  if (original.size() != result.size()) return false;
  for (NodeId u = 0; u < result.size(); ++u) {
    for (NodeId v : result.neighbors(u)) {
      if (!result.has_edge(v, u) || !original.has_edge(u, v)) return false;
    }
  }
  return true;
}

double spanner_factor(const Graph& original, const Graph& result, NodeId u, NodeId v) {
  if (u == v) return 1.0;
  const WidestTree before = widest_path_tree(original, u);
  if (!before.reached(v)) {
    throw Error("nodes " + std::to_string(u) + " and " + std::to_string(v) + " are disconnected in the original graph");
  }
  const WidestTree after = widest_path_tree(result, u);
  if (!after.reached(v)) return 0.0;
  const double w_before = before.labels[v].weight;
  const double w_after = after.labels[v].weight;
  if (w_before == 0.0) return 1.0;
  return w_after / w_before;
}

double control_intensity_formula(std::size_t n) {
  if (n == 0) throw Error("control intensity needs n >= 1");
  if (n <= 20) {
    // Exact rational H(n) = p / q, then one rounding.
    std::uint64_t q = 1;
    for (std::uint64_t i = 2; i <= n; ++i) q = std::lcm(q, i);
    std::uint64_t p = 0;
    for (std::uint64_t i = 1; i <= n; ++i) p += q / i;
    return static_cast<double>(p) / static_cast<double>(q * n);
  }
  long double harmonic = 0.0L;
  for (std::size_t i = n; i >= 1; --i) harmonic += 1.0L / static_cast<long double>(i);
  return static_cast<double>(harmonic / static_cast<long double>(n));
}

TopologyStats stats(const Graph& original, const Graph& result) {
  TopologyStats s;
  const std::size_t n = original.size();
  double ratio_sum = 0.0;
  std::size_t ratio_count = 0;
  for (NodeId u = 0; u < n; ++u) {
    const std::size_t before = original.degree(u);
    const std::size_t after = u < result.size() ? result.degree(u) : 0;
    s.original_degree.push_back(before);
    s.phi.push_back(after);
    s.max_degree_before = std::max(s.max_degree_before, before);
    s.max_degree_after = std::max(s.max_degree_after, after);
    s.avg_degree_before += static_cast<double>(before);
    s.avg_degree_after += static_cast<double>(after);
    if (before > 0) {
      ratio_sum += static_cast<double>(after) / static_cast<double>(before);
      ++ratio_count;
    }
  }
  if (n > 0) {
    s.avg_degree_before /= static_cast<double>(n);
    s.avg_degree_after /= static_cast<double>(n);
  }
  if (ratio_count > 0) s.control_intensity = ratio_sum / static_cast<double>(ratio_count);
  return s;
}

void write_topology_csv(std::ostream& out, const Graph& topology) {
  out << "u,v,w,t_a\n";
  for (const auto& e : topology.edges()) out << e.u << ',' << e.v << ',' << e.w << ',' << e.t_a << '\n';
}

void write_stats_csv(std::ostream& out, const TopologyStats& s) {
  out << "id,n,phi\n";
  for (std::size_t i = 0; i < s.phi.size(); ++i) out << i << ',' << s.original_degree[i] << ',' << s.phi[i] << '\n';
}

}  // namespace pctc
