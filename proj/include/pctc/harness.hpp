#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pctc/config.hpp"
#include "pctc/mobility.hpp"
#include "pctc/prediction.hpp"
#include "pctc/routing.hpp"
#include "pctc/stats.hpp"
#include "pctc/topology.hpp"

namespace pctc {

inline constexpr std::string_view kVersion = "1.0.0";

enum class PresetName { fig2_prediction, fig3_topology, fig4_endtoend, properties_suite };

std::string_view to_string(PresetName name);
/// Throws ConfigError for unknown names.
PresetName parse_preset(std::string_view name);

/// One-parameter sweep; `key` is any config key.
struct Sweep {
  std::string key;
  std::vector<double> values;
};

struct ExperimentPreset {
  PresetName name = PresetName::fig2_prediction;
  /// Config keys applied over the base config before the sweep.
  std::vector<std::pair<std::string, std::string>> overrides;
  std::size_t trials = 1;
  std::optional<Sweep> sweep;

  /// Built-in parameters for each experiment.
  static ExperimentPreset defaults(PresetName name);
};

/// Network state at one topology refresh.
struct Snapshot {
  double t = 0.0;
  std::size_t frame = 0;
  /// Alive links weighted by their predicted availability.
  Graph original;
  Graph pctc;
  /// Aligned with original.edges().
  std::vector<LinkPrediction> predictions;
};

/// One simulated trial: ground truth plus a snapshot every topology period.
struct TrialWorld {
  ScenarioConfig config;
  std::uint64_t seed = 0;
  std::unique_ptr<Trajectory> trajectory;
  std::unique_ptr<GroundTruth> truth;
  std::vector<Snapshot> snapshots;
  std::vector<LinkLifetimeRecord> lifetimes;

  /// Record of the lifetime of (u, v) that contains time t, if any.
  [[nodiscard]] const LinkLifetimeRecord* lifetime_at(NodeId u, NodeId v, double t) const;
};

/// Snapshot times: first at 2 * sample_spacing, then every topology_period.
std::vector<double> refresh_times(const ScenarioConfig& config);

/// Predicts every alive link at time t2 and builds both topologies.
Snapshot build_snapshot(const ScenarioConfig& config, const Trajectory& trajectory, const GroundTruth& truth,
                        double t2, MeasurementNoise noise = {});

TrialWorld run_trial(const ScenarioConfig& config, std::uint64_t trial_index);

struct PredictionSample {
  std::size_t trial = 0;
  double t = 0.0;
  NodeId u = 0;
  NodeId v = 0;
  double t_p = 0.0;
  double l_tp = 0.0;
  double t_a = 0.0;
  /// Real remaining lifetime after t; absent when censored by the end of
  /// the simulation.
  std::optional<double> t_r;
  double horizon = 0.0;
  bool velocity_changed = false;
};

/// First prediction of every recorded link lifetime whose three samples lie
/// inside the lifetime.
std::vector<PredictionSample> prediction_samples(const TrialWorld& world, std::size_t trial);

struct TopologyTrialRow {
  std::size_t trial = 0;
  double sweep_value = 0.0;
  double avg_degree_before = 0.0;
  double avg_degree_after = 0.0;
  double max_degree_before = 0.0;
  double max_degree_after = 0.0;
  double mean_ta_before = 0.0;
  double mean_ta_after = 0.0;
  double mean_tr_before = 0.0;
  double mean_tr_after = 0.0;
  double control_intensity = 0.0;
};

TopologyTrialRow topology_row(const TrialWorld& world, std::size_t trial, double sweep_value);

/// Which topology a flow is routed on.
enum class TopologyKind { original, pctc };
std::string_view to_string(TopologyKind kind);

struct EndToEndRow {
  std::size_t trial = 0;
  double sweep_value = 0.0;
  RouteMetric metric = RouteMetric::SP;
  TopologyKind topology = TopologyKind::original;
  std::size_t reroutes = 0;
  double downtime = 0.0;
  double throughput = 0.0;
  double delay_ms = 0.0;
  std::vector<FlowSummary> flows;
};

/// Random persistent flows for a trial, from the flows stream of `seed`.
std::vector<Flow> make_flows(const ScenarioConfig& config, std::uint64_t seed, double start, RouteMetric metric);

/// SP and RPTa on both topologies over the same ground truth and flows.
std::vector<EndToEndRow> endtoend_rows(const TrialWorld& world, std::size_t trial, double sweep_value);

struct PropertyRow {
  std::size_t graph = 0;
  std::size_t n = 0;
  std::size_t edges = 0;
  std::size_t kept = 0;
  bool connectivity = false;
  bool symmetry = false;
  bool spanner = false;
  double min_spanner = 1.0;
  /// Links kept by exactly one end before merging.
  std::size_t asymmetric_decisions = 0;
};

/// Random geometric graph on the config area with range tx_range and
/// distinct Uniform(0, 1] weights.
Graph random_geometric_graph(const ScenarioConfig& config, std::size_t n, RngStream& stream);

PropertyRow check_properties(const Graph& graph, std::size_t index);

/// Connectivity, symmetry and 1-spanner checks over `graphs` random geometric
/// graphs with 5..max_nodes nodes.
std::vector<PropertyRow> properties_suite(const ScenarioConfig& config, std::size_t graphs, std::size_t max_nodes);

struct AggregateRow {
  std::string group;
  std::string metric;
  Aggregate value;
};

struct CsvTable {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct MetricsReport {
  PresetName preset = PresetName::fig2_prediction;
  ScenarioConfig config;
  std::size_t trials = 0;
  std::optional<Sweep> sweep;

  std::vector<PredictionSample> predictions;
  std::vector<TopologyTrialRow> topology;
  std::vector<EndToEndRow> endtoend;
  std::vector<PropertyRow> properties;
  std::vector<AggregateRow> aggregates;
  /// Last PCTC topology of the first trial (topology preset only).
  Graph sample_topology;
  TopologyStats sample_stats;

  [[nodiscard]] const AggregateRow* find_aggregate(std::string_view group, std::string_view metric) const;
  /// Every CSV this report writes, in a fixed order.
  [[nodiscard]] std::vector<CsvTable> tables() const;
};

/// Applies overrides to `base`, validates, runs every trial (and sweep
/// point) and aggregates. Throws ConfigError when validation fails.
MetricsReport run_preset(const ExperimentPreset& preset, const ScenarioConfig& base);

/// Writes every table plus manifest.txt into `dir` (created if needed).
void write_report(const MetricsReport& report, const std::filesystem::path& dir);

/// Fixed-format number used in every CSV.
std::string format_number(double value);

}  // namespace pctc
