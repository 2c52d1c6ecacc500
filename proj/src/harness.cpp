#include "pctc/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <tuple>
#include <sstream>
#include <thread>

namespace pctc {

std::string_view to_string(PresetName name) {
  switch (name) {
    case PresetName::fig2_prediction:
      return "fig2_prediction";
    case PresetName::fig3_topology:
      return "fig3_topology";
    case PresetName::fig4_endtoend:
      return "fig4_endtoend";
    case PresetName::properties_suite:
      return "properties_suite";
  }
  return "unknown";
}

PresetName parse_preset(std::string_view name) {
  for (auto p : {PresetName::fig2_prediction, PresetName::fig3_topology, PresetName::fig4_endtoend,
                 PresetName::properties_suite}) {
    if (to_string(p) == name) return p;
  }
  throw ConfigError("unknown preset '" + std::string(name) + "'");
}

std::string_view to_string(TopologyKind kind) { return kind == TopologyKind::original ? "original" : "pctc"; }

ExperimentPreset ExperimentPreset::defaults(PresetName name) {
  ExperimentPreset preset;
  preset.name = name;
  switch (name) {
    case PresetName::fig2_prediction:
      preset.overrides = {{"n_nodes", "30"}, {"sim_duration", "900"}};
      preset.trials = 4;
      break;
    case PresetName::fig3_topology:
      preset.overrides = {{"sim_duration", "300"}};
      preset.trials = 30;
      preset.sweep = Sweep{"n_nodes", {20, 40, 60}};
      break;
    case PresetName::fig4_endtoend:
      preset.overrides = {{"n_nodes", "30"}, {"sim_duration", "300"}};
      preset.trials = 100;
      preset.sweep = Sweep{"v_max", {5, 10, 15, 20}};
      break;
    case PresetName::properties_suite:
      preset.overrides = {{"n_nodes", "30"}};
      preset.trials = 200;
      break;
  }
  return preset;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", value);
  return buf;
}

namespace {

constexpr double kTimeTolerance = 1e-9;

std::size_t frame_for(const Trajectory& trajectory, double t) {
  const auto frame = static_cast<std::size_t>(std::ceil(t / trajectory.dt() - kTimeTolerance));
  return std::min(frame, trajectory.frames() - 1);
}

/// Runs fn(i) for i in [0, n) on a small worker pool. Each call writes only
/// its own output slot, so results do not depend on scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min<std::size_t>(n, std::max(1U, std::thread::hardware_concurrency()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n && !failed; i = next++) {
        try {
          fn(i);
        } catch (...) {
          if (!failed.exchange(true)) failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

double capped(double t_a, double cap) { return std::min(t_a, cap); }

double mean_of(const std::vector<double>& values) {
  if (values.empty()) return std::nan("");
  double sum = 0.0;
  for (double v : values) sum += v;
  return sum / static_cast<double>(values.size());
}

}  // namespace

std::vector<double> refresh_times(const ScenarioConfig& config) {
  std::vector<double> out;
  const double first = 2.0 * config.sample_spacing;
  for (std::size_t k = 0;; ++k) {
    const double t = first + static_cast<double>(k) * config.topology_period;
    if (t > config.sim_duration + kTimeTolerance) break;
    out.push_back(t);
  }
  return out;
}

const LinkLifetimeRecord* TrialWorld::lifetime_at(NodeId u, NodeId v, double t) const {
  if (u > v) std::swap(u, v);
  const auto range = std::equal_range(lifetimes.begin(), lifetimes.end(), std::pair{u, v},
                                      [](const auto& a, const auto& b) {
                                        if constexpr (std::is_same_v<std::decay_t<decltype(a)>, LinkLifetimeRecord>) {
                                          return std::pair{a.u, a.v} < b;
                                        } else {
                                          return a < std::pair{b.u, b.v};
                                        }
                                      });
  for (auto it = range.first; it != range.second; ++it) {
    const bool open_end = it->cause == DeathCause::sim_end;
    if (it->birth <= t + kTimeTolerance && (t < it->death - kTimeTolerance || (open_end && t <= it->death + kTimeTolerance))) {
      return &*it;
    }
  }
  return nullptr;
}

Snapshot build_snapshot(const ScenarioConfig& config, const Trajectory& trajectory, const GroundTruth& truth,
                        double t2, MeasurementNoise noise) {
  const PredictionParams params = PredictionParams::from(config);
  Snapshot snap;
  snap.t = t2;
  snap.frame = frame_for(trajectory, t2);
  const auto n = static_cast<NodeId>(trajectory.n_nodes());
  snap.original = Graph(n);
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (!truth.alive(u, v, snap.frame)) continue;
      LinkPrediction prediction =
          predict_link(trajectory, u, v, t2, config.sample_spacing, config.primary_users, params, noise);
      const double w = edge_weight(prediction.t_a, config.rate, config.delta, config.sim_duration);
      snap.original.add_edge({u, v, w, config.rate, prediction.t_a});
      snap.predictions.push_back(std::move(prediction));
    }
  }
  snap.pctc = build_topology(snap.original);
  return snap;
}

TrialWorld run_trial(const ScenarioConfig& config, std::uint64_t trial_index) {
  TrialWorld world;
  world.config = config;
  world.seed = trial_seed(config.rng_seed, trial_index);
  world.trajectory = std::make_unique<Trajectory>(simulate(config, world.seed));
  world.truth = std::make_unique<GroundTruth>(*world.trajectory, config.tx_range, config.primary_users);
  world.lifetimes = record_lifetimes(*world.truth);
  RngStream noise_stream = derive_stream(world.seed, StreamKind::noise);
  const MeasurementNoise noise{config.noise_std, &noise_stream};
  for (double t : refresh_times(config)) {
    world.snapshots.push_back(build_snapshot(config, *world.trajectory, *world.truth, t, noise));
  }
  return world;
}

std::vector<PredictionSample> prediction_samples(const TrialWorld& world, std::size_t trial) {
  std::vector<PredictionSample> out;
  const double lead = 2.0 * world.config.sample_spacing;
  const Trajectory& trajectory = *world.trajectory;
  for (const auto& record : world.lifetimes) {
    const auto snap = std::lower_bound(world.snapshots.begin(), world.snapshots.end(), record.birth + lead - kTimeTolerance,
                                       [](const Snapshot& s, double t) { return s.t < t; });
    if (snap == world.snapshots.end()) continue;
    const bool open_end = record.cause == DeathCause::sim_end;
    if (!(snap->t < record.death || (open_end && snap->t <= record.death))) continue;
    const WeightedEdge* edge = snap->original.find_edge(record.u, record.v);
    if (edge == nullptr) continue;
    const LinkPrediction& prediction = snap->predictions[static_cast<std::size_t>(edge - snap->original.edges().data())];

    PredictionSample sample;
    sample.trial = trial;
    sample.t = snap->t;
    sample.u = record.u;
    sample.v = record.v;
    sample.t_p = prediction.t_p;
    sample.l_tp = prediction.l_tp;
    sample.t_a = prediction.t_a;
    if (!open_end) sample.t_r = record.death - snap->t;
    sample.horizon = prediction.horizon();
    const double until = std::min(snap->t + sample.horizon, trajectory.end_time());
    sample.velocity_changed =
        trajectory.velocity_changed(record.u, snap->t, until) || trajectory.velocity_changed(record.v, snap->t, until);
    out.push_back(sample);
  }
  std::sort(out.begin(), out.end(), [](const PredictionSample& a, const PredictionSample& b) {
    return std::tie(a.t, a.u, a.v) < std::tie(b.t, b.u, b.v);
  });
  return out;
}

TopologyTrialRow topology_row(const TrialWorld& world, std::size_t trial, double sweep_value) {
  TopologyTrialRow row;
  row.trial = trial;
  row.sweep_value = sweep_value;
  const double cap = world.config.sim_duration;
  const double end = world.trajectory->end_time();
  std::vector<double> avg_before, avg_after, max_before, max_after, intensity;
  std::vector<double> ta_before, ta_after, tr_before, tr_after;
  for (const auto& snap : world.snapshots) {
    const TopologyStats s = stats(snap.original, snap.pctc);
    avg_before.push_back(s.avg_degree_before);
    avg_after.push_back(s.avg_degree_after);
    max_before.push_back(static_cast<double>(s.max_degree_before));
    max_after.push_back(static_cast<double>(s.max_degree_after));
    intensity.push_back(s.control_intensity);
    for (const auto& edge : snap.original.edges()) {
      const double ta = capped(edge.t_a, cap);
      const LinkLifetimeRecord* life = world.lifetime_at(edge.u, edge.v, snap.t);
      const double tr = life != nullptr ? std::min(life->death, end) - snap.t : 0.0;
      const bool kept = snap.pctc.has_edge(edge.u, edge.v);
      ta_before.push_back(ta);
      tr_before.push_back(tr);
      if (kept) {
        ta_after.push_back(ta);
        tr_after.push_back(tr);
      }
    }
  }
  row.avg_degree_before = mean_of(avg_before);
  row.avg_degree_after = mean_of(avg_after);
  row.max_degree_before = mean_of(max_before);
  row.max_degree_after = mean_of(max_after);
  row.mean_ta_before = mean_of(ta_before);
  row.mean_ta_after = mean_of(ta_after);
  row.mean_tr_before = mean_of(tr_before);
  row.mean_tr_after = mean_of(tr_after);
  row.control_intensity = mean_of(intensity);
  return row;
}

std::vector<Flow> make_flows(const ScenarioConfig& config, std::uint64_t seed, double start, RouteMetric metric) {
  std::vector<Flow> flows;
  if (config.n_nodes < 2) return flows;
  RngStream stream = derive_stream(seed, StreamKind::flows);
  for (std::uint32_t i = 0; i < config.n_flows; ++i) {
    const auto src = static_cast<NodeId>(stream.index(config.n_nodes));
    auto dst = static_cast<NodeId>(stream.index(config.n_nodes - 1));
    if (dst >= src) ++dst;
    flows.push_back({i, src, dst, start, config.sim_duration, metric});
  }
  return flows;
}

std::vector<EndToEndRow> endtoend_rows(const TrialWorld& world, std::size_t trial, double sweep_value) {
  std::vector<EndToEndRow> out;
  if (world.snapshots.empty()) return out;
  std::vector<TopologySnapshot> original;
  std::vector<TopologySnapshot> pctc;
  for (const auto& snap : world.snapshots) {
    original.push_back({snap.t, snap.original});
    pctc.push_back({snap.t, snap.pctc});
  }
  const FlowParams params{world.config.delta, world.config.rate, world.config.hop_delay_ms};
  for (auto metric : {RouteMetric::SP, RouteMetric::RPTa}) {
    const std::vector<Flow> flows = make_flows(world.config, world.seed, world.snapshots.front().t, metric);
    for (auto kind : {TopologyKind::original, TopologyKind::pctc}) {
      const FlowRun run = run_flows(*world.truth, flows, kind == TopologyKind::original ? original : pctc, params);
      EndToEndRow row;
      row.trial = trial;
      row.sweep_value = sweep_value;
      row.metric = metric;
      row.topology = kind;
      std::vector<double> throughput, delay;
      for (const auto& f : run.summaries) {
        row.reroutes += f.reroutes;
        row.downtime += f.downtime;
        throughput.push_back(f.throughput);
        if (std::isfinite(f.delay_ms)) delay.push_back(f.delay_ms);
      }
      row.throughput = mean_of(throughput);
      row.delay_ms = delay.empty() ? std::numeric_limits<double>::infinity() : mean_of(delay);
      row.flows = run.summaries;
      out.push_back(std::move(row));
    }
  }
  return out;
}

Graph random_geometric_graph(const ScenarioConfig& config, std::size_t n, RngStream& stream) {
  std::vector<Vec2D> pos;
  for (std::size_t i = 0; i < n; ++i) {
    pos.push_back({stream.uniform(0.0, config.area_width), stream.uniform(0.0, config.area_height)});
  }
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      if (distance(pos[u], pos[v]) <= config.tx_range) pairs.emplace_back(u, v);
    }
  }
  std::vector<double> weights(pairs.size());
  for (bool distinct = false; !distinct;) {
    for (auto& w : weights) w = 1.0 - stream.uniform();
    std::vector<double> sorted = weights;
    std::sort(sorted.begin(), sorted.end());
    distinct = std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
  }
  Graph graph(n);
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    graph.add_edge({pairs[i].first, pairs[i].second, weights[i], 1.0, weights[i]});
  }
  return graph;
}

PropertyRow check_properties(const Graph& graph, std::size_t index) {
  PropertyRow row;
  row.graph = index;
  row.n = graph.size();
  row.edges = graph.edge_count();
  row.asymmetric_decisions = count_asymmetric(graph, preserved_neighbors(graph));
  const Graph result = build_topology(graph);
  row.kept = result.edge_count();
  row.connectivity = check_connectivity(graph, result);
  row.symmetry = check_symmetric_subgraph(graph, result);
  row.spanner = true;
  for (NodeId u = 0; u < graph.size(); ++u) {
    const WidestTree before = widest_path_tree(graph, u);
    const WidestTree after = widest_path_tree(result, u);
    for (NodeId v = u + 1; v < graph.size(); ++v) {
      if (!before.reached(v)) continue;
      const double w_before = before.labels[v].weight;
      const double w_after = after.reached(v) ? after.labels[v].weight : 0.0;
      const double ratio = w_before == 0.0 ? 1.0 : w_after / w_before;
      row.min_spanner = std::min(row.min_spanner, ratio);
      if (std::abs(ratio - 1.0) > 1e-12) row.spanner = false;
    }
  }
  return row;
}

std::vector<PropertyRow> properties_suite(const ScenarioConfig& config, std::size_t graphs, std::size_t max_nodes) {
  if (max_nodes < 5) throw ConfigError("properties suite needs max_nodes >= 5");
  std::vector<PropertyRow> rows(graphs);
  parallel_for(graphs, [&](std::size_t i) {
    RngStream stream = derive_stream(config.rng_seed, StreamKind::graph, i);
    const std::size_t n = 5 + stream.index(max_nodes - 4);
    rows[i] = check_properties(random_geometric_graph(config, n, stream), i);
  });
  return rows;
}

const AggregateRow* MetricsReport::find_aggregate(std::string_view group, std::string_view metric) const {
  for (const auto& row : aggregates) {
    if (row.group == group && row.metric == metric) return &row;
  }
  return nullptr;
}

namespace {

std::string sweep_group(const std::optional<Sweep>& sweep, double value) {
  if (!sweep) return "all";
  return sweep->key + "=" + format_number(value);
}

void add_aggregate(MetricsReport& report, std::string group, std::string metric, const std::vector<double>& values) {
  std::vector<double> finite;
  for (double v : values) {
    if (std::isfinite(v)) finite.push_back(v);
  }
  if (finite.empty()) return;
  report.aggregates.push_back({std::move(group), std::move(metric), aggregate(finite, 0.95)});
}

ScenarioConfig resolve(const ExperimentPreset& preset, const ScenarioConfig& base) {
  ScenarioConfig config = base;
  for (const auto& [key, value] : preset.overrides) apply_setting(config, key, value);
  return config;
}

void require_valid(const ScenarioConfig& config) {
  const auto violations = validate(config);
  if (violations.empty()) return;
  std::string message = "invalid configuration:";
  for (const auto& v : violations) message += " " + v.field + " " + v.message + ";";
  throw ConfigError(message);
}

}  // namespace

MetricsReport run_preset(const ExperimentPreset& preset, const ScenarioConfig& base) {
  if (preset.trials == 0) throw ConfigError("trials must be >= 1");
  MetricsReport report;
  report.preset = preset.name;
  report.config = resolve(preset, base);
  report.trials = preset.trials;
  report.sweep = preset.sweep;
  require_valid(report.config);

  if (preset.name == PresetName::properties_suite) {
    report.properties = properties_suite(report.config, preset.trials, report.config.n_nodes);
    std::vector<double> conn, sym, span, asym;
    for (const auto& row : report.properties) {
      conn.push_back(row.connectivity ? 1.0 : 0.0);
      sym.push_back(row.symmetry ? 1.0 : 0.0);
      span.push_back(row.spanner ? 1.0 : 0.0);
      asym.push_back(static_cast<double>(row.asymmetric_decisions));
    }
    add_aggregate(report, "all", "connectivity_ok", conn);
    add_aggregate(report, "all", "symmetry_ok", sym);
    add_aggregate(report, "all", "spanner_ok", span);
    add_aggregate(report, "all", "asymmetric_decisions", asym);
    return report;
  }

  std::vector<std::pair<double, ScenarioConfig>> points;
  if (preset.sweep) {
    for (double value : preset.sweep->values) {
      ScenarioConfig config = report.config;
      apply_setting(config, preset.sweep->key, format_number(value));
      require_valid(config);
      points.emplace_back(value, std::move(config));
    }
  } else {
    points.emplace_back(std::nan(""), report.config);
  }

  const std::size_t jobs = points.size() * preset.trials;
  std::vector<std::vector<PredictionSample>> predictions(jobs);
  std::vector<TopologyTrialRow> topology(jobs);
  std::vector<std::vector<EndToEndRow>> endtoend(jobs);
  std::vector<Snapshot> first_snapshot(1);
  parallel_for(jobs, [&](std::size_t job) {
    const std::size_t point = job / preset.trials;
    const std::size_t trial = job % preset.trials;
    const auto& [value, config] = points[point];
    const TrialWorld world = run_trial(config, trial);
    switch (preset.name) {
      case PresetName::fig2_prediction:
        predictions[job] = prediction_samples(world, trial);
        break;
      case PresetName::fig3_topology:
        topology[job] = topology_row(world, trial, value);
        if (job == 0 && !world.snapshots.empty()) first_snapshot[0] = world.snapshots.back();
        break;
      case PresetName::fig4_endtoend:
        endtoend[job] = endtoend_rows(world, trial, value);
        break;
      case PresetName::properties_suite:
        break;
    }
  });

  for (std::size_t point = 0; point < points.size(); ++point) {
    const double value = points[point].first;
    const std::string group = sweep_group(preset.sweep, value);
    const std::size_t begin = point * preset.trials;
    const std::size_t end = begin + preset.trials;
    switch (preset.name) {
      case PresetName::fig2_prediction: {
        std::vector<double> ta, tr, diff, per_trial;
        std::vector<ZetaObservation> observations;
        for (std::size_t job = begin; job < end; ++job) {
          std::vector<double> trial_ta, trial_tr;
          for (const auto& s : predictions[job]) {
            report.predictions.push_back(s);
            if (std::isfinite(s.horizon) && (s.t_r || s.t + s.horizon <= report.config.sim_duration)) {
              observations.push_back({s.horizon, s.t_r.value_or(kInfinity), s.velocity_changed});
            }
            if (!s.t_r || !std::isfinite(s.t_a)) continue;
            ta.push_back(s.t_a);
            tr.push_back(*s.t_r);
            diff.push_back(s.t_a - *s.t_r);
            trial_ta.push_back(s.t_a);
            trial_tr.push_back(*s.t_r);
          }
          if (trial_ta.size() >= 2) per_trial.push_back(pearson(trial_ta, trial_tr));
        }
        add_aggregate(report, group, "samples", {static_cast<double>(ta.size())});
        if (ta.size() >= 2) add_aggregate(report, group, "pearson_pooled", {pearson(ta, tr)});
        if (!diff.empty()) add_aggregate(report, group, "median_ta_minus_tr", {median(diff)});
        add_aggregate(report, group, "pearson_per_trial", per_trial);
        add_aggregate(report, group, "t_a", ta);
        add_aggregate(report, group, "t_r", tr);
        try {
          const ZetaEstimate zeta = calibrate_zeta(observations);
          report.aggregates.push_back(
              {group, "zeta_calibrated", Aggregate{zeta.estimate, (zeta.upper - zeta.lower) / 2.0, zeta.samples}});
        } catch (const Error&) {
          // Too few velocity-changed links; the estimate is simply omitted.
        }
        break;
      }
      case PresetName::fig3_topology: {
        std::vector<double> cols[9];
        for (std::size_t job = begin; job < end; ++job) {
          const auto& r = topology[job];
          report.topology.push_back(r);
          const double values[9] = {r.avg_degree_before, r.avg_degree_after, r.max_degree_before,
                                     r.max_degree_after,  r.mean_ta_before,  r.mean_ta_after,
                                     r.mean_tr_before,    r.mean_tr_after,   r.control_intensity};
          for (int c = 0; c < 9; ++c) cols[c].push_back(values[c]);
        }
        const char* names[9] = {"avg_degree_before", "avg_degree_after", "max_degree_before",
                                "max_degree_after",  "mean_ta_before",   "mean_ta_after",
                                "mean_tr_before",    "mean_tr_after",    "control_intensity"};
        for (int c = 0; c < 9; ++c) add_aggregate(report, group, names[c], cols[c]);
        break;
      }
      case PresetName::fig4_endtoend: {
        std::map<std::string, std::vector<double>> cols;
        for (std::size_t job = begin; job < end; ++job) {
          for (const auto& r : endtoend[job]) {
            const std::string key = std::string(to_string(r.metric)) + "/" + std::string(to_string(r.topology));
            cols[key + ":reroutes"].push_back(static_cast<double>(r.reroutes));
            cols[key + ":downtime_s"].push_back(r.downtime);
            cols[key + ":throughput"].push_back(r.throughput);
            cols[key + ":delay_ms"].push_back(r.delay_ms);
            report.endtoend.push_back(r);
          }
        }
        for (const auto& [metric, values] : cols) add_aggregate(report, group, metric, values);
        break;
      }
      case PresetName::properties_suite:
        break;
    }
  }
  if (preset.name == PresetName::fig3_topology) {
    report.sample_topology = first_snapshot[0].pctc;
    report.sample_stats = stats(first_snapshot[0].original, first_snapshot[0].pctc);
  }
  return report;
}

std::vector<CsvTable> MetricsReport::tables() const {
  std::vector<CsvTable> out;
  auto num = [](double v) { return format_number(v); };
  auto count = [](std::size_t v) { return std::to_string(v); };
  const std::string sweep_key = sweep ? sweep->key : "sweep";
  switch (preset) {
    case PresetName::fig2_prediction: {
      CsvTable t{"predictions.csv", {"trial", "t", "u", "v", "t_p", "l_tp", "t_a", "t_r_when_known"}, {}};
      for (const auto& s : predictions) {
        t.rows.push_back({count(s.trial), num(s.t), count(s.u), count(s.v), num(s.t_p), num(s.l_tp), num(s.t_a),
                          s.t_r ? num(*s.t_r) : ""});
      }
      out.push_back(std::move(t));
      break;
    }
    case PresetName::fig3_topology: {
      CsvTable t{"topology_trials.csv",
                 {"trial", sweep_key, "avg_degree_before", "avg_degree_after", "max_degree_before", "max_degree_after",
                  "mean_ta_before", "mean_ta_after", "mean_tr_before", "mean_tr_after", "control_intensity"},
                 {}};
      for (const auto& r : topology) {
        t.rows.push_back({count(r.trial), num(r.sweep_value), num(r.avg_degree_before), num(r.avg_degree_after),
                          num(r.max_degree_before), num(r.max_degree_after), num(r.mean_ta_before),
                          num(r.mean_ta_after), num(r.mean_tr_before), num(r.mean_tr_after),
                          num(r.control_intensity)});
      }
      out.push_back(std::move(t));
      CsvTable edges{"topology_edges.csv", {"u", "v", "w", "t_a"}, {}};
      for (const auto& e : sample_topology.edges()) edges.rows.push_back({count(e.u), count(e.v), num(e.w), num(e.t_a)});
      out.push_back(std::move(edges));
      CsvTable nodes{"node_stats.csv", {"id", "n", "phi"}, {}};
      for (std::size_t i = 0; i < sample_stats.phi.size(); ++i) {
        nodes.rows.push_back({count(i), count(sample_stats.original_degree[i]), count(sample_stats.phi[i])});
      }
      out.push_back(std::move(nodes));
      break;
    }
    case PresetName::fig4_endtoend: {
      CsvTable trials{"endtoend_trials.csv",
                      {"trial", sweep_key, "metric", "topology", "reroutes", "downtime_s", "throughput_proxy",
                       "delay_proxy_ms"},
                      {}};
      CsvTable flows{"flows.csv",
                     {"trial", sweep_key, "topology", "flow", "metric", "reroutes", "downtime_s", "throughput_proxy",
                      "delay_proxy_ms", "hops_initial"},
                     {}};
      for (const auto& r : endtoend) {
        const std::string metric(to_string(r.metric));
        const std::string topo(to_string(r.topology));
        trials.rows.push_back({count(r.trial), num(r.sweep_value), metric, topo, count(r.reroutes), num(r.downtime),
                               num(r.throughput), num(r.delay_ms)});
        for (const auto& f : r.flows) {
          flows.rows.push_back({count(r.trial), num(r.sweep_value), topo, count(f.flow), metric, count(f.reroutes),
                                num(f.downtime), num(f.throughput), num(f.delay_ms), count(f.hops_initial)});
        }
      }
      out.push_back(std::move(trials));
      out.push_back(std::move(flows));
      break;
    }
    case PresetName::properties_suite: {
      CsvTable t{"properties.csv",
                 {"graph", "n", "edges", "kept", "connectivity", "symmetry", "spanner", "min_spanner",
                  "asymmetric_decisions"},
                 {}};
      for (const auto& r : properties) {
        t.rows.push_back({count(r.graph), count(r.n), count(r.edges), count(r.kept), r.connectivity ? "1" : "0",
                          r.symmetry ? "1" : "0", r.spanner ? "1" : "0", num(r.min_spanner),
                          count(r.asymmetric_decisions)});
      }
      out.push_back(std::move(t));
      break;
    }
  }
  CsvTable agg{"aggregates.csv", {"group", "metric", "n", "mean", "ci95_half_width", "ci95_lower", "ci95_upper"}, {}};
  for (const auto& a : aggregates) {
    const auto& v = a.value;
    agg.rows.push_back({a.group, a.metric, count(v.n), num(v.mean), v.half_width ? num(*v.half_width) : "",
                        v.half_width ? num(v.lower()) : "", v.half_width ? num(v.upper()) : ""});
  }
  out.push_back(std::move(agg));
  return out;
}

void write_report(const MetricsReport& report, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& table : report.tables()) {
    std::ofstream out(dir / table.name);
    if (!out) throw Error("cannot write " + (dir / table.name).string());
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
      out << '\n';
    }
  }
  std::ofstream manifest(dir / "manifest.txt");
  manifest << "# pctc " << kVersion << "\n";
  manifest << "# preset = " << to_string(report.preset) << "\n";
  manifest << "# trials = " << report.trials << "\n";
  if (report.sweep) {
    manifest << "# sweep = " << report.sweep->key << ":";
    for (std::size_t i = 0; i < report.sweep->values.size(); ++i) {
      manifest << (i ? "," : "") << format_number(report.sweep->values[i]);
    }
    manifest << "\n";
  }
  manifest << to_key_value(report.config);
}

}  // namespace pctc
