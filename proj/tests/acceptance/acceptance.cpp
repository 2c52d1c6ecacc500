// Acceptance checks: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "pctc/harness.hpp"

using namespace pctc;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int id, bool ok, double seconds, const std::string& detail) {
  std::printf("%s criterion %d (%.2fs): %s\n", ok ? "PASS" : "FAIL", id, seconds, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

double since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Vec2D random_point(RngStream& s, double lo, double hi) { return {s.uniform(lo, hi), s.uniform(lo, hi)}; }

Vec2D random_velocity(RngStream& s, double vmax) {
  const double angle = s.uniform(0.0, 2.0 * std::numbers::pi);
  const double speed = s.uniform(0.1, vmax);
  return {speed * std::cos(angle), speed * std::sin(angle)};
}

std::array<DistanceSample, 3> kinematic_samples(Vec2D p, Vec2D v, double t0, double spacing) {
  std::array<DistanceSample, 3> out;
  for (int i = 0; i < 3; ++i) {
    const double t = t0 + i * spacing;
    out[i] = {t, (p + v * (t - t0)).norm()};
  }
  return out;
}

void fit_exactness() {
  const auto start = Clock::now();
  RngStream s = derive_stream(101, StreamKind::test);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double spacing = s.uniform(0.1, 5.0);
    const auto samples = kinematic_samples(random_point(s, -500, 500), random_velocity(s, 30.0), s.uniform(0, 600),
                                           spacing);
    const QuadFit fit = fit_quadratic(samples);
    double scale = 0.0;
    for (const auto& x : samples) scale = std::max(scale, x.d * x.d);
    for (const auto& x : samples) {
      const double err = std::abs(fit(x.t - samples[0].t) - x.d * x.d);
      worst = std::max(worst, scale > 0.0 ? err / scale : err);
    }
  }
  const double secs = since(start);
  report(1, worst <= 1e-9 && secs < 1.0, secs, fmt("1000 triples, worst relative residual %.3g", worst));
}

void kinematics_oracle() {
  const auto start = Clock::now();
  RngStream s = derive_stream(102, StreamKind::test);
  const double range = 300.0;
  const double rho = 60.0;
  double worst_exit = 0.0;
  double worst_entry = 0.0;
  int exits = 0, entries = 0, finite_entries = 0;
  while (exits < 500 || entries < 500) {
    const Vec2D v = random_velocity(s, 20.0);
    const double spacing = 1.0;
    if (exits < 500) {
      const Vec2D p = random_point(s, -200, 200);
      if ((p + v * (2 * spacing)).norm() < range) {
        const double got = solve_crossing(fit_quadratic(kinematic_samples(p, v, 0.0, spacing)), range,
                                          CrossingMode::exit);
        const double want = oracle::circle_exit(p + v * (2 * spacing), v, range);
        worst_exit = std::max(worst_exit, std::abs(got - want));
        ++exits;
      }
    }
    if (entries < 500) {
      const Vec2D p = random_point(s, -250, 250);
      if ((p + v * (2 * spacing)).norm() > rho) {
        const double got = solve_crossing(fit_quadratic(kinematic_samples(p, v, 0.0, spacing)), rho,
                                          CrossingMode::entry);
        const double want = oracle::circle_entry(p + v * (2 * spacing), v, rho);
        const double err = std::isinf(want) || std::isinf(got) ? (got == want ? 0.0 : kInfinity) : std::abs(got - want);
        worst_entry = std::max(worst_entry, err);
        finite_entries += std::isfinite(want);
        ++entries;
      }
    }
  }
  const double secs = since(start);
  report(2, worst_exit <= 1e-6 && worst_entry <= 1e-6 && secs < 1.0, secs,
         fmt("500 exits worst %.3g s, 500 entries (%d finite) worst %.3g s", worst_exit, finite_entries, worst_entry));
}

void availability_values() {
  const auto start = Clock::now();
  PredictionParams p;
  p.lambda = 1.0 / 60.0;
  p.tau = 0.0;
  p.zeta = 0.5;
  const double l60 = availability_probability(60.0, p);
  // Independent evaluation: e^-1 + 0.5 (1 - e^-1).
  const double want = std::exp(-1.0) + 0.5 * (1.0 - std::exp(-1.0));
  const double l0 = availability_probability(0.0, p);
  const double linf = availability_probability(kInfinity, p);
  const bool ok = std::abs(l60 - 0.68394) <= 1e-5 && std::abs(l60 - want) <= 1e-15 && l0 == 1.0 && linf == p.zeta;
  report(3, ok, since(start), fmt("L(60) = %.8f, L(0) = %.17g, L(inf) = %.17g", l60, l0, linf));
}

void intensity_values() {
  const auto start = Clock::now();
  const double a = control_intensity_formula(1);
  const double b = control_intensity_formula(2);
  const double c = control_intensity_formula(4);
  report(4, a == 1.0 && b == 0.75 && c == 25.0 / 48.0, since(start),
         fmt("n=1 %.17g, n=2 %.17g, n=4 %.17g", a, b, c));
}

void properties() {
  const auto start = Clock::now();
  ScenarioConfig config;
  RngStream sizes = derive_stream(105, StreamKind::test);
  std::size_t connected = 0, symmetric = 0, small = 0, small_pairs = 0, total = 200;
  double worst = 0.0;
  for (std::size_t i = 0; i < total; ++i) {
    RngStream stream = derive_stream(105, StreamKind::graph, i);
    const std::size_t n = 5 + sizes.index(26);
    const Graph g = random_geometric_graph(config, n, stream);
    const PropertyRow row = check_properties(g, i);
    connected += row.connectivity;
    symmetric += row.symmetry;
    if (n > 10) continue;
    ++small;
    const Graph t = build_topology(g);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        const auto before = oracle::best_bottleneck(g, u, v);
        if (!before) continue;
        const auto after = oracle::best_bottleneck(t, u, v);
        const double lib = spanner_factor(g, t, u, v);
        const double ratio = after ? *after / *before : 0.0;
        worst = std::max({worst, std::abs(ratio - 1.0), std::abs(lib - 1.0)});
        ++small_pairs;
      }
    }
  }
  const double secs = since(start);
  report(5, connected == total && symmetric == total && worst <= 1e-12 && secs < 120.0, secs,
         fmt("%zu graphs: connectivity %zu/%zu, symmetry %zu/%zu; %zu graphs with n<=10, %zu pairs, worst |spanner-1| "
             "%.3g",
             total, connected, total, symmetric, total, small, small_pairs, worst));
}

void control_intensity() {
  const auto start = Clock::now();
  std::string detail;
  bool ok = true;
  for (std::size_t n : {5u, 10u, 20u}) {
    RngStream s = derive_stream(106, StreamKind::weights, n);
    double sum = 0.0;
    const int trials = 2000;
    for (int trial = 0; trial < trials; ++trial) {
      LocalGraph local;
      local.center = 0;
      for (NodeId i = 0; i <= n; ++i) local.members.push_back(i);
      for (NodeId a = 0; a <= n; ++a) {
        for (NodeId b = a + 1; b <= n; ++b) {
          const double w = 1.0 - s.uniform();
          local.edges.push_back({a, b, w, 1.0, w});
        }
      }
      sum += static_cast<double>(widest_paths_local(local).preserved.size()) / static_cast<double>(n);
    }
    const double mean = sum / trials;
    const double want = static_cast<double>(oracle::harmonic(n) / static_cast<long double>(n));
    ok = ok && std::abs(mean - want) <= 0.05;
    detail += fmt("n=%zu mean %.4f vs H(n)/n %.4f (2/(n+1) = %.4f); ", n, mean, want, 2.0 / (n + 1.0));
  }
  const double secs = since(start);
  report(6, ok && secs < 30.0, secs, detail);
}

void topology_trend() {
  const auto start = Clock::now();
  const MetricsReport r = run_preset(ExperimentPreset::defaults(PresetName::fig3_topology), ScenarioConfig{});
  bool ok = true;
  std::string detail;
  for (double n : r.sweep->values) {
    const std::string group = "n_nodes=" + format_number(n);
    auto separated = [&](const char* before, const char* after) {
      const Aggregate& b = r.find_aggregate(group, before)->value;
      const Aggregate& a = r.find_aggregate(group, after)->value;
      return a.mean < b.mean && (a.upper() < b.lower() || b.mean - a.mean > 0.5);
    };
    const bool avg = separated("avg_degree_before", "avg_degree_after");
    const bool max = separated("max_degree_before", "max_degree_after");
    std::size_t better = 0, trials = 0;
    for (const auto& row : r.topology) {
      if (row.sweep_value != n) continue;
      ++trials;
      better += row.mean_ta_after >= row.mean_ta_before;
    }
    const bool ta = better * 10 >= trials * 9;
    ok = ok && avg && max && ta;
    detail += fmt("n=%g avg %.2f->%.2f max %.2f->%.2f, T_a kept>=all in %zu/%zu; ", n,
                  r.find_aggregate(group, "avg_degree_before")->value.mean,
                  r.find_aggregate(group, "avg_degree_after")->value.mean,
                  r.find_aggregate(group, "max_degree_before")->value.mean,
                  r.find_aggregate(group, "max_degree_after")->value.mean, better, trials);
  }
  const double secs = since(start);
  report(7, ok && secs < 300.0, secs, detail);
}

void prediction_trend() {
  const auto start = Clock::now();
  const MetricsReport r = run_preset(ExperimentPreset::defaults(PresetName::fig2_prediction), ScenarioConfig{});
  std::vector<double> ta, tr, diff;
  for (const auto& s : r.predictions) {
    if (!s.t_r || !std::isfinite(s.t_a)) continue;
    ta.push_back(s.t_a);
    tr.push_back(*s.t_r);
    diff.push_back(s.t_a - *s.t_r);
  }
  // Links whose ends kept their velocity from the first sample until one
  // frame past the predicted horizon should die within dt of it.
  std::size_t exact = 0, unchanged = 0;
  for (std::size_t trial = 0; trial < r.trials; ++trial) {
    const TrialWorld world = run_trial(r.config, trial);
    const Trajectory& path = *world.trajectory;
    for (const auto& s : prediction_samples(world, trial)) {
      if (!s.t_r || !std::isfinite(s.horizon)) continue;
      const double from = s.t - 2.0 * r.config.sample_spacing;
      const double to = s.t + s.horizon + r.config.dt;
      if (path.velocity_changed(s.u, from, to) || path.velocity_changed(s.v, from, to)) continue;
      ++unchanged;
      exact += std::abs(s.horizon - *s.t_r) <= r.config.dt + 1e-9;
    }
  }
  const double rho = ta.size() >= 2 ? pearson(ta, tr) : std::nan("");
  const double med = diff.empty() ? std::nan("") : median(diff);
  const bool ok = ta.size() >= 300 && rho > 0.3;
  report(8, ok, since(start),
         fmt("%zu observed lifetimes, pearson(T_a, T_r) %.4f, median(T_a - T_r) %.3f s; horizon within dt of T_r for "
             "%zu/%zu links with no velocity change",
             ta.size(), rho, med, exact, unchanged));
}

void routing_corollary() {
  const auto start = Clock::now();
  ScenarioConfig config;
  config.sim_duration = 30.0;
  std::size_t pairs = 0, equal = 0;
  for (std::uint64_t scenario = 0; scenario < 100; ++scenario) {
    config.rng_seed = 1000 + scenario;
    const TrialWorld world = run_trial(config, 0);
    const Snapshot& snap = world.snapshots.front();
    for (NodeId a = 0; a < snap.original.size(); ++a) {
      for (NodeId b = 0; b < snap.original.size(); ++b) {
        if (a == b) continue;
        const auto on_g = find_route(snap.original, a, b, RouteMetric::RPTa);
        if (!on_g) continue;
        const auto on_t = find_route(snap.pctc, a, b, RouteMetric::RPTa);
        ++pairs;
        equal += on_t && on_t->weight == on_g->weight;
      }
    }
  }
  report(9, pairs > 0 && equal == pairs, since(start),
         fmt("100 scenarios, %zu connected ordered pairs, equal RPTa weight on %zu", pairs, equal));
}

void endtoend_trend() {
  const auto start = Clock::now();
  const MetricsReport r = run_preset(ExperimentPreset::defaults(PresetName::fig4_endtoend), ScenarioConfig{});
  std::map<std::pair<double, std::size_t>, std::map<std::string, std::size_t>> reroutes;
  for (const auto& row : r.endtoend) {
    const std::string key = std::string(to_string(row.metric)) + "/" + std::string(to_string(row.topology));
    reroutes[{row.sweep_value, row.trial}][key] = row.reroutes;
  }
  std::size_t wins = 0;
  for (auto& [trial, by] : reroutes) wins += by["RPTa/pctc"] <= by["SP/original"];
  const Aggregate& smart = r.find_aggregate("v_max=20", "RPTa/pctc:throughput")->value;
  const Aggregate& naive = r.find_aggregate("v_max=20", "SP/original:throughput")->value;
  const bool throughput = smart.mean > naive.mean && smart.lower() > naive.upper();
  const double secs = since(start);
  report(10, wins * 10 >= reroutes.size() * 7 && throughput && secs < 600.0, secs,
         fmt("reroutes RPTa/pctc <= SP/original in %zu/%zu trials; throughput at v_max=20: %.4f [%.4f, %.4f] vs %.4f "
             "[%.4f, %.4f]",
             wins, reroutes.size(), smart.mean, smart.lower(), smart.upper(), naive.mean, naive.lower(),
             naive.upper()));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const auto start = Clock::now();
  const auto base = std::filesystem::temp_directory_path() / "pctc_acceptance_determinism";
  std::filesystem::remove_all(base);
  std::size_t files = 0, same = 0;
  for (auto name : {PresetName::fig2_prediction, PresetName::fig3_topology, PresetName::fig4_endtoend,
                    PresetName::properties_suite}) {
    ExperimentPreset p = ExperimentPreset::defaults(name);
    p.trials = std::min<std::size_t>(p.trials, 3);
    if (name != PresetName::properties_suite) p.overrides.emplace_back("sim_duration", "120");
    const auto dir = base / std::string(to_string(name));
    write_report(run_preset(p, ScenarioConfig{}), dir / "a");
    write_report(run_preset(p, ScenarioConfig{}), dir / "b");
    for (const auto& entry : std::filesystem::directory_iterator(dir / "a")) {
      ++files;
      same += slurp(entry.path()) == slurp(dir / "b" / entry.path().filename());
    }
  }
  std::filesystem::remove_all(base);
  report(11, files > 0 && same == files, since(start), fmt("%zu/%zu output files byte-identical", same, files));
}

}  // namespace

int main() {
  fit_exactness();
  kinematics_oracle();
  availability_values();
  intensity_values();
  properties();
  control_intensity();
  topology_trend();
  prediction_trend();
  routing_corollary();
  endtoend_trend();
  determinism();
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
