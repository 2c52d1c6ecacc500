// pctc command line: run experiment presets and check topology properties.
#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <optional>
#include <iostream>
#include <string>
#include <vector>

#include "pctc/harness.hpp"

namespace {

void print_aggregates(const pctc::MetricsReport& report) {
  for (const auto& row : report.aggregates) {
    const auto& a = row.value;
    std::printf("%-14s %-28s n=%-6zu mean=%-12s", row.group.c_str(), row.metric.c_str(), a.n,
                pctc::format_number(a.mean).c_str());
    if (a.half_width) std::printf(" +/- %s", pctc::format_number(*a.half_width).c_str());
    std::printf("\n");
  }
}

int run_command(const std::string& preset_name, const std::string& config_path, std::optional<std::uint64_t> seed,
                std::optional<std::size_t> trials, const std::string& out_dir, const std::vector<std::string>& sets,
                bool dump_trajectory) {
  pctc::ExperimentPreset preset = pctc::ExperimentPreset::defaults(pctc::parse_preset(preset_name));
  if (!config_path.empty()) {
    for (auto& kv : pctc::load_settings(config_path)) preset.overrides.push_back(std::move(kv));
  }
  for (const auto& s : sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw pctc::ConfigError("--set expects key=value, got '" + s + "'");
    preset.overrides.emplace_back(s.substr(0, eq), s.substr(eq + 1));
  }
  if (seed) preset.overrides.emplace_back("rng_seed", std::to_string(*seed));
  if (trials) preset.trials = *trials;

  const pctc::MetricsReport report = pctc::run_preset(preset, pctc::ScenarioConfig{});
  pctc::write_report(report, out_dir);
  if (dump_trajectory) {
    const auto trajectory = pctc::simulate(report.config, pctc::trial_seed(report.config.rng_seed, 0));
    std::ofstream out(std::filesystem::path(out_dir) / "trajectory.csv");
    pctc::write_trajectory_csv(out, trajectory);
  }
  std::printf("preset %s, %zu trials, results in %s\n", std::string(pctc::to_string(report.preset)).c_str(),
              report.trials, out_dir.c_str());
  print_aggregates(report);
  return 0;
}

int check_command(std::size_t graphs, std::size_t max_nodes, std::uint64_t seed, const std::string& out_dir) {
  pctc::ScenarioConfig config;
  config.rng_seed = seed;
  const auto rows = pctc::properties_suite(config, graphs, max_nodes);
  std::size_t conn = 0, sym = 0, span = 0, asym = 0;
  for (const auto& r : rows) {
    conn += r.connectivity;
    sym += r.symmetry;
    span += r.spanner;
    asym += r.asymmetric_decisions;
  }
  std::printf("graphs: %zu\n", rows.size());
  std::printf("connectivity preserved: %zu/%zu\n", conn, rows.size());
  std::printf("symmetric subgraph:     %zu/%zu\n", sym, rows.size());
  std::printf("1-spanner:              %zu/%zu\n", span, rows.size());
  std::printf("one-sided keep decisions merged away: %zu\n", asym);
  if (!out_dir.empty()) {
    pctc::MetricsReport report;
    report.preset = pctc::PresetName::properties_suite;
    report.config = config;
    report.trials = graphs;
    report.properties = rows;
    pctc::write_report(report, out_dir);
  }
  const bool ok = conn == rows.size() && sym == rows.size() && span == rows.size();
  std::printf("%s\n", ok ? "all properties hold" : "PROPERTY VIOLATION");
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prediction-based cognitive topology control simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run an experiment preset");
  std::string preset_name;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::string out_dir = "results";
  std::vector<std::string> sets;
  bool dump_trajectory = false;
  run->add_option("preset", preset_name, "fig2_prediction | fig3_topology | fig4_endtoend | properties_suite")
      ->required();
  run->add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Master RNG seed");
  run->add_option("--trials", trials, "Independent trials per sweep point")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory");
  run->add_option("--set", sets, "Extra key=value override (repeatable)");
  run->add_flag("--trajectory", dump_trajectory, "Also write the first trial's trajectory");

  auto* check = app.add_subcommand("check-properties", "Check connectivity, symmetry and spanner on random graphs");
  std::size_t graphs = 200;
  std::size_t max_nodes = 30;
  std::uint64_t check_seed = 1;
  std::string check_out;
  check->add_option("--graphs", graphs, "Number of random graphs")->check(CLI::PositiveNumber);
  check->add_option("--max-nodes", max_nodes, "Largest graph size (>= 5)")->check(CLI::Range(5, 100000));
  check->add_option("--seed", check_seed, "Master RNG seed");
  check->add_option("--out", check_out, "Optional output directory");

  auto* version = app.add_subcommand("version", "Print the version");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return run_command(preset_name, config_path, seed, trials, out_dir, sets, dump_trajectory);
    if (*check) return check_command(graphs, max_nodes, check_seed, check_out);
    if (*version) {
      std::cout << "pctc " << pctc::kVersion << "\n";
      return 0;
    }
  } catch (const pctc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
