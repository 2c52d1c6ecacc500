#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pctc/core.hpp"

namespace pctc {

enum class BoundaryPolicy { reflect, wrap };

/// Scenario parameters. Units: meters, seconds, Mb/s.
///
/// Defaults follow the reference setup: a 500 x 500 m area, mean epoch of
/// 60 s, 300 m range and 2 Mb/s links. Values the reference setup leaves
/// open (node count, speed, PU layout, delta, refresh cadence) are
/// documented choices.
struct ScenarioConfig {
  double area_width = 500.0;
  double area_height = 500.0;
  std::uint32_t n_nodes = 30;
  std::vector<PrimaryUser> primary_users = default_primary_users();
  double v_max = 10.0;
  double lambda = 1.0 / 60.0;
  double tx_range = 300.0;
  double rate = 2.0;
  double delta = 1.0;
  double tau = 0.0;
  double zeta = 0.5;
  double sample_spacing = 1.0;
  double topology_period = 5.0;
  double sim_duration = 600.0;
  std::uint64_t rng_seed = 1;
  BoundaryPolicy boundary_policy = BoundaryPolicy::reflect;

  // Engine knobs.
  double dt = 0.1;
  double noise_std = 0.0;
  std::uint32_t n_flows = 5;
  double hop_delay_ms = 5.0;

  static std::vector<PrimaryUser> default_primary_users();
};

struct Violation {
  std::string field;
  std::string message;
};

/// Every invariant violation of `config`; empty when the config is valid.
std::vector<Violation> validate(const ScenarioConfig& config);

class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Sets one key from its textual value. Throws ConfigError on unknown keys
/// or unparsable values.
void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value);

using Settings = std::vector<std::pair<std::string, std::string>>;

/// Raw `key = value` pairs in file order, each checked with apply_setting.
Settings parse_settings(std::istream& in);
Settings load_settings(const std::filesystem::path& path);

/// Parses a `key = value` file. '#' starts a comment. Missing keys keep
/// their defaults.
ScenarioConfig parse_config(std::istream& in);
ScenarioConfig load_config(const std::filesystem::path& path);

/// Every key in canonical order, as `key = value` lines; parse_config reads
/// it back to an equal config.
std::string to_key_value(const ScenarioConfig& config);

std::string_view to_string(BoundaryPolicy policy);

}  // namespace pctc
