#include "pctc/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace pctc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  text = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ConfigError("invalid value for '" + std::string(key) + "': '" + std::string(text) + "'");
  }
  return value;
}

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<PrimaryUser> parse_primary_users(std::string_view text) {
  std::vector<PrimaryUser> out;
  text = trim(text);
  if (text.empty() || text == "none") return out;
  while (!text.empty()) {
    const auto semi = text.find(';');
    std::string_view entry = trim(text.substr(0, semi));
    text = semi == std::string_view::npos ? std::string_view{} : text.substr(semi + 1);
    if (entry.empty()) continue;
    double fields[3];
    for (int i = 0; i < 3; ++i) {
      const auto comma = entry.find(',');
      if ((i < 2) == (comma == std::string_view::npos)) {
        throw ConfigError("primary_users entry must be 'x,y,rho': '" + std::string(entry) + "'");
      }
      fields[i] = parse_number<double>("primary_users", entry.substr(0, comma));
      entry = comma == std::string_view::npos ? std::string_view{} : entry.substr(comma + 1);
    }
    out.push_back({static_cast<std::uint32_t>(out.size()), {fields[0], fields[1]}, fields[2]});
  }
  return out;
}

using Setter = std::function<void(ScenarioConfig&, std::string_view)>;
using Getter = std::function<std::string(const ScenarioConfig&)>;

struct Field {
  Setter set;
  Getter get;
};

template <typename T>
Field numeric(T ScenarioConfig::*member, std::string_view key) {
  return {[member, key](ScenarioConfig& c, std::string_view v) { c.*member = parse_number<T>(key, v); },
          [member](const ScenarioConfig& c) {
            if constexpr (std::is_floating_point_v<T>) {
              return format_double(c.*member);
            } else {
              return std::to_string(c.*member);
            }
          }};
}

// Ordered so that to_key_value is stable.
const std::vector<std::pair<std::string_view, Field>>& fields() {
  static const std::vector<std::pair<std::string_view, Field>> table = {
      {"area_width", numeric(&ScenarioConfig::area_width, "area_width")},
      {"area_height", numeric(&ScenarioConfig::area_height, "area_height")},
      {"n_nodes", numeric(&ScenarioConfig::n_nodes, "n_nodes")},
      {"primary_users",
       {[](ScenarioConfig& c, std::string_view v) { c.primary_users = parse_primary_users(v); },
        [](const ScenarioConfig& c) {
          if (c.primary_users.empty()) return std::string("none");
          std::string s;
          for (const auto& pu : c.primary_users) {
            if (!s.empty()) s += "; ";
            s += format_double(pu.pos.x) + "," + format_double(pu.pos.y) + "," + format_double(pu.rho);
          }
          return s;
        }}},
      {"v_max", numeric(&ScenarioConfig::v_max, "v_max")},
      {"lambda", numeric(&ScenarioConfig::lambda, "lambda")},
      {"tx_range", numeric(&ScenarioConfig::tx_range, "tx_range")},
      {"rate", numeric(&ScenarioConfig::rate, "rate")},
      {"delta", numeric(&ScenarioConfig::delta, "delta")},
      {"tau", numeric(&ScenarioConfig::tau, "tau")},
      {"zeta", numeric(&ScenarioConfig::zeta, "zeta")},
      {"sample_spacing", numeric(&ScenarioConfig::sample_spacing, "sample_spacing")},
      {"topology_period", numeric(&ScenarioConfig::topology_period, "topology_period")},
      {"sim_duration", numeric(&ScenarioConfig::sim_duration, "sim_duration")},
      {"rng_seed", numeric(&ScenarioConfig::rng_seed, "rng_seed")},
      {"boundary_policy",
       {[](ScenarioConfig& c, std::string_view v) {
          v = trim(v);
          if (v == "reflect") {
            c.boundary_policy = BoundaryPolicy::reflect;
          } else if (v == "wrap") {
            c.boundary_policy = BoundaryPolicy::wrap;
          } else {
            throw ConfigError("boundary_policy must be 'reflect' or 'wrap', got '" + std::string(v) + "'");
          }
        },
        [](const ScenarioConfig& c) { return std::string(to_string(c.boundary_policy)); }}},
      {"dt", numeric(&ScenarioConfig::dt, "dt")},
      {"noise_std", numeric(&ScenarioConfig::noise_std, "noise_std")},
      {"n_flows", numeric(&ScenarioConfig::n_flows, "n_flows")},
      {"hop_delay_ms", numeric(&ScenarioConfig::hop_delay_ms, "hop_delay_ms")},
  };
  return table;
}

}  // namespace

std::vector<PrimaryUser> ScenarioConfig::default_primary_users() {
  return {{0, {125.0, 375.0}, 60.0}, {1, {375.0, 125.0}, 60.0}};
}

std::string_view to_string(BoundaryPolicy policy) {
  return policy == BoundaryPolicy::reflect ? "reflect" : "wrap";
}

std::vector<Violation> validate(const ScenarioConfig& c) {
  std::vector<Violation> out;
  auto require = [&out](bool ok, std::string field, std::string message) {
    if (!ok) out.push_back({std::move(field), std::move(message)});
  };
  auto finite_positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  auto finite_nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };

  require(finite_positive(c.area_width), "area_width", "must be > 0");
  require(finite_positive(c.area_height), "area_height", "must be > 0");
  require(finite_nonneg(c.v_max), "v_max", "must be >= 0");
  require(finite_positive(c.lambda), "lambda", "must be > 0");
  require(finite_positive(c.tx_range), "tx_range", "must be > 0");
  require(finite_positive(c.rate), "rate", "must be > 0");
  require(finite_nonneg(c.delta), "delta", "must be >= 0");
  require(finite_nonneg(c.tau), "tau", "must be >= 0");
  require(std::isfinite(c.zeta) && c.zeta >= 0.0 && c.zeta <= 1.0, "zeta", "must lie in [0, 1]");
  require(finite_positive(c.sample_spacing), "sample_spacing", "must be > 0");
  require(finite_positive(c.topology_period), "topology_period", "must be > 0");
  require(finite_positive(c.sim_duration), "sim_duration", "must be > 0");
  require(finite_positive(c.dt), "dt", "must be > 0");
  require(finite_nonneg(c.noise_std), "noise_std", "must be >= 0");
  require(finite_nonneg(c.hop_delay_ms), "hop_delay_ms", "must be >= 0");
  for (std::size_t i = 0; i < c.primary_users.size(); ++i) {
    const auto& pu = c.primary_users[i];
    const std::string prefix = "primary_users[" + std::to_string(i) + "]";
    require(pu.pos.finite(), prefix + ".pos", "must be finite");
    require(finite_positive(pu.rho), prefix + ".rho", "must be > 0");
  }
  return out;
}

void apply_setting(ScenarioConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  for (const auto& [name, field] : fields()) {
    if (name == key) {
      field.set(config, value);
      return;
    }
  }
  throw ConfigError("unknown config key '" + std::string(key) + "'");
}

Settings parse_settings(std::istream& in) {
  Settings settings;
  ScenarioConfig scratch;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view view = line;
    if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string_view key = trim(view.substr(0, eq));
    const std::string_view value = trim(view.substr(eq + 1));
    try {
      apply_setting(scratch, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
    settings.emplace_back(key, value);
  }
  return settings;
}

Settings load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  return parse_settings(in);
}

ScenarioConfig parse_config(std::istream& in) {
  ScenarioConfig config;
  for (const auto& [key, value] : parse_settings(in)) apply_setting(config, key, value);
  return config;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  ScenarioConfig config;
  for (const auto& [key, value] : load_settings(path)) apply_setting(config, key, value);
  return config;
}

std::string to_key_value(const ScenarioConfig& config) {
  std::ostringstream out;
  for (const auto& [name, field] : fields()) out << name << " = " << field.get(config) << '\n';
  return out.str();
}

}  // namespace pctc
