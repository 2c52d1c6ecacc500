#include "pctc/mobility.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>

namespace pctc {

namespace {

constexpr double kTimeTolerance = 1e-9;

bool reflect_into(double& p, double& v, double length) {
  bool hit = false;
  while (p < 0.0 || p > length) {
    p = p < 0.0 ? -p : 2.0 * length - p;
    v = -v;
    hit = true;
  }
  return hit;
}

bool any_after(const std::vector<double>& times, double from, double to) {
  const auto it = std::upper_bound(times.begin(), times.end(), from);
  return it != times.end() && *it <= to;
}

void wrap_into(double& p, double length) {
  p = std::fmod(p, length);
  if (p < 0.0) p += length;
}

}  // namespace

std::string_view to_string(DeathCause cause) {
  switch (cause) {
    case DeathCause::range_exit:
      return "range_exit";
    case DeathCause::pu_interference:
      return "pu_interference";
    case DeathCause::sim_end:
      return "sim_end";
  }
  return "unknown";
}

MobilityParams MobilityParams::from(const ScenarioConfig& config) {
  return {config.area_width, config.area_height, config.v_max, config.lambda, config.boundary_policy};
}

void RandomWalk::new_epoch(NodeState& node, RngStream& stream) const {
  const double direction = stream.uniform(0.0, 2.0 * std::numbers::pi);
  const double speed = stream.uniform(0.0, params_.v_max);
  node.vel = {speed * std::cos(direction), speed * std::sin(direction)};
  node.epoch_remaining = stream.exponential(params_.lambda);
}

bool RandomWalk::advance(NodeState& node, double h) const {
  node.pos = node.pos + node.vel * h;
  if (params_.boundary == BoundaryPolicy::reflect) {
    const bool x = reflect_into(node.pos.x, node.vel.x, params_.width);
    const bool y = reflect_into(node.pos.y, node.vel.y, params_.height);
    return x || y;
  }
  wrap_into(node.pos.x, params_.width);
  wrap_into(node.pos.y, params_.height);
  return false;
}

void RandomWalk::step(std::span<NodeState> nodes, double dt, std::span<RngStream> streams,
                      std::vector<std::pair<NodeId, double>>* epoch_log, double t_now,
                      std::vector<std::pair<NodeId, double>>* reflection_log) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    NodeState& node = nodes[i];
    double left = dt;
    while (left > 0.0) {
      bool reflected = false;
      if (node.epoch_remaining <= left) {
        reflected = advance(node, node.epoch_remaining);
        left -= node.epoch_remaining;
        new_epoch(node, streams[i]);
        if (epoch_log != nullptr) epoch_log->emplace_back(node.id, t_now + (dt - left));
      } else {
        reflected = advance(node, left);
        node.epoch_remaining -= left;
        left = 0.0;
      }
      // Logged at the end of the sub-step; exact to within dt.
      if (reflected && reflection_log != nullptr) reflection_log->emplace_back(node.id, t_now + (dt - left));
    }
  }
}

Trajectory::Trajectory(double dt, std::size_t n_nodes)
    : dt_(dt), n_nodes_(n_nodes), epochs_(n_nodes), reflections_(n_nodes) {}

void Trajectory::push(std::span<const NodeState> nodes) {
  for (const auto& node : nodes) {
    positions_.push_back(node.pos);
    velocities_.push_back(node.vel);
  }
  ++frames_;
}

std::optional<std::size_t> Trajectory::frame_at(double t) const {
  if (frames_ == 0 || t < -kTimeTolerance) return std::nullopt;
  const double k = std::round(t / dt_);
  if (std::abs(k * dt_ - t) > kTimeTolerance || k >= static_cast<double>(frames_)) return std::nullopt;
  return static_cast<std::size_t>(k);
}

Vec2D Trajectory::position_at(NodeId node, double t) const {
  if (node >= n_nodes_) throw Error("node id " + std::to_string(node) + " out of range");
  if (frames_ == 0 || t < -kTimeTolerance || t > end_time() + kTimeTolerance) {
    throw Error("time " + std::to_string(t) + " s has not been simulated (trajectory ends at " +
                std::to_string(end_time()) + " s)");
  }
  if (const auto frame = frame_at(t)) return position(node, *frame);
  const auto lo = static_cast<std::size_t>(std::floor(t / dt_));
  const double frac = (t - time(lo)) / dt_;
  // Interpolation ignores wraps and reflections inside one dt.
  return position(node, lo) + (position(node, lo + 1) - position(node, lo)) * frac;
}

bool Trajectory::epoch_changed(NodeId node, double from, double to) const {
  return any_after(epochs_[node], from, to);
}

bool Trajectory::velocity_changed(NodeId node, double from, double to) const {
  return any_after(epochs_[node], from, to) || any_after(reflections_[node], from, to);
}

std::vector<NodeState> place_nodes(const ScenarioConfig& config, RngStream& stream) {
  constexpr int kMaxAttempts = 100000;
  std::vector<NodeState> nodes;
  nodes.reserve(config.n_nodes);
  for (NodeId id = 0; id < config.n_nodes; ++id) {
    NodeState node;
    node.id = id;
    int attempts = 0;
    do {
      if (++attempts > kMaxAttempts) throw Error("cannot place node outside all primary-user discs");
      node.pos = {stream.uniform(0.0, config.area_width), stream.uniform(0.0, config.area_height)};
    } while (std::any_of(config.primary_users.begin(), config.primary_users.end(),
                         [&](const PrimaryUser& pu) { return pu.covers(node.pos); }));
    nodes.push_back(node);
  }
  return nodes;
}

namespace {

std::vector<RngStream> mobility_streams(const std::vector<NodeState>& nodes, std::uint64_t seed) {
  std::vector<RngStream> streams;
  streams.reserve(nodes.size());
  for (const auto& node : nodes) streams.push_back(derive_stream(seed, StreamKind::mobility, node.id));
  return streams;
}

Trajectory run_walk(const ScenarioConfig& config, std::vector<NodeState> nodes, std::vector<RngStream> streams) {
  const RandomWalk walk(MobilityParams::from(config));
  Trajectory trajectory(config.dt, nodes.size());
  trajectory.push(nodes);
  const auto steps = static_cast<std::size_t>(std::llround(config.sim_duration / config.dt));
  std::vector<std::pair<NodeId, double>> log;
  std::vector<std::pair<NodeId, double>> bounces;
  for (std::size_t k = 0; k < steps; ++k) {
    log.clear();
    bounces.clear();
    walk.step(nodes, config.dt, streams, &log, trajectory.time(k), &bounces);
    for (const auto& [id, t] : log) trajectory.add_epoch_change(id, t);
    for (const auto& [id, t] : bounces) trajectory.add_reflection(id, t);
    trajectory.push(nodes);
  }
  return trajectory;
}

}  // namespace

Trajectory simulate(const ScenarioConfig& config, std::uint64_t seed) {
  RngStream placement = derive_stream(seed, StreamKind::placement);
  std::vector<NodeState> nodes = place_nodes(config, placement);
  std::vector<RngStream> streams = mobility_streams(nodes, seed);
  const RandomWalk walk(MobilityParams::from(config));
  for (std::size_t i = 0; i < nodes.size(); ++i) walk.new_epoch(nodes[i], streams[i]);
  return run_walk(config, std::move(nodes), std::move(streams));
}

Trajectory simulate(const ScenarioConfig& config, std::vector<NodeState> initial, std::uint64_t seed) {
  std::vector<RngStream> streams = mobility_streams(initial, seed);
  return run_walk(config, std::move(initial), std::move(streams));
}

namespace {

template <typename Distance>
std::array<DistanceSample, 3> sample_with(std::array<double, 3> times,
                                          MeasurementNoise noise, Distance&& distance_at) {
  if (!(times[0] < times[1] && times[1] < times[2])) {
    throw Error("sample times must be strictly increasing");
  }
  std::array<DistanceSample, 3> out;
  for (std::size_t i = 0; i < 3; ++i) {
    double d = distance_at(times[i]);
    if (noise.std_dev > 0.0 && noise.stream != nullptr) d = std::max(0.0, d + noise.std_dev * noise.stream->normal());
    out[i] = {times[i], d};
  }
  return out;
}

}  // namespace

std::array<DistanceSample, 3> sample_distances(const Trajectory& trajectory, NodeId u, NodeId v,
                                               std::array<double, 3> times, MeasurementNoise noise) {
  return sample_with(times, noise, [&](double t) {
    return distance(trajectory.position_at(u, t), trajectory.position_at(v, t));
  });
}

std::array<DistanceSample, 3> sample_distances(const Trajectory& trajectory, NodeId u, const PrimaryUser& pu,
                                               std::array<double, 3> times, MeasurementNoise noise) {
  return sample_with(times, noise,
                     [&](double t) { return distance(trajectory.position_at(u, t), pu.pos); });
}

GroundTruth::GroundTruth(const Trajectory& trajectory, double range, std::vector<PrimaryUser> primary_users)
    : trajectory_(&trajectory), range_(range), primary_users_(std::move(primary_users)) {
  const std::size_t n = trajectory.n_nodes();
  blocked_.assign(trajectory.frames() * n, 0);
  for (std::size_t k = 0; k < trajectory.frames(); ++k) {
    for (NodeId u = 0; u < n; ++u) {
      const Vec2D p = trajectory.position(u, k);
      blocked_[k * n + u] = std::any_of(primary_users_.begin(), primary_users_.end(),
                                        [&](const PrimaryUser& pu) { return pu.covers(p); });
    }
  }
}

std::vector<LinkLifetimeRecord> record_lifetimes(const GroundTruth& truth) {
  const Trajectory& trajectory = truth.trajectory();
  const auto n = static_cast<NodeId>(trajectory.n_nodes());
  std::vector<LinkLifetimeRecord> out;
  for (NodeId u = 0; u < n; ++u) {
    for (NodeId v = u + 1; v < n; ++v) {
      bool was_alive = false;
      double birth = 0.0;
      for (std::size_t k = 0; k < trajectory.frames(); ++k) {
        const bool alive = truth.alive(u, v, k);
        if (alive && !was_alive) {
          birth = trajectory.time(k);
        } else if (!alive && was_alive) {
          const bool pu = truth.blocked(u, k) || truth.blocked(v, k);
          out.push_back({u, v, birth, trajectory.time(k), pu ? DeathCause::pu_interference : DeathCause::range_exit});
        }
        was_alive = alive;
      }
      if (was_alive) out.push_back({u, v, birth, trajectory.end_time(), DeathCause::sim_end});
    }
  }
  return out;
}

std::vector<LinkLifetimeRecord> record_lifetimes(const Trajectory& trajectory, double range,
                                                 const std::vector<PrimaryUser>& primary_users) {
  return record_lifetimes(GroundTruth(trajectory, range, primary_users));
}

void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory) {
  out << "t,node_id,x,y,vx,vy\n";
  for (std::size_t k = 0; k < trajectory.frames(); ++k) {
    for (NodeId u = 0; u < trajectory.n_nodes(); ++u) {
      const Vec2D p = trajectory.position(u, k);
      const Vec2D v = trajectory.velocity(u, k);
      out << trajectory.time(k) << ',' << u << ',' << p.x << ',' << p.y << ',' << v.x << ',' << v.y << '\n';
    }
  }
}

}  // namespace pctc
