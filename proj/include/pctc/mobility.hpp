#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "pctc/config.hpp"
#include "pctc/core.hpp"
#include "pctc/rng.hpp"

namespace pctc {

struct DistanceSample {
  double t = 0.0;
  double d = 0.0;
};

enum class DeathCause { range_exit, pu_interference, sim_end };

std::string_view to_string(DeathCause cause);

/// One maximal interval during which a link was usable.
struct LinkLifetimeRecord {
  NodeId u = 0;
  NodeId v = 0;
  double birth = 0.0;
  double death = 0.0;
  DeathCause cause = DeathCause::sim_end;

  [[nodiscard]] double duration() const { return death - birth; }
};

struct MobilityParams {
  double width = 500.0;
  double height = 500.0;
  double v_max = 10.0;
  double lambda = 1.0 / 60.0;
  BoundaryPolicy boundary = BoundaryPolicy::reflect;

  static MobilityParams from(const ScenarioConfig& config);
};

/// Random walk: on each epoch a node draws a direction ~ U[0, 2pi), a speed
/// ~ U[0, v_max] and an epoch length ~ Exp(lambda), then moves in a straight
/// line. Wall reflections flip a velocity component but do not start a new
/// epoch.
class RandomWalk {
 public:
  explicit RandomWalk(MobilityParams params) : params_(params) {}

  [[nodiscard]] const MobilityParams& params() const { return params_; }

  void new_epoch(NodeState& node, RngStream& stream) const;

  /// Advances every node by `dt`. Epochs expiring inside the step are
  /// handled by sub-stepping to the exact expiry instant, so trajectories
  /// are exactly piecewise linear. `streams[i]` belongs to `nodes[i]`.
  /// When `epoch_log` is given, (node index, time) of each new epoch is
  /// appended, with `t_now` the time at the start of the step. Wall
  /// reflections go to `reflection_log` the same way.
  void step(std::span<NodeState> nodes, double dt, std::span<RngStream> streams,
            std::vector<std::pair<NodeId, double>>* epoch_log = nullptr, double t_now = 0.0,
            std::vector<std::pair<NodeId, double>>* reflection_log = nullptr) const;

 private:
  /// Returns true when the node bounced off a wall.
  bool advance(NodeState& node, double h) const;

  MobilityParams params_;
};

/// Ground-truth positions and velocities sampled every `dt`, plus the
/// instants at which each node started a new mobility epoch or reflected.
class Trajectory {
 public:
  Trajectory(double dt, std::size_t n_nodes);

  void push(std::span<const NodeState> nodes);
  void add_epoch_change(NodeId node, double t) { epochs_[node].push_back(t); }
  void add_reflection(NodeId node, double t) { reflections_[node].push_back(t); }

  [[nodiscard]] double dt() const { return dt_; }
  [[nodiscard]] std::size_t n_nodes() const { return n_nodes_; }
  [[nodiscard]] std::size_t frames() const { return frames_; }
  [[nodiscard]] double time(std::size_t frame) const { return static_cast<double>(frame) * dt_; }
  [[nodiscard]] double end_time() const { return frames() == 0 ? 0.0 : time(frames() - 1); }

  [[nodiscard]] Vec2D position(NodeId node, std::size_t frame) const { return positions_[frame * n_nodes_ + node]; }
  [[nodiscard]] Vec2D velocity(NodeId node, std::size_t frame) const { return velocities_[frame * n_nodes_ + node]; }

  /// Frame index whose time equals `t` (to 1e-9 s), if any.
  [[nodiscard]] std::optional<std::size_t> frame_at(double t) const;
  /// Position at time `t`; exact on frame times, linearly interpolated
  /// between them. Throws Error for times outside the simulated span.
  [[nodiscard]] Vec2D position_at(NodeId node, double t) const;

  [[nodiscard]] const std::vector<double>& epoch_changes(NodeId node) const { return epochs_[node]; }
  /// True when `node` started a new epoch in (from, to].
  [[nodiscard]] bool epoch_changed(NodeId node, double from, double to) const;
  [[nodiscard]] const std::vector<double>& reflections(NodeId node) const { return reflections_[node]; }
  /// New epoch or wall reflection in (from, to].
  [[nodiscard]] bool velocity_changed(NodeId node, double from, double to) const;

 private:
  double dt_;
  std::size_t n_nodes_;
  std::size_t frames_ = 0;
  std::vector<Vec2D> positions_;
  std::vector<Vec2D> velocities_;
  std::vector<std::vector<double>> epochs_;
  std::vector<std::vector<double>> reflections_;
};

/// Uniform placement over the area, rejecting points inside any PU disc.
std::vector<NodeState> place_nodes(const ScenarioConfig& config, RngStream& stream);

/// Places nodes, draws their first epochs, and simulates `sim_duration`
/// seconds at step `dt`. Node i draws from mobility stream i of `seed`.
Trajectory simulate(const ScenarioConfig& config, std::uint64_t seed);
/// Same, from explicit initial states (velocities and epochs are kept).
Trajectory simulate(const ScenarioConfig& config, std::vector<NodeState> initial, std::uint64_t seed);

/// Gaussian measurement noise on sampled distances.
struct MeasurementNoise {
  double std_dev = 0.0;
  RngStream* stream = nullptr;
};

std::array<DistanceSample, 3> sample_distances(const Trajectory& trajectory, NodeId u, NodeId v,
                                               std::array<double, 3> times, MeasurementNoise noise = {});
std::array<DistanceSample, 3> sample_distances(const Trajectory& trajectory, NodeId u, const PrimaryUser& pu,
                                               std::array<double, 3> times, MeasurementNoise noise = {});

/// Link-availability oracle over a trajectory: a link is alive when both
/// ends are within `range` and neither end lies inside any PU disc.
class GroundTruth {
 public:
  GroundTruth(const Trajectory& trajectory, double range, std::vector<PrimaryUser> primary_users);

  [[nodiscard]] const Trajectory& trajectory() const { return *trajectory_; }
  [[nodiscard]] double range() const { return range_; }
  [[nodiscard]] const std::vector<PrimaryUser>& primary_users() const { return primary_users_; }

  [[nodiscard]] bool blocked(NodeId node, std::size_t frame) const {
    return blocked_[frame * trajectory_->n_nodes() + node] != 0;
  }
  [[nodiscard]] bool in_range(NodeId u, NodeId v, std::size_t frame) const {
    return (trajectory_->position(u, frame) - trajectory_->position(v, frame)).norm2() <= range_ * range_;
  }
  [[nodiscard]] bool alive(NodeId u, NodeId v, std::size_t frame) const {
    return in_range(u, v, frame) && !blocked(u, frame) && !blocked(v, frame);
  }

 private:
  const Trajectory* trajectory_;
  double range_;
  std::vector<PrimaryUser> primary_users_;
  std::vector<char> blocked_;
};

/// Maximal alive intervals of every node pair, ordered by (u, v, birth).
/// Death is the first frame at which the link is dead.
std::vector<LinkLifetimeRecord> record_lifetimes(const GroundTruth& truth);
std::vector<LinkLifetimeRecord> record_lifetimes(const Trajectory& trajectory, double range,
                                                 const std::vector<PrimaryUser>& primary_users);

/// CSV rows (t, node_id, x, y, vx, vy).
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

}  // namespace pctc
