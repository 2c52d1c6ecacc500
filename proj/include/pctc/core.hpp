#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace pctc {

using NodeId = std::uint32_t;

/// Planar vector in meters (positions) or m/s (velocities).
struct Vec2D {
  double x = 0.0;
  double y = 0.0;

  friend constexpr Vec2D operator+(Vec2D a, Vec2D b) { return {a.x + b.x, a.y + b.y}; }
  friend constexpr Vec2D operator-(Vec2D a, Vec2D b) { return {a.x - b.x, a.y - b.y}; }
  friend constexpr Vec2D operator*(Vec2D a, double s) { return {a.x * s, a.y * s}; }
  friend constexpr Vec2D operator*(double s, Vec2D a) { return {a.x * s, a.y * s}; }
  friend constexpr bool operator==(Vec2D a, Vec2D b) = default;

  [[nodiscard]] constexpr double dot(Vec2D o) const { return x * o.x + y * o.y; }
  [[nodiscard]] constexpr double norm2() const { return x * x + y * y; }
  [[nodiscard]] double norm() const { return std::hypot(x, y); }
  [[nodiscard]] bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(Vec2D a, Vec2D b) { return (a - b).norm(); }

/// Kinematic state of a cognitive user.
struct NodeState {
  NodeId id = 0;
  Vec2D pos;
  Vec2D vel;
  double epoch_remaining = 0.0;
};

/// A stationary licensed transmitter with a protected disc of radius `rho`.
struct PrimaryUser {
  std::uint32_t id = 0;
  Vec2D pos;
  double rho = 0.0;

  [[nodiscard]] bool covers(Vec2D p) const { return distance(p, pos) <= rho; }
};

/// Base class for domain errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pctc
