#pragma once
// Reference implementations used only by tests. Each one takes a different
// route from the library code it checks.

#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "pctc/core.hpp"
#include "pctc/topology.hpp"

namespace oracle {

struct Quad {
  double a, b, c;
};

// Cramer's rule on the 3x3 Vandermonde system.
inline Quad vandermonde(std::array<double, 3> t, std::array<double, 3> y) {
  auto det3 = [](double m[3][3]) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  };
  double base[3][3];
  for (int i = 0; i < 3; ++i) {
    base[i][0] = t[i] * t[i];
    base[i][1] = t[i];
    base[i][2] = 1.0;
  }
  const double d = det3(base);
  double out[3];
  for (int col = 0; col < 3; ++col) {
    double m[3][3];
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) m[i][j] = j == col ? y[i] : base[i][j];
    }
    out[col] = det3(m) / d;
  }
  return {out[0], out[1], out[2]};
}

// Straight-line motion p + v t against a circle of radius r centred at 0.
// Textbook quadratic |v|^2 t^2 + 2 p.v t + |p|^2 - r^2 = 0.
inline double circle_exit(pctc::Vec2D p, pctc::Vec2D v, double r) {
  const double a = v.dot(v);
  if (a == 0.0) return std::numeric_limits<double>::infinity();
  const double b = 2.0 * p.dot(v);
  const double c = p.dot(p) - r * r;
  return (-b + std::sqrt(b * b - 4.0 * a * c)) / (2.0 * a);
}

inline double circle_entry(pctc::Vec2D p, pctc::Vec2D v, double r) {
  const double a = v.dot(v);
  const double b = 2.0 * p.dot(v);
  const double c = p.dot(p) - r * r;
  const double disc = b * b - 4.0 * a * c;
  if (a == 0.0 || disc < 0.0) return std::numeric_limits<double>::infinity();
  const double t = (-b - std::sqrt(disc)) / (2.0 * a);
  return t >= 0.0 ? t : std::numeric_limits<double>::infinity();
}

// Best bottleneck over every simple path; nullopt when disconnected.
inline std::optional<double> best_bottleneck(const pctc::Graph& g, pctc::NodeId s, pctc::NodeId t) {
  std::optional<double> best;
  std::vector<bool> on_path(g.size(), false);
  std::function<void(pctc::NodeId, double)> dfs = [&](pctc::NodeId at, double w) {
    if (at == t) {
      if (!best || w > *best) best = w;
      return;
    }
    on_path[at] = true;
    g.for_each_neighbor(at, [&](pctc::NodeId next, const pctc::WeightedEdge& e) {
      if (!on_path[next]) dfs(next, std::min(w, e.w));
    });
    on_path[at] = false;
  };
  dfs(s, std::numeric_limits<double>::infinity());
  return best;
}

inline long double harmonic(std::size_t n) {
  long double h = 0.0L;
  for (std::size_t i = 1; i <= n; ++i) h += 1.0L / static_cast<long double>(i);
  return h;
}

}  // namespace oracle
