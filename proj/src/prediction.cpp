#include "pctc/prediction.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pctc {

namespace {

constexpr double kRelTolerance = 1e-9;

/// t * p with inf * p = inf for p > 0 and inf * 0 = 0.
double weighted(double t, double p) {
  if (std::isinf(t)) return p > 0.0 ? kInfinity : 0.0;
  return t * p;
}

struct Roots {
  double lo;
  double hi;
};

/// Real roots of a t^2 + b t + c (a != 0) given a nonnegative discriminant.
Roots quadratic_roots(double a, double b, double c, double disc) {
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0, 0.0};
  double r1 = q / a;
  double r2 = c / q;
  if (r1 > r2) std::swap(r1, r2);
  return {r1, r2};
}

std::string describe(CrossingMode mode, double radius) {
  return std::string(mode == CrossingMode::exit ? "exit" : "entry") + " crossing at radius " + std::to_string(radius);
}

}  // namespace

QuadFit fit_quadratic(std::span<const DistanceSample, 3> s) {
  for (const auto& sample : s) {
    if (!std::isfinite(sample.d) || sample.d < 0.0) throw Error("distance samples must be finite and >= 0");
    if (!std::isfinite(sample.t)) throw Error("sample times must be finite");
  }
  if (!(s[0].t < s[1].t && s[1].t < s[2].t)) throw Error("sample times must be distinct and increasing");

  const double t1 = s[1].t - s[0].t;
  const double t2 = s[2].t - s[0].t;
  const double y0 = s[0].d * s[0].d;
  const double y1 = s[1].d * s[1].d;
  const double y2 = s[2].d * s[2].d;

  // Newton divided differences.
  const double f01 = (y1 - y0) / t1;
  const double f12 = (y2 - y1) / (t2 - t1);
  QuadFit fit;
  fit.alpha = (f12 - f01) / t2;
  fit.beta = f01 - fit.alpha * t1;
  fit.gamma = y0;
  fit.t2_offset = t2;

  // alpha is a squared relative speed; tiny negatives are rounding.
  const double scale = std::max({1.0, y0, y1, y2}) / (t2 * t2);
  if (fit.alpha < 0.0 && fit.alpha >= -kRelTolerance * scale) {
    fit.alpha = 0.0;
    fit.beta = f01;
  }
  return fit;
}

double solve_crossing(const QuadFit& fit, double radius, CrossingMode mode) {
  const double r2 = radius * radius;
  const double c = fit.gamma - r2;
  const double now = fit(fit.t2_offset) - r2;
  const double tol = kRelTolerance * std::max({1.0, r2, std::abs(fit.gamma), std::abs(now + r2)});
  const double t2 = fit.t2_offset;

  if (mode == CrossingMode::exit && now > tol) {
    throw Error(describe(mode, radius) + ": distance at the last sample is already outside the radius");
  }
  if (mode == CrossingMode::entry && now < -tol) {
    throw Error(describe(mode, radius) + ": distance at the last sample is already inside the radius");
  }

  const double a = fit.alpha;
  const double b = fit.beta;
  if (a == 0.0) {
    if (b == 0.0) return kInfinity;
    const double root = -c / b;
    if (mode == CrossingMode::exit) return b > 0.0 ? std::max(root - t2, 0.0) : kInfinity;
    return b < 0.0 ? std::max(root - t2, 0.0) : kInfinity;
  }

  const double disc = b * b - 4.0 * a * c;
  if (mode == CrossingMode::exit) {
    if (a > 0.0) {
      const Roots r = quadratic_roots(a, b, c, std::max(disc, 0.0));
      return std::max(r.hi - t2, 0.0);
    }
    if (disc < 0.0) return kInfinity;
    const Roots r = quadratic_roots(a, b, c, disc);
    if (r.lo >= t2) return r.lo - t2;
    if (r.hi >= t2) return r.hi - t2;
    return kInfinity;
  }

  // Entry.
  if (disc < 0.0) return a > 0.0 ? kInfinity : 0.0;
  const Roots r = quadratic_roots(a, b, c, disc);
  if (r.lo >= t2) return r.lo - t2;
  if (a > 0.0) return r.hi >= t2 ? 0.0 : kInfinity;
  return r.hi >= t2 ? r.hi - t2 : 0.0;
}

PredictionParams PredictionParams::from(const ScenarioConfig& config) {
  PredictionParams params{config.lambda, config.tau, config.zeta, config.tx_range, {}};
  for (const auto& pu : config.primary_users) params.rho.push_back(pu.rho);
  return params;
}

double availability_probability(double horizon, const PredictionParams& params) {
  const double decay = std::exp(-params.lambda * horizon);
  const double value = decay * std::exp(-params.lambda * params.tau) + params.zeta * (1.0 - decay);
  return std::clamp(value, 0.0, 1.0);
}

double LinkPrediction::horizon() const {
  double h = t_p;
  for (const auto& entry : pu_horizons) h = std::min(h, entry.t_hat);
  return h;
}

namespace {

LinkPrediction combine(double t_p, const LinkFits& fits, const PredictionParams& params) {
  LinkPrediction out;
  out.t_p = t_p;
  out.l_tp = availability_probability(out.t_p, params);
  out.t_a = weighted(out.t_p, out.l_tp);
  for (std::size_t end = 0; end < 2; ++end) {
    for (std::size_t j = 0; j < params.rho.size(); ++j) {
      PuHorizon h{end, j, 0.0, 0.0};
      if (!fits.inside[end][j]) h.t_hat = solve_crossing(fits.endpoint_pu[end][j], params.rho[j], CrossingMode::entry);
      h.l_that = availability_probability(h.t_hat, params);
      out.t_a = std::min(out.t_a, weighted(h.t_hat, h.l_that));
      out.pu_horizons.push_back(h);
    }
  }
  return out;
}

}  // namespace

LinkPrediction predict_link(const LinkFits& fits, const PredictionParams& params) {
  if (fits.endpoint_pu[0].size() != params.rho.size() || fits.endpoint_pu[1].size() != params.rho.size() ||
      fits.inside[0].size() != params.rho.size() || fits.inside[1].size() != params.rho.size()) {
    throw Error("link fits must carry one entry per primary user for each end");
  }
  return combine(solve_crossing(fits.pair, params.tx_range, CrossingMode::exit), fits, params);
}

LinkPrediction predict_link(const Trajectory& trajectory, NodeId u, NodeId v, double t2, double spacing,
                            const std::vector<PrimaryUser>& primary_users, const PredictionParams& params,
                            MeasurementNoise noise) {
  const std::array<double, 3> times{t2 - 2.0 * spacing, t2 - spacing, t2};
  const auto pair_samples = sample_distances(trajectory, u, v, times, noise);
  LinkFits fits;
  fits.pair = fit_quadratic(pair_samples);
  const std::array<NodeId, 2> ends{u, v};
  for (std::size_t end = 0; end < 2; ++end) {
    const Vec2D now = trajectory.position_at(ends[end], t2);
    for (const auto& pu : primary_users) {
      const auto samples = sample_distances(trajectory, ends[end], pu, times, noise);
      const QuadFit fit = fit_quadratic(samples);
      // With measurement noise the fit may disagree with the CR module;
      // either one reporting "inside" makes the end unusable.
      fits.inside[end].push_back(pu.covers(now) || fit(fit.t2_offset) <= pu.rho * pu.rho);
      fits.endpoint_pu[end].push_back(fit);
    }
  }
  // Noisy samples can put a live pair past the range edge: zero exit horizon.
  const double r2 = params.tx_range * params.tx_range;
  const double t_p = fits.pair(fits.pair.t2_offset) > r2 ? 0.0 : solve_crossing(fits.pair, params.tx_range, CrossingMode::exit);
  return combine(t_p, fits, params);
}

ZetaEstimate calibrate_zeta(std::span<const ZetaObservation> observations) {
  std::size_t n = 0;
  std::size_t survived = 0;
  for (const auto& obs : observations) {
    if (!obs.velocity_changed) continue;
    ++n;
    if (obs.lifetime >= obs.horizon) ++survived;
  }
  if (n < kMinZetaSamples) {
    throw Error("insufficient data for zeta calibration: " + std::to_string(n) +
                " qualifying observations, need " + std::to_string(kMinZetaSamples));
  }
  const double p = static_cast<double>(survived) / static_cast<double>(n);
  const double half = 1.959963984540054 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
  return {p, std::max(0.0, p - half), std::min(1.0, p + half), n};
}

}  // namespace pctc
