#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "pctc/config.hpp"
#include "pctc/mobility.hpp"

namespace pctc {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Squared distance as a quadratic in time, d^2 = alpha T^2 + beta T + gamma,
/// with T measured from the first sample.
struct QuadFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  /// Time of the last sample, T = t2 - t0.
  double t2_offset = 0.0;

  [[nodiscard]] double operator()(double t) const { return (alpha * t + beta) * t + gamma; }
};

/// Exact quadratic through (t_i, d_i^2). Negative alpha within rounding of
/// the sample magnitudes is clamped to 0.
/// Throws Error on non-increasing times or negative distances.
QuadFit fit_quadratic(std::span<const DistanceSample, 3> samples);

enum class CrossingMode {
  /// Currently inside `radius`; time until the distance grows past it.
  exit,
  /// Currently outside `radius`; time until the distance first drops to it.
  entry,
};

/// Time from the last sample until the fitted distance crosses `radius`,
/// or kInfinity when it never does. Never negative.
/// Throws Error when the fit at t2 is on the wrong side of `radius` for `mode`.
double solve_crossing(const QuadFit& fit, double radius, CrossingMode mode);

struct PredictionParams {
  double lambda = 1.0 / 60.0;
  double tau = 0.0;
  double zeta = 0.5;
  double tx_range = 300.0;
  std::vector<double> rho;

  static PredictionParams from(const ScenarioConfig& config);
};

/// Probability that a predicted horizon actually lasts:
/// exp(-lambda t) exp(-lambda tau) + zeta (1 - exp(-lambda t)).
double availability_probability(double horizon, const PredictionParams& params);

/// Predicted horizon of one link end against one primary user.
struct PuHorizon {
  std::size_t endpoint = 0;
  std::size_t pu = 0;
  double t_hat = kInfinity;
  double l_that = 0.0;
};

struct LinkPrediction {
  double t_p = kInfinity;
  double l_tp = 0.0;
  std::vector<PuHorizon> pu_horizons;
  double t_a = kInfinity;

  /// Raw horizon min(t_p, t_hat...) before probability weighting.
  [[nodiscard]] double horizon() const;
};

/// Fits for one CU-CU link: the pair itself and each end against each PU.
struct LinkFits {
  QuadFit pair;
  std::array<std::vector<QuadFit>, 2> endpoint_pu;
  /// Whether each end currently lies inside each PU's disc.
  std::array<std::vector<bool>, 2> inside;
};

/// Combined availability: t_a = min(t_p L(t_p), t_hat L(t_hat) over ends and
/// PUs). An end inside a PU disc forces t_a = 0. inf * p is inf for p > 0
/// and 0 for p = 0.
LinkPrediction predict_link(const LinkFits& fits, const PredictionParams& params);

/// Builds the fits for link (u, v) from three samples ending at `t2` and
/// predicts its availability.
LinkPrediction predict_link(const Trajectory& trajectory, NodeId u, NodeId v, double t2, double spacing,
                            const std::vector<PrimaryUser>& primary_users, const PredictionParams& params,
                            MeasurementNoise noise = {});

/// One prediction checked against what happened afterwards.
struct ZetaObservation {
  double horizon = 0.0;
  /// Real remaining lifetime after the prediction instant.
  double lifetime = 0.0;
  /// Whether either end changed velocity within the horizon.
  bool velocity_changed = false;
};

struct ZetaEstimate {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t samples = 0;
};

inline constexpr std::size_t kMinZetaSamples = 100;

/// Fraction of velocity-changed links that still lived at their predicted
/// horizon, with a 95% normal-approximation interval clipped to [0, 1].
/// Throws Error when fewer than kMinZetaSamples observations qualify.
ZetaEstimate calibrate_zeta(std::span<const ZetaObservation> observations);

}  // namespace pctc
