#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "pctc/harness.hpp"
#include "pctc/prediction.hpp"

using namespace pctc;

namespace {

QuadFit fit_of(double d0, double d1, double d2, double t0 = 0.0, double ts = 1.0) {
  const std::array<DistanceSample, 3> s{{{t0, d0}, {t0 + ts, d1}, {t0 + 2 * ts, d2}}};
  return fit_quadratic(s);
}

PredictionParams params_with(double lambda, double zeta, double range, std::vector<double> rho = {}) {
  PredictionParams p;
  p.lambda = lambda;
  p.tau = 0.0;
  p.zeta = zeta;
  p.tx_range = range;
  p.rho = std::move(rho);
  return p;
}

}  // namespace

TEST_CASE("quadratic fit examples") {
  SUBCASE("squared distances 4, 7, 12") {
    const QuadFit f = fit_of(2.0, std::sqrt(7.0), std::sqrt(12.0));
    const auto o = oracle::vandermonde({0, 1, 2}, {4, 7, 12});
    CHECK(o.a == doctest::Approx(1.0));
    CHECK(o.b == doctest::Approx(2.0));
    CHECK(o.c == doctest::Approx(4.0));
    CHECK(f.alpha == doctest::Approx(o.a).epsilon(1e-12));
    CHECK(f.beta == doctest::Approx(o.b).epsilon(1e-12));
    CHECK(f.gamma == doctest::Approx(o.c).epsilon(1e-12));
    CHECK(f.t2_offset == 2.0);
  }
  SUBCASE("static pair") {
    const QuadFit f = fit_of(100, 100, 100);
    CHECK(f.alpha == 0.0);
    CHECK(f.beta == 0.0);
    CHECK(f.gamma == 10000.0);
  }
  SUBCASE("head-on closing") {
    const QuadFit f = fit_of(120, 110, 100);
    CHECK(f.alpha == doctest::Approx(100.0));
    CHECK(f.beta == doctest::Approx(-2400.0));
    CHECK(f.gamma == doctest::Approx(14400.0));
  }
  SUBCASE("timebase starts at the first sample") {
    const QuadFit f = fit_of(120, 110, 100, 37.5, 1.0);
    CHECK(f.gamma == doctest::Approx(14400.0));
    CHECK(f.t2_offset == 2.0);
  }
}

TEST_CASE("quadratic fit rejects bad samples") {
  CHECK_THROWS_AS(fit_of(1, 2, 3, 0.0, 0.0), Error);
  CHECK_THROWS_AS(fit_of(-1, 2, 3), Error);
  CHECK_THROWS_AS(fit_of(1, std::nan(""), 3), Error);
  const std::array<DistanceSample, 3> backwards{{{2, 1}, {1, 1}, {0, 1}}};
  CHECK_THROWS_AS(fit_quadratic(backwards), Error);
}

TEST_CASE("quadratic fit reproduces its samples") {
  // Valid triples come from constant relative velocity.
  RngStream s = derive_stream(3, StreamKind::test);
  for (int i = 0; i < 2000; ++i) {
    const double ts = s.uniform(0.05, 5.0);
    const double t0 = s.uniform(0.0, 1000.0);
    const Vec2D p{s.uniform(-300, 300), s.uniform(-300, 300)};
    const Vec2D v{s.uniform(-30, 30), s.uniform(-30, 30)};
    std::array<DistanceSample, 3> samples;
    for (int k = 0; k < 3; ++k) samples[k] = {t0 + k * ts, (p + v * (k * ts)).norm()};
    const QuadFit f = fit_quadratic(samples);
    CHECK(f.alpha >= 0.0);
    for (int k = 0; k < 3; ++k) {
      const double target = samples[k].d * samples[k].d;
      CHECK(std::abs(f(k * ts) - target) <= 1e-9 * std::max(1.0, target));
    }
  }
}

TEST_CASE("crossing times") {
  SUBCASE("exit from the head-on pair") {
    CHECK(solve_crossing(fit_of(120, 110, 100), 300.0, CrossingMode::exit) == doctest::Approx(40.0));
  }
  SUBCASE("entry when approaching a PU") {
    // 200 m away closing at 5 m/s: reaches 100 m at T = 20, 18 s after the last sample.
    CHECK(solve_crossing(fit_of(200, 195, 190), 100.0, CrossingMode::entry) == doctest::Approx(18.0));
  }
  SUBCASE("entry when moving away") {
    CHECK(solve_crossing(fit_of(200, 205, 210), 100.0, CrossingMode::entry) == kInfinity);
  }
  SUBCASE("passing by outside the disc") {
    // Closest approach 150 m never reaches rho = 100.
    const auto f = [](double t) { return std::hypot(150.0, 40.0 - 4.0 * t); };
    CHECK(solve_crossing(fit_of(f(0), f(1), f(2)), 100.0, CrossingMode::entry) == kInfinity);
  }
  SUBCASE("constant distance") {
    CHECK(solve_crossing(fit_of(100, 100, 100), 300.0, CrossingMode::exit) == kInfinity);
    CHECK(solve_crossing(fit_of(200, 200, 200), 100.0, CrossingMode::entry) == kInfinity);
  }
  SUBCASE("wrong side of the radius") {
    CHECK_THROWS_AS(solve_crossing(fit_of(320, 310, 305), 300.0, CrossingMode::exit), Error);
    CHECK_THROWS_AS(solve_crossing(fit_of(120, 110, 90), 100.0, CrossingMode::entry), Error);
  }
  SUBCASE("exactly on the boundary") {
    CHECK(solve_crossing(fit_of(280, 290, 300), 300.0, CrossingMode::exit) == doctest::Approx(0.0));
  }
}

TEST_CASE("crossing times match straight-line kinematics") {
  RngStream s = derive_stream(4, StreamKind::test);
  int checked = 0;
  while (checked < 500) {
    const Vec2D p{s.uniform(-200, 200), s.uniform(-200, 200)};
    const Vec2D v{s.uniform(-20, 20), s.uniform(-20, 20)};
    const double ts = 1.0;
    auto d = [&](double t) { return (p + v * t).norm(); };
    const double r_exit = 300.0;
    if (d(2 * ts) > r_exit) continue;
    const double expect = oracle::circle_exit(p, v, r_exit) - 2 * ts;
    const double got = solve_crossing(fit_of(d(0), d(ts), d(2 * ts)), r_exit, CrossingMode::exit);
    CHECK(std::abs(got - expect) <= 1e-6);

    const double rho = 60.0;
    if (d(2 * ts) > rho && d(0) > rho && d(ts) > rho) {
      const double enter = oracle::circle_entry(p + v * (2 * ts), v, rho);
      const double got_entry = solve_crossing(fit_of(d(0), d(ts), d(2 * ts)), rho, CrossingMode::entry);
      if (std::isinf(enter)) {
        CHECK(std::isinf(got_entry));
      } else {
        CHECK(std::abs(got_entry - enter) <= 1e-6);
      }
    }
    ++checked;
  }
}

TEST_CASE("availability probability") {
  const PredictionParams base = params_with(1.0 / 60.0, 0.5, 300.0);
  CHECK(std::abs(availability_probability(60.0, base) - 0.68394) < 1e-5);
  CHECK(availability_probability(0.0, base) == 1.0);
  CHECK(availability_probability(kInfinity, base) == 0.5);
  const PredictionParams still = params_with(1e-12, 0.5, 300.0);
  for (double t : {1.0, 100.0, 1e4}) CHECK(std::abs(availability_probability(t, still) - 1.0) < 1e-6);
  PredictionParams delayed = base;
  delayed.tau = 30.0;
  CHECK(availability_probability(0.0, delayed) == doctest::Approx(std::exp(-0.5)));
}

TEST_CASE("availability probability range and monotonicity") {
  RngStream s = derive_stream(5, StreamKind::test);
  for (int i = 0; i < 500; ++i) {
    PredictionParams p = params_with(s.uniform(1e-4, 1.0), s.uniform(0, 1), 300.0);
    p.tau = s.uniform(0, 50);
    const double top = std::max(std::exp(-p.lambda * p.tau), p.zeta);
    const double bottom = std::min(std::exp(-p.lambda * p.tau), p.zeta);
    double prev = availability_probability(0.0, p);
    for (double t = 0.0; t < 500.0; t += 7.3) {
      const double l = availability_probability(t, p);
      CHECK(l >= bottom - 1e-15);
      CHECK(l <= top + 1e-15);
      if (std::exp(-p.lambda * p.tau) >= p.zeta) CHECK(l <= prev + 1e-15);
      prev = l;
    }
  }
}

TEST_CASE("link prediction combines horizons") {
  SUBCASE("no PUs: t_p = 50 with L = 0.8") {
    // Head-on pair exits a 400 m range 50 s after the last sample.
    PredictionParams p = params_with(-std::log(0.6) / 50.0, 0.5, 400.0);
    LinkFits fits;
    fits.pair = fit_of(120, 110, 100);
    const LinkPrediction pred = predict_link(fits, p);
    CHECK(pred.t_p == doctest::Approx(50.0));
    CHECK(pred.l_tp == doctest::Approx(0.8));
    CHECK(pred.t_a == doctest::Approx(40.0));
    CHECK(pred.pu_horizons.empty());
  }
  SUBCASE("minimum over components 50, 60 and 45") {
    PredictionParams p = params_with(1e-13, 0.5, 400.0, {100.0, 100.0});
    LinkFits fits;
    fits.pair = fit_of(120, 110, 100);
    fits.endpoint_pu[0] = {fit_of(224, 222, 220), fit_of(300, 310, 320)};
    fits.endpoint_pu[1] = {fit_of(300, 310, 320), fit_of(194, 192, 190)};
    fits.inside[0] = {false, false};
    fits.inside[1] = {false, false};
    const LinkPrediction pred = predict_link(fits, p);
    REQUIRE(pred.pu_horizons.size() == 4);
    CHECK(pred.pu_horizons[0].t_hat == doctest::Approx(60.0));
    CHECK(pred.pu_horizons[1].t_hat == kInfinity);
    CHECK(pred.pu_horizons[3].t_hat == doctest::Approx(45.0));
    CHECK(pred.t_a == doctest::Approx(45.0));
    CHECK(pred.horizon() == doctest::Approx(45.0));
  }
  SUBCASE("end inside a PU disc") {
    PredictionParams p = params_with(1.0 / 60.0, 0.5, 400.0, {100.0});
    LinkFits fits;
    fits.pair = fit_of(120, 110, 100);
    fits.endpoint_pu[0] = {fit_of(50, 50, 50)};
    fits.endpoint_pu[1] = {fit_of(300, 300, 300)};
    fits.inside[0] = {true};
    fits.inside[1] = {false};
    CHECK(predict_link(fits, p).t_a == 0.0);
  }
  SUBCASE("everything infinite") {
    PredictionParams p = params_with(1.0 / 60.0, 0.5, 300.0);
    LinkFits fits;
    fits.pair = fit_of(100, 100, 100);
    CHECK(predict_link(fits, p).t_a == kInfinity);
    p.zeta = 0.0;
    // inf * 0 counts as 0.
    CHECK(predict_link(fits, p).t_a == 0.0);
  }
  SUBCASE("mismatched fit counts") {
    PredictionParams p = params_with(1.0 / 60.0, 0.5, 300.0, {100.0});
    LinkFits fits;
    fits.pair = fit_of(100, 100, 100);
    CHECK_THROWS_AS(predict_link(fits, p), Error);
  }
}

TEST_CASE("t_a never exceeds any component") {
  ScenarioConfig c;
  c.sim_duration = 200.0;
  const Trajectory tr = simulate(c, 21);
  const GroundTruth truth(tr, c.tx_range, c.primary_users);
  const PredictionParams p = PredictionParams::from(c);
  const std::size_t frame = *tr.frame_at(100.0);
  int seen = 0;
  for (NodeId u = 0; u < c.n_nodes; ++u) {
    for (NodeId v = u + 1; v < c.n_nodes; ++v) {
      if (!truth.alive(u, v, frame)) continue;
      const LinkPrediction pred = predict_link(tr, u, v, 100.0, 1.0, c.primary_users, p);
      CHECK(pred.t_a <= pred.t_p * pred.l_tp);
      for (const auto& h : pred.pu_horizons) {
        CHECK(pred.t_a <= h.t_hat * h.l_that);
        CHECK((h.l_that >= 0.0 && h.l_that <= 1.0));
      }
      ++seen;
    }
  }
  CHECK(seen > 50);
}

TEST_CASE("predicted exit equals the real lifetime when nothing changes velocity") {
  ScenarioConfig c;
  c.primary_users.clear();
  c.sim_duration = 600.0;
  const TrialWorld world = run_trial(c, 0);
  int exact = 0;
  for (const auto& s : prediction_samples(world, 0)) {
    if (!s.t_r) continue;
    const double from = s.t - 2.0 * c.sample_spacing - 1e-9;
    const double to = s.t + *s.t_r;
    const Trajectory& tr = *world.trajectory;
    if (tr.velocity_changed(s.u, from, to) || tr.velocity_changed(s.v, from, to)) continue;
    // Ground truth resolves deaths to the next frame.
    CHECK(*s.t_r - s.t_p >= -1e-6);
    CHECK(*s.t_r - s.t_p <= c.dt + 1e-6);
    ++exact;
  }
  CHECK(exact > 50);
}

TEST_CASE("zeta calibration") {
  auto obs = [](std::size_t n, std::size_t survive) {
    std::vector<ZetaObservation> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back({10.0, i < survive ? 12.0 : 3.0, true});
    return out;
  };
  SUBCASE("all survive") {
    const auto e = calibrate_zeta(obs(150, 150));
    CHECK(e.estimate == 1.0);
    CHECK(e.upper == 1.0);
    CHECK(e.samples == 150);
  }
  SUBCASE("none survive") {
    const auto e = calibrate_zeta(obs(150, 0));
    CHECK(e.estimate == 0.0);
    CHECK(e.lower == 0.0);
  }
  SUBCASE("half survive") {
    const auto e = calibrate_zeta(obs(200, 100));
    CHECK(e.estimate == 0.5);
    const double hw = 1.96 * std::sqrt(0.25 / 200.0);
    CHECK(e.lower == doctest::Approx(0.5 - hw));
    CHECK(e.upper == doctest::Approx(0.5 + hw));
  }
  SUBCASE("unchanged links are ignored") {
    auto o = obs(150, 75);
    for (int i = 0; i < 500; ++i) o.push_back({10.0, 100.0, false});
    CHECK(calibrate_zeta(o).estimate == 0.5);
  }
  SUBCASE("too little data") {
    try {
      (void)calibrate_zeta(obs(99, 10));
      FAIL("expected Error");
    } catch (const Error& e) {
      CHECK(std::string(e.what()).find("99") != std::string::npos);
    }
  }
}
