#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qcar/control.hpp"
#include "qcar/errors.hpp"
#include "qcar/metrics.hpp"
#include "qcar/road.hpp"
#include "qcar/simulate.hpp"

using namespace qcar;

namespace {

RoadTrace tune_step_road(double duration = 20.0, double dt = 1e-3) {
  return generate_step_road({0.02, 2.0}, duration, dt);
}

RoadTrace tune_random_road(std::uint64_t seed, double duration, double dt = 1e-3) {
  RandomRoadSpec spec;
  spec.road_class = IsoRoadClass::from_label('D');
  spec.seed = seed;
  spec.dt = dt;
  return generate_random_road(spec, duration);
}

}  // namespace

TEST_CASE("the controller output is the weighted sum of error and integral") {
  CHECK(pi_output({1.0, 0.0}, 2.0, 123.0) == 2.0);
  CHECK(pi_output({0.0, 1904.0}, -5.0, 0.001) == doctest::Approx(1.904).epsilon(1e-12));
  CHECK(pi_output({0.0, 0.0}, 3.0, 4.0) == 0.0);
  CHECK(pi_output({2.0, 3.0}, 0.5, 0.25) == doctest::Approx(1.75).epsilon(1e-15));

  // Linear in (e, z).
  const PIGains g{7.0, 11.0};
  CHECK(pi_output(g, 2.0 * 0.3, 2.0 * (-0.1)) ==
        doctest::Approx(2.0 * pi_output(g, 0.3, -0.1)).epsilon(1e-15));

  CHECK_THROWS_AS(pi_output({std::nan(""), 0.0}, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pi_output(g, std::nan(""), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(pi_output(g, 1.0, std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
}

TEST_CASE("tuning on a road step finds a comfort-improving integral gain") {
  const SuspensionParams p;
  const RoadTrace road = tune_step_road();
  const TuneResult res = tune_gains(p, road, CostWeights{}, TuneConfig{}, SimConfig{1e-3, 20.0});

  CHECK(res.gains.kp == 0.0);
  CHECK(res.gains.ki > 1e2);
  CHECK(res.gains.ki < 1e4);
  CHECK(res.cost < 1.0);
  CHECK(res.index.acc_rms < res.open_loop.acc_rms);

  // The sweep always starts at the open-loop point, which scores exactly one.
  REQUIRE(!res.sweep.empty());
  CHECK(res.sweep.front().ki == 0.0);
  CHECK(res.sweep.front().cost == 1.0);
  CHECK(res.sweep.size() == 61);  // ki = 0 plus the 60 log-spaced candidates

  // The reported winner is the sweep's finite minimum.
  double best = std::numeric_limits<double>::infinity();
  double best_ki = -1.0;
  for (const TuneRow& row : res.sweep) {
    if (std::isfinite(row.cost) && row.cost < best) {
      best = row.cost;
      best_ki = row.ki;
    }
  }
  CHECK(res.cost == best);
  CHECK(res.gains.ki == best_ki);
}

TEST_CASE("a one-point grid evaluates exactly that gain") {
  const SuspensionParams p;
  const RoadTrace road = tune_step_road(10.0);
  TuneConfig cfg;
  cfg.ki_min = 2000.0;
  cfg.ki_max = 2000.0;
  cfg.points = 1;
  const TuneResult res = tune_gains(p, road, CostWeights{}, cfg, SimConfig{1e-3, 10.0});
  CHECK(res.sweep.size() == 2);  // open loop + the single candidate
  CHECK(res.sweep.back().ki == 2000.0);
  CHECK(res.gains.ki == 2000.0);  // it improves on the open loop, so it wins
  CHECK(res.cost < 1.0);
}

TEST_CASE("tuning is deterministic for a fixed road realization") {
  const SuspensionParams p;
  const RoadTrace road = tune_random_road(31, 8.0);
  TuneConfig cfg;
  cfg.points = 12;
  const TuneResult a = tune_gains(p, road, CostWeights{}, cfg, SimConfig{1e-3, 8.0});
  const TuneResult b = tune_gains(p, road, CostWeights{}, cfg, SimConfig{1e-3, 8.0});
  CHECK(a.gains.ki == b.gains.ki);
  CHECK(a.cost == b.cost);
  REQUIRE(a.sweep.size() == b.sweep.size());
  for (std::size_t i = 0; i < a.sweep.size(); ++i) {
    CHECK(a.sweep[i].ki == b.sweep[i].ki);
    CHECK((a.sweep[i].cost == b.sweep[i].cost ||
           (std::isnan(a.sweep[i].cost) && std::isnan(b.sweep[i].cost))));
  }
}

TEST_CASE("tuning on a random road also beats the open loop") {
  const SuspensionParams p;
  const RoadTrace road = tune_random_road(8, 12.0);
  TuneConfig cfg;
  cfg.points = 15;
  const TuneResult res = tune_gains(p, road, CostWeights{}, cfg, SimConfig{1e-3, 12.0});
  CHECK(res.cost < 1.0);
  CHECK(res.index.acc_rms < res.open_loop.acc_rms);
}

TEST_CASE("unstable candidates are skipped; an all-unstable sweep is an error") {
  const SuspensionParams p;
  const RoadTrace road = tune_step_road(6.0);
  TuneConfig cfg;
  cfg.kp = -299.9999;  // feedthrough denominator 1e-4: every candidate blows up
  cfg.points = 4;
  CHECK_THROWS_AS(tune_gains(p, road, CostWeights{}, cfg, SimConfig{1e-3, 6.0}),
                  NumericalError);
}

TEST_CASE("tuning configuration validation") {
  TuneConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.ki_min = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TuneConfig{};
  cfg.ki_max = cfg.ki_min / 2.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TuneConfig{};
  cfg.points = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = TuneConfig{};
  cfg.kp = std::nan("");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}
