#include "qcar/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "qcar/errors.hpp"

namespace qcar {

void TuneConfig::validate() const {
  if (!(std::isfinite(ki_min) && ki_min > 0.0)) {
    throw std::invalid_argument("TuneConfig.ki_min must be finite and > 0");
  }
  if (!(std::isfinite(ki_max) && ki_max >= ki_min)) {
    throw std::invalid_argument("TuneConfig.ki_max must be finite and >= ki_min");
  }
  if (points < 1) throw std::invalid_argument("TuneConfig.points must be >= 1");
  if (!std::isfinite(kp)) throw std::invalid_argument("TuneConfig.kp must be finite");
}

double pi_output(const PIGains& g, double e, double z) {
  if (!(std::isfinite(g.kp) && std::isfinite(g.ki) && std::isfinite(e) && std::isfinite(z))) {
    throw std::invalid_argument("pi_output requires finite gains, error, and integral");
  }
  return g.kp * e + g.ki * z;
}

TuneResult tune_gains(const SuspensionParams& p, const RoadTrace& road, const CostWeights& weights,
                      const TuneConfig& cfg, const SimConfig& sim, double settle) {
  cfg.validate();
  weights.validate();
  if (settle < 0.0) settle = default_settle(road);

  // Open-loop baseline: gains (0, 0) reduce the closed loop to the plain twin plant.
  const SimOutput open_run = simulate_twin(p, road, sim);
  const PerformanceIndex open_loop = performance_index(open_run, p, road, settle);

  // Candidate grid: always include ki = 0, then log-spaced points over [ki_min, ki_max].
  std::vector<double> grid;
  grid.push_back(0.0);
  if (cfg.points == 1) {
    grid.push_back(cfg.ki_min);
  } else {
    const double log_lo = std::log10(cfg.ki_min);
    const double log_hi = std::log10(cfg.ki_max);
    for (int i = 0; i < cfg.points; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(cfg.points - 1);
      grid.push_back(std::pow(10.0, log_lo + frac * (log_hi - log_lo)));
    }
  }
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  TuneResult result;
  result.open_loop = open_loop;
  result.sweep.reserve(grid.size());
  bool have_winner = false;
  for (double ki : grid) {
    TuneRow row;
    row.ki = ki;
    try {
      const PIGains gains{cfg.kp, ki};
      const SimOutput run = simulate_active(p, road, gains, sim);
      row.index = performance_index(run, p, road, settle);
      row.cost = weighted_cost(row.index, open_loop, weights);
    } catch (const NumericalError&) {
      row.cost = std::numeric_limits<double>::quiet_NaN();
    }
    if (std::isfinite(row.cost) && (!have_winner || row.cost < result.cost)) {
      // Strict < keeps the first (smallest) ki on ties.
      result.gains = {cfg.kp, ki};
      result.cost = row.cost;
      result.index = row.index;
      have_winner = true;
    }
    result.sweep.push_back(row);
  }
  if (!have_winner) {
    throw NumericalError("every tuning candidate went unstable (non-finite cost)");
  }
  return result;
}

}  // namespace qcar
