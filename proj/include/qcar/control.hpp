#pragma once

#include <vector>

#include "qcar/metrics.hpp"
#include "qcar/road.hpp"
#include "qcar/simulate.hpp"
#include "qcar/types.hpp"

namespace qcar {

/// Search settings for the integral-gain sweep. kp stays fixed (integral-only control by
/// default: proportional action adds virtual sprung mass rather than damping, and tuning
/// consistently drives it to zero).
struct TuneConfig {
  double ki_min = 1.0;
  double ki_max = 1e5;
  int points = 60;   ///< logarithmically spaced candidates between ki_min and ki_max
  double kp = 0.0;   ///< fixed proportional gain for every candidate

  void validate() const;  ///< 0 < ki_min <= ki_max, points >= 1, kp finite
};

/// One evaluated candidate: cost is NaN when the closed loop went non-finite.
struct TuneRow {
  double ki = 0.0;
  double cost = 0.0;
  PerformanceIndex index;
};

struct TuneResult {
  PIGains gains;               ///< winning gains (kp fixed from config)
  double cost = 1.0;           ///< winner's weighted cost vs the open-loop baseline
  PerformanceIndex index;      ///< winner's criteria
  PerformanceIndex open_loop;  ///< criteria of the gains-(0,0) baseline run
  std::vector<TuneRow> sweep;  ///< every evaluated candidate, ascending ki
};

/// PI control law on the acceleration error: force = kp*e + ki*z where z = integral of e.
/// Rejects non-finite inputs.
double pi_output(const PIGains& g, double e, double z);

/// Deterministic grid search over ki (kp pinned per config) minimizing the weighted cost
/// of the closed-loop run against the open-loop (gains 0,0) baseline on the same road.
/// ki = 0 is always included as a candidate, so the winner never scores worse than the
/// open loop when kp = 0. Ties break toward smaller ki. Unstable candidates are recorded
/// with NaN cost and skipped; if every candidate is unstable, throws NumericalError.
/// settle < 0 selects default_settle(road).
TuneResult tune_gains(const SuspensionParams& p, const RoadTrace& road, const CostWeights& weights,
                      const TuneConfig& cfg, const SimConfig& sim, double settle = -1.0);

}  // namespace qcar
