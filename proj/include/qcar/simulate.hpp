#pragma once

#include <vector>

#include "qcar/road.hpp"
#include "qcar/types.hpp"

namespace qcar {

/// Fixed-step integration settings. The road trace must be sampled on the same grid.
struct SimConfig {
  double dt = 1e-3;      ///< integration step [s]
  double duration = 20;  ///< horizon [s]

  void validate() const;  ///< throws std::invalid_argument
};

/// Trajectories recorded at every step start (sample i is the state at t = i*dt).
/// Columns that do not apply to a model (x3 for passive, fa for uncontrolled runs) are
/// zero-filled so every output has the same shape.
struct SimOutput {
  std::vector<double> t;
  std::vector<double> xs, vs, xu, vu, x3;
  std::vector<double> acc_s;       ///< body acceleration [m/s^2], consistent with the model
                                   ///< derivative re-evaluated at the stored state
  std::vector<double> tire_force;  ///< kt*(xo - xu) [N]
  std::vector<double> fa;          ///< actuator force [N]
  std::vector<double> q;           ///< road elevation used at each step [m]
};

/// Classical 4th-order fixed-step integration from rest (all-zero initial state).
/// The road sample of the current step is held constant across all four stages
/// (zero-order hold), matching the road generator's noise discretization.
/// Throws std::invalid_argument on grid mismatch, NumericalError if the state diverges.
SimOutput simulate_passive(const SuspensionParams& p, const RoadTrace& road, const SimConfig& cfg);

SimOutput simulate_twin(const SuspensionParams& p, const RoadTrace& road, const SimConfig& cfg);

/// Closed loop: twin plant + PI feedback on body acceleration with set point zero,
///   e = -xs'',  z' = e,  fa = kp*e + ki*z.
/// The proportional path feeds the acceleration through algebraically; each stage solves
///   xs'' = (k1(x3-xs) + c1(vu-vs) + ki*z) / (ms + kp)
/// in closed form, so kp = -ms is rejected (singular loop). With gains (0, 0) the result
/// matches simulate_twin exactly.
SimOutput simulate_active(const SuspensionParams& p, const RoadTrace& road, const PIGains& gains,
                          const SimConfig& cfg);

}  // namespace qcar
