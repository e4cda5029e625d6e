#pragma once

namespace qcar {

inline constexpr double kPi = 3.14159265358979323846;

/// Physical constants of the quarter-car plant.
/// Units: masses [kg], stiffnesses [N/m], damping [N·s/m].
struct SuspensionParams {
  double ms = 300.0;    ///< sprung (body) mass
  double mu = 40.0;     ///< unsprung (wheel + axle) mass
  double c1 = 1000.0;   ///< primary damper, body <-> wheel
  double k1 = 15000.0;  ///< primary spring (body <-> wheel for the passive model,
                        ///< body <-> internal node for the twin model)
  double c2 = 1000.0;   ///< secondary damper, internal node <-> wheel
  double k2 = 15000.0;  ///< secondary spring, internal node <-> wheel
  double kt = 20000.0;  ///< tire stiffness, wheel <-> road

  /// Throws std::invalid_argument unless every constant is finite and strictly positive
  /// (c2 especially: the internal-node equation divides by it).
  void validate() const;
};

/// Generalized coordinates of the 2-DOF passive plant.
struct PassiveState {
  double xs = 0.0;  ///< sprung displacement [m]
  double vs = 0.0;  ///< sprung velocity [m/s]
  double xu = 0.0;  ///< unsprung displacement [m]
  double vu = 0.0;  ///< unsprung velocity [m/s]
};

/// Passive coordinates plus the massless internal node sitting between
/// spring k1 and the parallel pair (k2 || c2).
struct TwinState {
  double xs = 0.0;
  double vs = 0.0;
  double xu = 0.0;
  double vu = 0.0;
  double x3 = 0.0;  ///< internal node displacement [m]
};

/// Exogenous inputs to the plant at one instant.
struct PlantInput {
  double xo = 0.0;  ///< road elevation [m]
  double fa = 0.0;  ///< actuator force [N]; positive pushes the body up, the wheel down
};

/// Acceleration-feedback PI controller gains.
struct PIGains {
  double kp = 0.0;  ///< proportional gain [N/(m/s^2)]
  double ki = 0.0;  ///< integral gain [N/(m/s)]
};

}  // namespace qcar
