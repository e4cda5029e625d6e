#include "qcar/simulate.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "qcar/errors.hpp"
#include "qcar/model.hpp"

namespace qcar {

namespace {

void check_grid(const SuspensionParams& p, const RoadTrace& road, const SimConfig& cfg,
                std::size_t& steps_out) {
  cfg.validate();
  p.validate();
  if (road.dt <= 0.0 || road.q.size() != road.t.size() || road.q.empty()) {
    throw std::invalid_argument("malformed road trace");
  }
  if (road.dt != cfg.dt) {
    throw std::invalid_argument("road sample interval differs from the integration step");
  }
  const auto steps = static_cast<std::size_t>(std::llround(cfg.duration / cfg.dt));
  if (steps == 0) {
    throw std::invalid_argument("duration must cover at least one step");
  }
  if (steps > road.q.size()) {
    throw std::invalid_argument("road trace is shorter than the simulation horizon");
  }
  for (double q : road.q) {
    if (!std::isfinite(q)) throw std::invalid_argument("road trace contains non-finite samples");
  }
  steps_out = steps;
}

/// One classical 4th-order step; the road sample is held across all four stages.
/// Returns the stage-1 derivative (the exact derivative at the stored sample), which the
/// callers record as the output consistent with the model at the step start.
template <std::size_t N, typename Deriv>
std::array<double, N> rk4_step(std::array<double, N>& y, double dt, double q, const Deriv& f) {
  const std::array<double, N> r1 = f(y, q);
  std::array<double, N> stage;
  for (std::size_t j = 0; j < N; ++j) stage[j] = y[j] + 0.5 * dt * r1[j];
  const std::array<double, N> r2 = f(stage, q);
  for (std::size_t j = 0; j < N; ++j) stage[j] = y[j] + 0.5 * dt * r2[j];
  const std::array<double, N> r3 = f(stage, q);
  for (std::size_t j = 0; j < N; ++j) stage[j] = y[j] + dt * r3[j];
  const std::array<double, N> r4 = f(stage, q);
  for (std::size_t j = 0; j < N; ++j) {
    y[j] += dt / 6.0 * (r1[j] + 2.0 * r2[j] + 2.0 * r3[j] + r4[j]);
  }
  return r1;
}

template <std::size_t N>
void check_state(const std::array<double, N>& y, double t) {
  for (double v : y) {
    if (!std::isfinite(v)) {
      char msg[96];
      std::snprintf(msg, sizeof(msg), "simulation diverged (non-finite state at t=%.6g s)", t);
      throw NumericalError(msg);
    }
  }
}

void resize_all(SimOutput& out, std::size_t n) {
  for (auto* col : {&out.t, &out.xs, &out.vs, &out.xu, &out.vu, &out.x3, &out.acc_s,
                    &out.tire_force, &out.fa, &out.q}) {
    col->assign(n, 0.0);
  }
}

/// Inputs are validated before stepping starts, so an invalid-argument error raised
/// mid-integration can only mean a stage state overflowed: report it as divergence.
template <typename Loop>
void run_steps(Loop&& loop) {
  try {
    loop();
  } catch (const std::invalid_argument& e) {
    throw NumericalError(std::string("simulation diverged: ") + e.what());
  }
}

}  // namespace

void SimConfig::validate() const {
  if (!(std::isfinite(dt) && dt > 0.0)) {
    throw std::invalid_argument("SimConfig.dt must be finite and > 0");
  }
  if (!(std::isfinite(duration) && duration >= dt)) {
    throw std::invalid_argument("SimConfig.duration must be finite and >= dt");
  }
}

SimOutput simulate_passive(const SuspensionParams& p, const RoadTrace& road, const SimConfig& cfg) {
  std::size_t n = 0;
  check_grid(p, road, cfg, n);

  SimOutput out;
  resize_all(out, n);
  std::array<double, 4> y{};  // xs, vs, xu, vu
  const auto f = [&p](const std::array<double, 4>& s, double q) -> std::array<double, 4> {
    const PassiveRates r = passive_derivative({s[0], s[1], s[2], s[3]}, p, q);
    return {r.dxs, r.dvs, r.dxu, r.dvu};
  };
  run_steps([&] {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = road.q[i];
      out.t[i] = road.t[i];
      out.xs[i] = y[0];
      out.vs[i] = y[1];
      out.xu[i] = y[2];
      out.vu[i] = y[3];
      out.tire_force[i] = p.kt * (q - y[2]);
      out.q[i] = q;
      const auto r1 = rk4_step(y, cfg.dt, q, f);
      out.acc_s[i] = r1[1];
      check_state(y, road.t[i] + cfg.dt);
    }
  });
  return out;
}

SimOutput simulate_twin(const SuspensionParams& p, const RoadTrace& road, const SimConfig& cfg) {
  std::size_t n = 0;
  check_grid(p, road, cfg, n);

  SimOutput out;
  resize_all(out, n);
  std::array<double, 5> y{};  // xs, vs, xu, vu, x3
  const auto f = [&p](const std::array<double, 5>& s, double q) -> std::array<double, 5> {
    const TwinRates r = twin_derivative({s[0], s[1], s[2], s[3], s[4]}, p, q);
    return {r.dxs, r.dvs, r.dxu, r.dvu, r.dx3};
  };
  run_steps([&] {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = road.q[i];
      out.t[i] = road.t[i];
      out.xs[i] = y[0];
      out.vs[i] = y[1];
      out.xu[i] = y[2];
      out.vu[i] = y[3];
      out.x3[i] = y[4];
      out.tire_force[i] = p.kt * (q - y[2]);
      out.q[i] = q;
      const auto r1 = rk4_step(y, cfg.dt, q, f);
      out.acc_s[i] = r1[1];
      check_state(y, road.t[i] + cfg.dt);
    }
  });
  return out;
}

SimOutput simulate_active(const SuspensionParams& p, const RoadTrace& road, const PIGains& gains,
                          const SimConfig& cfg) {
  std::size_t n = 0;
  check_grid(p, road, cfg, n);
  if (!(std::isfinite(gains.kp) && std::isfinite(gains.ki))) {
    throw std::invalid_argument("PI gains must be finite");
  }
  if (p.ms + gains.kp == 0.0) {
    throw std::invalid_argument("kp = -ms makes the acceleration feedthrough singular");
  }

  SimOutput out;
  resize_all(out, n);
  std::array<double, 6> y{};  // xs, vs, xu, vu, x3, z (integral of -acc_s)
  const auto f = [&p, &gains](const std::array<double, 6>& s, double q) -> std::array<double, 6> {
    // fa depends on the instantaneous acceleration; substituting fa = kp*(-a) + ki*z into
    // a = (k1(x3-xs) + c1(vu-vs) + fa)/ms and solving gives the feedthrough form below.
    const double f1 = p.k1 * (s[4] - s[0]);
    const double fd = p.c1 * (s[3] - s[1]);
    const double a = (f1 + fd + gains.ki * s[5]) / (p.ms + gains.kp);
    const double fa = gains.kp * (-a) + gains.ki * s[5];
    const TwinRates r = active_twin_derivative({s[0], s[1], s[2], s[3], s[4]}, p, {q, fa});
    return {r.dxs, r.dvs, r.dxu, r.dvu, r.dx3, -r.dvs};
  };
  run_steps([&] {
    for (std::size_t i = 0; i < n; ++i) {
      const double q = road.q[i];
      out.t[i] = road.t[i];
      out.xs[i] = y[0];
      out.vs[i] = y[1];
      out.xu[i] = y[2];
      out.vu[i] = y[3];
      out.x3[i] = y[4];
      out.tire_force[i] = p.kt * (q - y[2]);
      out.q[i] = q;
      const double z = y[5];
      const auto r1 = rk4_step(y, cfg.dt, q, f);
      out.acc_s[i] = r1[1];
      out.fa[i] = gains.kp * (-r1[1]) + gains.ki * z;
      check_state(y, road.t[i] + cfg.dt);
    }
  });
  return out;
}

}  // namespace qcar
