#include "qcar/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qcar {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " is not finite");
  }
}

void require_finite(const PassiveState& s) {
  require_finite(s.xs, "state.xs");
  require_finite(s.vs, "state.vs");
  require_finite(s.xu, "state.xu");
  require_finite(s.vu, "state.vu");
}

void require_finite(const TwinState& s) {
  require_finite(s.xs, "state.xs");
  require_finite(s.vs, "state.vs");
  require_finite(s.xu, "state.xu");
  require_finite(s.vu, "state.vu");
  require_finite(s.x3, "state.x3");
}

}  // namespace

void SuspensionParams::validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"ms", ms}, {"mu", mu}, {"c1", c1}, {"k1", k1},
                {"c2", c2}, {"k2", k2}, {"kt", kt}};
  for (const auto& f : fields) {
    if (!(std::isfinite(f.value) && f.value > 0.0)) {
      throw std::invalid_argument(std::string("SuspensionParams.") + f.name +
                                  " must be finite and > 0");
    }
  }
}

PassiveRates passive_derivative(const PassiveState& s, const SuspensionParams& p, double xo) {
  p.validate();
  require_finite(s);
  require_finite(xo, "xo");

  const double f_spring = p.k1 * (s.xu - s.xs);
  const double f_damper = p.c1 * (s.vu - s.vs);
  const double acc_s = (f_spring + f_damper) / p.ms;
  const double acc_u = (p.kt * (xo - s.xu) - f_spring - f_damper) / p.mu;
  return {s.vs, acc_s, s.vu, acc_u};
}

TwinRates active_twin_derivative(const TwinState& s, const SuspensionParams& p,
                                 const PlantInput& input) {
  p.validate();
  require_finite(s);
  require_finite(input.xo, "input.xo");
  require_finite(input.fa, "input.fa");

  const double f1 = p.k1 * (s.x3 - s.xs);  // k1 spring force, positive pulls the body down
  const double f2 = p.k2 * (s.xu - s.x3);  // k2 spring force across the node-wheel gap
  const double fd = p.c1 * (s.vu - s.vs);  // primary damper force

  // Massless node: k1 force balances the (k2 || c2) pair, c2*(vu - dx3) = f1 - f2.
  const double dx3 = s.vu - (f1 - f2) / p.c2;

  const double acc_s = (f1 + fd + input.fa) / p.ms;
  // The node hands exactly f1 down to the wheel side (f2 plus the c2 force sum to f1),
  // so the wheel sees the tire force minus everything the body feels.
  const double acc_u = (p.kt * (input.xo - s.xu) - fd - f1 - input.fa) / p.mu;
  return {s.vs, acc_s, s.vu, acc_u, dx3};
}

TwinRates twin_derivative(const TwinState& s, const SuspensionParams& p, double xo) {
  return active_twin_derivative(s, p, {xo, 0.0});
}

std::array<double, 2> natural_frequencies(const SuspensionParams& p, ModelKind model) {
  p.validate();
  double ks = p.k1;
  if (model == ModelKind::twin) {
    // Without c2 the node leaves k1 and k2 in series.
    ks = p.k1 * p.k2 / (p.k1 + p.k2);
    if (!(std::isfinite(ks) && ks > 0.0)) {
      throw std::invalid_argument("series stiffness k1*k2/(k1+k2) is degenerate");
    }
  }

  // Undamped 2-DOF system M = diag(ms, mu), K = [[ks, -ks], [-ks, ks+kt]].
  // Symmetrized eigenproblem A = M^(-1/2) K M^(-1/2), closed-form 2x2 eigenvalues.
  const double a = ks / p.ms;
  const double b = -ks / std::sqrt(p.ms * p.mu);
  const double c = (ks + p.kt) / p.mu;
  const double mean = 0.5 * (a + c);
  const double radius = std::hypot(0.5 * (a - c), b);
  const double lam_low = mean - radius;
  const double lam_high = mean + radius;
  if (!(lam_low > 0.0)) {
    throw std::invalid_argument("stiffness matrix is not positive definite");
  }
  return {std::sqrt(lam_low) / (2.0 * kPi), std::sqrt(lam_high) / (2.0 * kPi)};
}

}  // namespace qcar
