#pragma once

#include <array>

#include "qcar/types.hpp"

namespace qcar {

/// Time derivative of a PassiveState; dvs and dvu are the body and wheel accelerations.
struct PassiveRates {
  double dxs = 0.0;
  double dvs = 0.0;
  double dxu = 0.0;
  double dvu = 0.0;
};

/// Time derivative of a TwinState; dx3 is the internal-node velocity.
struct TwinRates {
  double dxs = 0.0;
  double dvs = 0.0;
  double dxu = 0.0;
  double dvu = 0.0;
  double dx3 = 0.0;
};

/// 2-DOF quarter car: spring k1 and damper c1 in parallel between body and wheel,
/// tire spring kt between wheel and road.
///
///   xs'' = [ k1(xu - xs) + c1(vu - vs) ] / ms
///   xu'' = [ kt(xo - xu) - k1(xu - xs) - c1(vu - vs) ] / mu
///
/// Throws std::invalid_argument on invalid parameters or non-finite state/input.
PassiveRates passive_derivative(const PassiveState& s, const SuspensionParams& p, double xo);

/// Twin-accumulator quarter car: spring k1 from body down to a massless node x3,
/// spring k2 in parallel with damper c2 from the node down to the wheel, damper c1
/// directly between body and wheel, tire spring kt to the road.
///
/// The node carries no mass, so its velocity follows from the force balance
///   k1(x3 - xs) = k2(xu - x3) + c2(vu - dx3)
/// solved algebraically for dx3. The node transmits exactly the k1 spring force to
/// the wheel side, which makes internal forces cancel pairwise:
///   ms*dvs + mu*dvu == kt(xo - xu)   (identically, for every state)
TwinRates twin_derivative(const TwinState& s, const SuspensionParams& p, double xo);

/// Twin plant with an ideal actuator mounted between body and wheel: +fa acts on the
/// body, -fa reacts on the wheel. With input.fa == 0 the result is exactly
/// twin_derivative(s, p, input.xo).
TwinRates active_twin_derivative(const TwinState& s, const SuspensionParams& p,
                                 const PlantInput& input);

enum class ModelKind { passive, twin };

/// Undamped natural frequencies [Hz], ascending (body mode first in this parameter range).
/// For the twin model the undamped limit removes c2, leaving k1 and k2 in series, so the
/// suspension stiffness collapses to k1*k2/(k1+k2).
std::array<double, 2> natural_frequencies(const SuspensionParams& p, ModelKind model);

}  // namespace qcar
