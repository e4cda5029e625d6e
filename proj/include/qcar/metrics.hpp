#pragma once

#include <span>

#include "qcar/road.hpp"
#include "qcar/simulate.hpp"
#include "qcar/types.hpp"

namespace qcar {

/// The three RMS ride criteria of one simulation run.
struct PerformanceIndex {
  double acc_rms = 0.0;  ///< RMS body acceleration [m/s^2] (discomfort)
  double sws_rms = 0.0;  ///< RMS suspension working space xu - xs [m]
  double dtl_rms = 0.0;  ///< RMS dynamic tire load kt*(xo - xu) [N] (road holding)
};

/// Scalarization weights. Defaults emphasize comfort and road holding over rattle space.
struct CostWeights {
  double acc = 0.5;
  double dtl = 0.45;
  double sws = 0.05;

  void validate() const;  ///< throws std::invalid_argument if any weight is negative
};

/// sqrt(mean of squares). Rejects an empty signal.
double rms(std::span<const double> signal);

/// Analysis burn-in convention: random roads discard the first second (initial-condition
/// bias), deterministic inputs keep the whole horizon (the transient is the signal).
double default_settle(const RoadTrace& road);

/// RMS criteria of a run, computed over t >= settle. The simulation and road must share
/// one time grid; settle must leave at least one sample.
PerformanceIndex performance_index(const SimOutput& sim, const SuspensionParams& p,
                                   const RoadTrace& road, double settle);

/// Baseline-normalized weighted cost:
///   w.acc * (acc/acc_base) + w.dtl * (dtl/dtl_base) + w.sws * (sws/sws_base)
/// The normalization makes the mixed-unit criteria commensurable and pins the baseline
/// parameter set at cost 1.0. Every baseline component must be strictly positive.
double weighted_cost(const PerformanceIndex& index, const PerformanceIndex& baseline,
                     const CostWeights& w);

}  // namespace qcar
