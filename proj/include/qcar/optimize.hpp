#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "qcar/metrics.hpp"
#include "qcar/road.hpp"
#include "qcar/simulate.hpp"
#include "qcar/types.hpp"

namespace qcar {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

/// Box constraints for the four tunable suspension parameters.
struct ParamBounds {
  Range c1{900.0, 2500.0};
  Range k1{15000.0, 40000.0};
  Range c2{900.0, 2500.0};
  Range k2{15000.0, 40000.0};

  void validate() const;  ///< throws std::invalid_argument unless lo < hi for each
  std::array<Range, 4> as_array() const { return {c1, k1, c2, k2}; }
};

/// (mu+lambda) evolution-strategy settings.
struct ESConfig {
  int mu = 5;               ///< parents kept per generation
  int lambda = 20;          ///< offspring per generation
  int iterations = 50;      ///< generations
  double sigma0 = 0.2;      ///< initial mutation step per dimension, as a fraction of box width
  std::uint64_t seed = 0;   ///< RNG seed; the run is fully deterministic given it
  int threads = 0;          ///< parallel objective evaluations; 0 = hardware default.
                            ///< Thread count never changes the result: all mutation draws
                            ///< happen before evaluation and reduction is index-ordered.

  void validate() const;  ///< mu >= 1, lambda >= mu, iterations >= 1, sigma0 > 0
};

using Objective = std::function<double(std::span<const double>)>;

/// Outcome of a generic ES run.
struct EsResult {
  std::vector<double> best;                    ///< best candidate found
  double best_cost = 0.0;
  std::vector<double> history;                 ///< best cost after init and after each generation
  std::vector<std::vector<double>> history_best;  ///< matching best candidate per entry
  long evaluations = 0;
};

/// Box-constrained (mu+lambda) evolution strategy with Gaussian mutation, per-dimension
/// step sizes adapted by the 1/5-success rule, and clip-to-box feasibility. Elitist:
/// parents stay in the selection pool, so the best cost never regresses. Candidates whose
/// objective is non-finite get worst fitness; a generation where every offspring is
/// non-finite aborts with NumericalError. `start`, when given, seeds the initial
/// population (clipped to the box).
EsResult es_minimize(const Objective& f, std::span<const Range> bounds, const ESConfig& cfg,
                     std::span<const double> start = {});

/// Suspension-tuning outcome over (c1, k1, c2, k2).
struct OptimizationResult {
  double c1 = 0.0, k1 = 0.0, c2 = 0.0, k2 = 0.0;
  double best_cost = 0.0;
  std::vector<double> history;                       ///< best cost per recorded generation
  std::vector<std::array<double, 4>> history_params; ///< matching best (c1, k1, c2, k2)
  long evaluations = 0;
};

/// es_minimize specialization for the four suspension parameters.
OptimizationResult optimize(const Objective& objective, const ParamBounds& bounds,
                            const ESConfig& cfg, std::span<const double> start = {});

/// Weighted-cost objective over candidate (c1, k1, c2, k2).
struct SuspensionObjective {
  Objective fn;               ///< returns non-finite on simulation failure
  PerformanceIndex baseline;  ///< index of the base parameters on the shared road
};

/// Builds the objective: every candidate is substituted into `base`, simulated as the twin
/// model over the SAME road realization (common random numbers), and scored with
/// weighted_cost against the cached baseline index — so the base parameters score exactly
/// 1.0. The baseline run must produce strictly positive index components.
/// settle < 0 selects default_settle(road).
SuspensionObjective make_suspension_objective(const SuspensionParams& base, const RoadTrace& road,
                                              const CostWeights& weights, const SimConfig& cfg,
                                              double settle = -1.0);

}  // namespace qcar
