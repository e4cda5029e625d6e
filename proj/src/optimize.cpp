#include "qcar/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "qcar/errors.hpp"
#include "qcar/rng.hpp"

namespace qcar {

namespace {

constexpr double kWorstCost = std::numeric_limits<double>::infinity();

double clip(double v, const Range& r) { return std::min(std::max(v, r.lo), r.hi); }

/// Index-ordered parallel map: results land in a pre-sized vector by index, so the
/// outcome is identical for any thread count.
void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  std::size_t nthreads = threads > 0 ? static_cast<std::size_t>(threads)
                                     : std::max(1u, std::thread::hardware_concurrency());
  nthreads = std::min(nthreads, n);
  if (nthreads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(nthreads);
  for (std::size_t w = 0; w < nthreads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

/// Evaluates one candidate; any failure (exception or non-finite return) scores worst.
double eval_candidate(const Objective& f, std::span<const double> x) {
  double cost = kWorstCost;
  try {
    cost = f(x);
  } catch (...) {
    return kWorstCost;
  }
  return std::isfinite(cost) ? cost : kWorstCost;
}

struct Candidate {
  std::vector<double> x;
  double cost = kWorstCost;
};

}  // namespace

void ParamBounds::validate() const {
  const struct {
    const char* name;
    Range r;
  } fields[] = {{"c1", c1}, {"k1", k1}, {"c2", c2}, {"k2", k2}};
  for (const auto& f : fields) {
    if (!(std::isfinite(f.r.lo) && std::isfinite(f.r.hi) && f.r.lo < f.r.hi)) {
      throw std::invalid_argument(std::string("ParamBounds.") + f.name +
                                  " must satisfy lo < hi (finite)");
    }
  }
}

void ESConfig::validate() const {
  if (mu < 1) throw std::invalid_argument("ESConfig.mu must be >= 1");
  if (lambda < mu) throw std::invalid_argument("ESConfig.lambda must be >= mu");
  if (iterations < 1) throw std::invalid_argument("ESConfig.iterations must be >= 1");
  if (!(std::isfinite(sigma0) && sigma0 > 0.0)) {
    throw std::invalid_argument("ESConfig.sigma0 must be finite and > 0");
  }
  if (threads < 0) throw std::invalid_argument("ESConfig.threads must be >= 0");
}

EsResult es_minimize(const Objective& f, std::span<const Range> bounds, const ESConfig& cfg,
                     std::span<const double> start) {
  cfg.validate();
  if (bounds.empty()) throw std::invalid_argument("es_minimize needs at least one dimension");
  for (const Range& r : bounds) {
    if (!(std::isfinite(r.lo) && std::isfinite(r.hi) && r.lo < r.hi)) {
      throw std::invalid_argument("every bound must satisfy lo < hi (finite)");
    }
  }
  if (!start.empty() && start.size() != bounds.size()) {
    throw std::invalid_argument("start point dimension does not match the bounds");
  }

  const std::size_t dims = bounds.size();
  const auto mu = static_cast<std::size_t>(cfg.mu);
  const auto lambda = static_cast<std::size_t>(cfg.lambda);

  std::vector<double> width(dims), sigma(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    width[d] = bounds[d].hi - bounds[d].lo;
    sigma[d] = cfg.sigma0 * width[d];
  }

  // Initial parents: the start point (when given) plus uniform draws over the box.
  GaussianRng init_rng(derive_seed(cfg.seed, "es.init"));
  std::vector<Candidate> parents(mu);
  for (std::size_t i = 0; i < mu; ++i) {
    parents[i].x.resize(dims);
    if (i == 0 && !start.empty()) {
      for (std::size_t d = 0; d < dims; ++d) parents[i].x[d] = clip(start[d], bounds[d]);
    } else {
      for (std::size_t d = 0; d < dims; ++d) {
        parents[i].x[d] = bounds[d].lo + init_rng.uniform() * width[d];
      }
    }
  }
  parallel_for(mu, cfg.threads,
               [&](std::size_t i) { parents[i].cost = eval_candidate(f, parents[i].x); });
  long evaluations = static_cast<long>(mu);
  std::stable_sort(parents.begin(), parents.end(),
                   [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
  if (!std::isfinite(parents[0].cost)) {
    throw NumericalError("every candidate in the initial population failed to evaluate");
  }

  EsResult result;
  result.history.push_back(parents[0].cost);
  result.history_best.push_back(parents[0].x);

  std::vector<Candidate> offspring(lambda);
  std::vector<std::size_t> parent_of(lambda);
  for (int gen = 1; gen <= cfg.iterations; ++gen) {
    // All randomness for the generation is drawn up front from its own stream, so
    // offspring evaluations can run in any order (or in parallel) without changing them.
    GaussianRng gen_rng(derive_seed(cfg.seed, "es.gen." + std::to_string(gen)));
    for (std::size_t j = 0; j < lambda; ++j) {
      std::size_t pick = static_cast<std::size_t>(gen_rng.uniform() * static_cast<double>(mu));
      pick = std::min(pick, mu - 1);
      parent_of[j] = pick;
      offspring[j].x.resize(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        offspring[j].x[d] = clip(parents[pick].x[d] + sigma[d] * gen_rng.normal(), bounds[d]);
      }
    }
    parallel_for(lambda, cfg.threads,
                 [&](std::size_t j) { offspring[j].cost = eval_candidate(f, offspring[j].x); });
    evaluations += static_cast<long>(lambda);

    std::size_t finite_count = 0;
    std::size_t successes = 0;
    for (std::size_t j = 0; j < lambda; ++j) {
      if (std::isfinite(offspring[j].cost)) ++finite_count;
      if (offspring[j].cost < parents[parent_of[j]].cost) ++successes;
    }
    if (finite_count == 0) {
      throw NumericalError("generation " + std::to_string(gen) +
                           ": every offspring evaluation failed (non-finite cost)");
    }

    // 1/5-success rule: expand steps when more than a fifth of mutations improve on their
    // parent, contract otherwise.
    const double rate = static_cast<double>(successes) / static_cast<double>(lambda);
    if (rate > 0.2) {
      for (std::size_t d = 0; d < dims; ++d) sigma[d] = std::min(sigma[d] / 0.82, width[d]);
    } else if (rate < 0.2) {
      for (std::size_t d = 0; d < dims; ++d) sigma[d] = std::max(sigma[d] * 0.82, 1e-12 * width[d]);
    }

    // (mu+lambda) truncation: parents stay in the pool (elitism); stable sort keeps
    // pool order (parents first, then offspring by index) on cost ties, so the outcome
    // is deterministic and scheduling-independent.
    std::vector<Candidate> pool;
    pool.reserve(mu + lambda);
    for (auto& c : parents) pool.push_back(std::move(c));
    for (auto& c : offspring) pool.push_back(std::move(c));
    std::stable_sort(pool.begin(), pool.end(),
                     [](const Candidate& a, const Candidate& b) { return a.cost < b.cost; });
    for (std::size_t i = 0; i < mu; ++i) parents[i] = std::move(pool[i]);
    for (std::size_t j = 0; j < lambda; ++j) offspring[j] = Candidate{};

    result.history.push_back(parents[0].cost);
    result.history_best.push_back(parents[0].x);
  }

  result.best = parents[0].x;
  result.best_cost = parents[0].cost;
  result.evaluations = evaluations;
  return result;
}

OptimizationResult optimize(const Objective& objective, const ParamBounds& bounds,
                            const ESConfig& cfg, std::span<const double> start) {
  bounds.validate();
  const std::array<Range, 4> box = bounds.as_array();
  const EsResult es = es_minimize(objective, box, cfg, start);

  OptimizationResult result;
  result.c1 = es.best[0];
  result.k1 = es.best[1];
  result.c2 = es.best[2];
  result.k2 = es.best[3];
  result.best_cost = es.best_cost;
  result.history = es.history;
  result.history_params.reserve(es.history_best.size());
  for (const auto& x : es.history_best) {
    result.history_params.push_back({x[0], x[1], x[2], x[3]});
  }
  result.evaluations = es.evaluations;
  return result;
}

SuspensionObjective make_suspension_objective(const SuspensionParams& base, const RoadTrace& road,
                                              const CostWeights& weights, const SimConfig& cfg,
                                              double settle) {
  base.validate();
  weights.validate();
  if (settle < 0.0) settle = default_settle(road);

  const SimOutput base_run = simulate_twin(base, road, cfg);
  const PerformanceIndex baseline = performance_index(base_run, base, road, settle);
  const struct {
    const char* name;
    double value;
  } comps[] = {{"acc_rms", baseline.acc_rms},
               {"sws_rms", baseline.sws_rms},
               {"dtl_rms", baseline.dtl_rms}};
  for (const auto& c : comps) {
    if (!(std::isfinite(c.value) && c.value > 0.0)) {
      throw std::invalid_argument(std::string("baseline run produced a non-positive ") + c.name +
                                  "; the weighted cost cannot be normalized");
    }
  }

  SuspensionObjective obj;
  obj.baseline = baseline;
  // The candidate captures the road by reference: one shared realization for the whole
  // search (common random numbers), so cost differences reflect parameters, not noise.
  obj.fn = [base, &road, weights, cfg, settle, baseline](std::span<const double> x) -> double {
    if (x.size() != 4) {
      throw std::invalid_argument("suspension objective expects (c1, k1, c2, k2)");
    }
    SuspensionParams candidate = base;
    candidate.c1 = x[0];
    candidate.k1 = x[1];
    candidate.c2 = x[2];
    candidate.k2 = x[3];
    try {
      const SimOutput run = simulate_twin(candidate, road, cfg);
      const PerformanceIndex index = performance_index(run, candidate, road, settle);
      return weighted_cost(index, baseline, weights);
    } catch (const NumericalError&) {
      return std::numeric_limits<double>::quiet_NaN();
    }
  };
  return obj;
}

}  // namespace qcar
