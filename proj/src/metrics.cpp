#include "qcar/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qcar {

void CostWeights::validate() const {
  const struct {
    const char* name;
    double value;
  } fields[] = {{"acc", acc}, {"dtl", dtl}, {"sws", sws}};
  for (const auto& f : fields) {
    if (!(std::isfinite(f.value) && f.value >= 0.0)) {
      throw std::invalid_argument(std::string("CostWeights.") + f.name +
                                  " must be finite and >= 0");
    }
  }
}

double rms(std::span<const double> signal) {
  if (signal.empty()) {
    throw std::invalid_argument("rms of an empty signal is undefined");
  }
  double sum_sq = 0.0;
  for (double v : signal) sum_sq += v * v;
  return std::sqrt(sum_sq / static_cast<double>(signal.size()));
}

double default_settle(const RoadTrace& road) {
  return road.spec.kind == RoadKind::random ? 1.0 : 0.0;
}

PerformanceIndex performance_index(const SimOutput& sim, const SuspensionParams& p,
                                   const RoadTrace& road, double settle) {
  p.validate();
  const std::size_t n = sim.t.size();
  const bool same_shape = n > 0 && sim.xs.size() == n && sim.xu.size() == n &&
                          sim.acc_s.size() == n && road.q.size() >= n && road.t.size() >= n;
  if (!same_shape) {
    throw std::invalid_argument("simulation output and road trace are not on one grid");
  }
  if (sim.t.front() != road.t.front() || sim.t[n - 1] != road.t[n - 1]) {
    throw std::invalid_argument("simulation output and road trace are not on one grid");
  }
  if (!(std::isfinite(settle) && settle >= 0.0) || settle > sim.t[n - 1]) {
    throw std::invalid_argument("settle window must leave at least one sample");
  }

  const auto first = std::lower_bound(sim.t.begin(), sim.t.end(), settle);
  const auto i0 = static_cast<std::size_t>(first - sim.t.begin());

  double acc_sq = 0.0, sws_sq = 0.0, dtl_sq = 0.0;
  for (std::size_t i = i0; i < n; ++i) {
    const double acc = sim.acc_s[i];
    const double sws = sim.xu[i] - sim.xs[i];
    const double dtl = p.kt * (road.q[i] - sim.xu[i]);
    acc_sq += acc * acc;
    sws_sq += sws * sws;
    dtl_sq += dtl * dtl;
  }
  const double count = static_cast<double>(n - i0);
  return {std::sqrt(acc_sq / count), std::sqrt(sws_sq / count), std::sqrt(dtl_sq / count)};
}

double weighted_cost(const PerformanceIndex& index, const PerformanceIndex& baseline,
                     const CostWeights& w) {
  w.validate();
  const struct {
    const char* name;
    double value;
  } base_fields[] = {{"acc_rms", baseline.acc_rms},
                     {"sws_rms", baseline.sws_rms},
                     {"dtl_rms", baseline.dtl_rms}};
  for (const auto& f : base_fields) {
    if (!(std::isfinite(f.value) && f.value > 0.0)) {
      throw std::invalid_argument(std::string("baseline ") + f.name +
                                  " must be > 0 for normalization");
    }
  }
  if (index.acc_rms < 0.0 || index.sws_rms < 0.0 || index.dtl_rms < 0.0) {
    throw std::invalid_argument("performance index components must be >= 0");
  }
  return w.acc * (index.acc_rms / baseline.acc_rms) + w.dtl * (index.dtl_rms / baseline.dtl_rms) +
         w.sws * (index.sws_rms / baseline.sws_rms);
}

}  // namespace qcar
