#include "qcar/road.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>

#include "qcar/rng.hpp"

namespace qcar {

namespace {

constexpr double kGradePsd[8] = {16e-6,   64e-6,    256e-6,   1024e-6,
                                 4096e-6, 16384e-6, 65536e-6, 262144e-6};

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) {
    throw std::invalid_argument(std::string(what) + " must be finite and > 0");
  }
}

std::size_t sample_count(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

/// In-place radix-2 FFT (size must be a power of two).
void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j |= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t half = 1; half < n; half <<= 1) {
    const double ang = -kPi / static_cast<double>(half);
    const std::complex<double> wstep(std::cos(ang), std::sin(ang));
    for (std::size_t base = 0; base < n; base += 2 * half) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < half; ++k, w *= wstep) {
        const std::complex<double> u = a[base + k];
        const std::complex<double> t = w * a[base + k + half];
        a[base + k] = u + t;
        a[base + k + half] = u - t;
      }
    }
  }
}

}  // namespace

IsoRoadClass IsoRoadClass::from_label(char label) {
  const char upper = static_cast<char>(std::toupper(static_cast<unsigned char>(label)));
  if (upper < 'A' || upper > 'H') {
    throw std::invalid_argument(std::string("unknown road class label '") + label +
                                "' (expected A..H)");
  }
  return {upper, kGradePsd[upper - 'A']};
}

IsoRoadClass IsoRoadClass::from_label(std::string_view s) {
  if (s.size() != 1) {
    throw std::invalid_argument("unknown road class label '" + std::string(s) +
                                "' (expected a single letter A..H)");
  }
  return from_label(s[0]);
}

void RandomRoadSpec::validate() const {
  require_positive(v, "RandomRoadSpec.v");
  require_positive(n0, "RandomRoadSpec.n0");
  require_positive(dt, "RandomRoadSpec.dt");
  if (!(std::isfinite(f0) && f0 >= 0.0)) {
    throw std::invalid_argument("RandomRoadSpec.f0 must be finite and >= 0");
  }
  if (!std::isfinite(waviness)) {
    throw std::invalid_argument("RandomRoadSpec.waviness must be finite");
  }
  if (!(std::isfinite(road_class.gq_n0) && road_class.gq_n0 >= 0.0)) {
    throw std::invalid_argument("RandomRoadSpec.road_class.gq_n0 must be finite and >= 0");
  }
}

void StepRoadSpec::validate() const {
  if (!std::isfinite(height)) {
    throw std::invalid_argument("StepRoadSpec.height must be finite");
  }
  if (!(std::isfinite(t_start) && t_start >= 0.0)) {
    throw std::invalid_argument("StepRoadSpec.t_start must be finite and >= 0");
  }
}

double target_psd(const IsoRoadClass& road_class, double n, double n0, double waviness) {
  require_positive(n, "spatial frequency n");
  require_positive(n0, "reference frequency n0");
  if (!(std::isfinite(road_class.gq_n0) && road_class.gq_n0 >= 0.0)) {
    throw std::invalid_argument("road class PSD magnitude must be finite and >= 0");
  }
  return road_class.gq_n0 * std::pow(n / n0, -waviness);
}

RoadTrace generate_random_road(const RandomRoadSpec& spec, double duration) {
  spec.validate();
  if (!(std::isfinite(duration) && duration >= spec.dt)) {
    throw std::invalid_argument("duration must cover at least one sample interval");
  }

  const std::size_t n = sample_count(duration, spec.dt);
  const double pole = 2.0 * kPi * spec.f0;
  const double gain = 2.0 * kPi * spec.n0 * std::sqrt(spec.road_class.gq_n0 * spec.v);
  // Unit one-sided PSD for the driving noise: i.i.d. samples of variance 1/(2*dt), held
  // over each interval, so the filtered output lands on the target spectrum.
  const double noise_sd = std::sqrt(0.5 / spec.dt);

  GaussianRng rng(spec.seed);
  RoadTrace trace;
  trace.dt = spec.dt;
  trace.t.resize(n);
  trace.q.resize(n);
  char desc[128];
  std::snprintf(desc, sizeof(desc), "random road class %c v=%g m/s dt=%g s", spec.road_class.label,
                spec.v, spec.dt);
  trace.spec = {RoadKind::random, spec.seed, desc};

  double q = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    trace.t[i] = static_cast<double>(i) * spec.dt;
    trace.q[i] = q;
    // dq/dt = -pole*q + gain*w, with w held constant across the step; same fixed-step
    // 4th-order scheme as the plant so the forcing sequence lines up sample-for-sample.
    const double w = gain * (noise_sd * rng.normal());
    const double k1 = -pole * q + w;
    const double k2 = -pole * (q + 0.5 * spec.dt * k1) + w;
    const double k3 = -pole * (q + 0.5 * spec.dt * k2) + w;
    const double k4 = -pole * (q + spec.dt * k3) + w;
    q += spec.dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return trace;
}

RoadTrace generate_step_road(const StepRoadSpec& spec, double duration, double dt) {
  spec.validate();
  require_positive(dt, "dt");
  if (!(std::isfinite(duration) && duration > spec.t_start)) {
    throw std::invalid_argument("duration must exceed the step start time");
  }

  const std::size_t n = sample_count(duration, dt);
  if (n == 0) {
    throw std::invalid_argument("duration must cover at least one sample interval");
  }
  RoadTrace trace;
  trace.dt = dt;
  trace.t.resize(n);
  trace.q.resize(n);
  char desc[128];
  std::snprintf(desc, sizeof(desc), "step road height=%g m at t=%g s", spec.height, spec.t_start);
  trace.spec = {RoadKind::step, 0, desc};
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    trace.t[i] = t;
    trace.q[i] = t >= spec.t_start ? spec.height : 0.0;
  }
  return trace;
}

PsdEstimate estimate_psd(const RoadTrace& trace, double v, std::size_t nperseg) {
  require_positive(v, "v");
  if (trace.dt <= 0.0 || trace.q.size() != trace.t.size()) {
    throw std::invalid_argument("malformed road trace");
  }
  const std::size_t len = trace.q.size();

  if (nperseg == 0) {
    const std::size_t target = len / 8;
    nperseg = 256;
    while (nperseg * 2 <= target && nperseg < 16384) nperseg <<= 1;
  } else if (nperseg < 2 || (nperseg & (nperseg - 1)) != 0) {
    throw std::invalid_argument("nperseg must be a power of two >= 2");
  }
  const std::size_t hop = nperseg / 2;
  if (len < nperseg + hop) {
    throw std::invalid_argument(
        "trace too short for PSD estimation (need at least two half-overlapping segments)");
  }

  std::vector<double> window(nperseg);
  double window_ss = 0.0;
  for (std::size_t i = 0; i < nperseg; ++i) {
    window[i] = 0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) /
                                      static_cast<double>(nperseg)));
    window_ss += window[i] * window[i];
  }

  const std::size_t nbins = nperseg / 2;  // positive frequencies, DC dropped
  std::vector<double> accum(nbins, 0.0);
  std::vector<std::complex<double>> buf(nperseg);
  std::size_t nseg = 0;
  for (std::size_t start = 0; start + nperseg <= len; start += hop, ++nseg) {
    double mean = 0.0;
    for (std::size_t i = 0; i < nperseg; ++i) mean += trace.q[start + i];
    mean /= static_cast<double>(nperseg);
    for (std::size_t i = 0; i < nperseg; ++i) {
      buf[i] = {(trace.q[start + i] - mean) * window[i], 0.0};
    }
    fft_inplace(buf);
    for (std::size_t k = 1; k <= nbins; ++k) accum[k - 1] += std::norm(buf[k]);
  }

  const double fs = 1.0 / trace.dt;
  const double scale = 1.0 / (static_cast<double>(nseg) * fs * window_ss);
  PsdEstimate out;
  out.n.resize(nbins);
  out.psd.resize(nbins);
  for (std::size_t k = 1; k <= nbins; ++k) {
    const double f = static_cast<double>(k) * fs / static_cast<double>(nperseg);
    // One-sided density: double every bin except Nyquist. Spatial conversion n = f/v
    // stretches the axis by 1/v, so the density gains a factor v.
    const double onesided = accum[k - 1] * scale * (k < nbins ? 2.0 : 1.0);
    out.n[k - 1] = f / v;
    out.psd[k - 1] = onesided * v;
  }
  return out;
}

}  // namespace qcar
