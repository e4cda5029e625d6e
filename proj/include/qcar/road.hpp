#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcar/types.hpp"

namespace qcar {

/// Road roughness grade: displacement-PSD magnitude gq_n0 [m^3] at the reference spatial
/// frequency. The canonical grades A..H quadruple the PSD (double the RMS) per grade:
/// A=16e-6, B=64e-6, ..., H=262144e-6 m^3.
struct IsoRoadClass {
  char label = 'D';
  double gq_n0 = 1024e-6;

  /// Canonical grade lookup; throws std::invalid_argument on an unknown label.
  static IsoRoadClass from_label(char label);
  static IsoRoadClass from_label(std::string_view s);  ///< one letter, case-insensitive
};

/// Parameters of the filtered-white-noise road generator.
struct RandomRoadSpec {
  IsoRoadClass road_class;
  double v = 20.0;         ///< vehicle speed [m/s]
  double n0 = 0.1;         ///< reference spatial frequency [cycles/m]
  double f0 = 0.0;         ///< low-frequency cutoff [Hz]; 0 makes the filter a pure integrator
  double waviness = 2.0;   ///< PSD power-law exponent
  std::uint64_t seed = 0;  ///< noise stream seed
  double dt = 1e-3;        ///< sample interval [s]

  void validate() const;  ///< throws std::invalid_argument
};

/// Step road profile.
struct StepRoadSpec {
  double height = 0.02;  ///< [m]
  double t_start = 2.0;  ///< [s]

  void validate() const;
};

enum class RoadKind { synthetic, step, random };

/// Provenance of a trace, kept with the data so downstream artifacts can record it.
struct RoadProvenance {
  RoadKind kind = RoadKind::synthetic;
  std::uint64_t seed = 0;
  std::string desc;
};

/// Uniformly sampled road elevation.
struct RoadTrace {
  double dt = 0.0;
  std::vector<double> t;  ///< sample times [s], t[i] = i*dt
  std::vector<double> q;  ///< elevation [m]
  RoadProvenance spec;
};

/// Target displacement PSD [m^3]: gq_n0 * (n/n0)^(-waviness). Requires n > 0, n0 > 0.
double target_psd(const IsoRoadClass& road_class, double n, double n0, double waviness);

/// Filtered-white-noise road:
///   dq/dt = -2*pi*f0 * q + 2*pi*n0*sqrt(gq_n0 * v) * w(t)
/// where w(t) is Gaussian white noise of unit one-sided PSD, realized as one i.i.d. sample
/// per dt (variance 1/(2*dt)) held constant across the step. Deterministic for a fixed
/// seed; q(0) = 0. The output PSD follows the target power law with exponent 2 when f0 = 0.
RoadTrace generate_random_road(const RandomRoadSpec& spec, double duration);

/// Step profile sampled on a dt grid: q(t) = 0 for t < t_start, q(t) = height for
/// t >= t_start. Sample values depend only on the sample time, not on the grid phase.
RoadTrace generate_step_road(const StepRoadSpec& spec, double duration, double dt);

/// One-sided PSD estimate against spatial frequency.
struct PsdEstimate {
  std::vector<double> n;    ///< spatial frequency [cycles/m]
  std::vector<double> psd;  ///< displacement PSD [m^3]
};

/// Averaged-periodogram PSD (Hann window, 50% overlap, per-segment mean removal) of a
/// trace, converted from temporal to spatial frequency via n = f/v and Gq(n) = v*Gq(f).
/// Satisfies Parseval: the integral of the estimate approximates the signal variance.
/// nperseg must be a power of two; 0 selects one near len/8, clamped to [256, 16384].
/// At least two (half-overlapping) segments must fit, or the trace is rejected.
PsdEstimate estimate_psd(const RoadTrace& trace, double v, std::size_t nperseg = 0);

}  // namespace qcar
