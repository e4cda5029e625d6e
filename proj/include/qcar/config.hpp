#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include <json.hpp>

#include "qcar/control.hpp"
#include "qcar/metrics.hpp"
#include "qcar/optimize.hpp"
#include "qcar/road.hpp"
#include "qcar/simulate.hpp"
#include "qcar/types.hpp"

namespace qcar {

enum class RoadCase { random, step };

/// Road selection shared by every command.
struct RoadConfig {
  RoadCase kind = RoadCase::random;
  char road_class = 'D';    ///< grade label A..H (random case)
  double v = 20.0;          ///< vehicle speed [m/s]
  double n0 = 0.1;          ///< reference spatial frequency [cycles/m]
  double f0 = 0.0;          ///< low-frequency cutoff [Hz]
  double waviness = 2.0;    ///< PSD power-law exponent
  double step_height = 0.02;  ///< [m] (step case)
  double step_time = 2.0;     ///< [s] (step case)
};

/// Horizon/burn-in per road case plus the shared integration step.
struct SimSection {
  double dt = 1e-3;
  double duration_random = 100.0;
  double duration_step = 20.0;
  double settle_random = 1.0;
  double settle_step = 0.0;
};

/// One document driving every command; defaults are the standard setup (nominal plant,
/// D-grade road at 20 m/s, 0.02 m step at 2 s, comfort-weighted cost, production
/// parameter bounds).
struct ExperimentConfig {
  SuspensionParams params;
  RoadConfig road;
  SimSection sim;
  CostWeights weights;
  ParamBounds bounds;
  ESConfig es;
  TuneConfig tune;
  PIGains gains{0.0, 1904.0};  ///< gains used by `simulate active` when no tuning artifact is involved
  std::uint64_t seed = 42;     ///< master seed; stage seeds are derived from it
  std::string out_dir = "out";

  double duration() const { return road.kind == RoadCase::random ? sim.duration_random : sim.duration_step; }
  double settle() const { return road.kind == RoadCase::random ? sim.settle_random : sim.settle_step; }
  SimConfig sim_config() const { return {sim.dt, duration()}; }
  RandomRoadSpec random_spec(std::uint64_t road_seed) const;
  StepRoadSpec step_spec() const { return {road.step_height, road.step_time}; }

  /// Throws ConfigError (naming the offending field) if any section is invalid.
  void validate() const;

  nlohmann::json to_json() const;
  /// Strict parse: unknown keys and wrong value types are ConfigErrors naming the key.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

/// Reads and parses a config file; ConfigError on missing/unreadable/invalid content.
ExperimentConfig load_config(const std::filesystem::path& path);

/// Stable fingerprint of a config (FNV-1a of its canonical serialization), recorded in
/// every output file so artifacts can be traced to their settings.
std::uint64_t config_hash(const ExperimentConfig& cfg);

}  // namespace qcar
