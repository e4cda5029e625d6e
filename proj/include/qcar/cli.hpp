#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcar/config.hpp"

namespace qcar {

enum class SimModel { passive, twin, active };
enum class TunePlant { nominal, optimized };

/// Generates the configured road and writes road.csv plus road_psd.csv
/// (columns n,psd,target_psd; the target column is nan for non-random roads).
void cmd_road(const ExperimentConfig& cfg, std::optional<double> duration = {});

/// Integrates one model over the configured road; writes sim_<model>.csv and
/// metrics_<model>.csv. The active model uses cfg.gains.
void cmd_simulate(const ExperimentConfig& cfg, SimModel model);

/// Evolution-strategy search over (c1, k1, c2, k2); writes es_history.csv and
/// optimize_result.json.
void cmd_optimize(const ExperimentConfig& cfg);

/// Integral-gain sweep on the nominal plant, or on the optimized plant loaded from a prior
/// optimize_result.json; writes tune_sweep.csv and tune_result.json.
void cmd_tune(const ExperimentConfig& cfg, TunePlant plant = TunePlant::nominal);

/// Head-to-head on one shared road realization: passive (nominal), optimized twin, and
/// PI-active (optimized plant + tuned gains). Costs are normalized by the nominal twin
/// run. inline_stages=true runs optimize+tune internally (writing their artifacts too);
/// false loads optimize_result.json / tune_result.json from out_dir. Writes road.csv,
/// sim_passive.csv, sim_twin.csv, sim_active.csv, summary.csv.
void cmd_compare(const ExperimentConfig& cfg, bool inline_stages = true);

/// Full command-line entry point. Returns the process exit code:
/// 0 success, 1 configuration/usage error, 2 runtime/numerical failure.
int run_cli(const std::vector<std::string>& args);
int run_cli(int argc, char** argv);

}  // namespace qcar
