#include "qcar/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qcar/control.hpp"
#include "qcar/csv.hpp"
#include "qcar/errors.hpp"
#include "qcar/metrics.hpp"
#include "qcar/optimize.hpp"
#include "qcar/rng.hpp"
#include "qcar/simulate.hpp"

namespace qcar {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string hash_string(std::uint64_t h) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> provenance_lines(const ExperimentConfig& cfg) {
  char buf[96];
  std::snprintf(buf, sizeof(buf), "config=%s seed=%llu", hash_string(config_hash(cfg)).c_str(),
                static_cast<unsigned long long>(cfg.seed));
  return {std::string(buf)};
}

fs::path ensure_out_dir(const ExperimentConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  }
  return dir;
}

RoadTrace build_road(const ExperimentConfig& cfg, std::optional<double> duration_override = {}) {
  const double duration = duration_override.value_or(cfg.duration());
  if (cfg.road.kind == RoadCase::random) {
    return generate_random_road(cfg.random_spec(derive_seed(cfg.seed, "road")), duration);
  }
  return generate_step_road(cfg.step_spec(), duration, cfg.sim.dt);
}

void write_road_csv(const fs::path& path, const std::vector<std::string>& prov,
                    const RoadTrace& road) {
  std::vector<std::string> comments = prov;
  comments.push_back(road.spec.desc);
  CsvWriter w(path, comments, "t,q");
  for (std::size_t i = 0; i < road.t.size(); ++i) {
    w.row({road.t[i], road.q[i]});
  }
  w.close();
}

void write_sim_csv(const fs::path& path, const std::vector<std::string>& prov,
                   const SimOutput& out) {
  CsvWriter w(path, prov, "t,xs,vs,xu,vu,x3,acc_s,tire_force,fa,q");
  for (std::size_t i = 0; i < out.t.size(); ++i) {
    w.row({out.t[i], out.xs[i], out.vs[i], out.xu[i], out.vu[i], out.x3[i], out.acc_s[i],
           out.tire_force[i], out.fa[i], out.q[i]});
  }
  w.close();
}

void write_metrics_csv(const fs::path& path, const std::vector<std::string>& prov,
                       const PerformanceIndex& idx) {
  CsvWriter w(path, prov, "acc_rms,sws_rms,dtl_rms");
  w.row({idx.acc_rms, idx.sws_rms, idx.dtl_rms});
  w.close();
}

void write_json_file(const fs::path& path, const json& j) {
  std::ofstream out(path, std::ios::out | std::ios::trunc | std::ios::binary);
  if (!out) {
    throw ConfigError("cannot open '" + path.string() + "' for writing");
  }
  out << j.dump(2) << '\n';
  out.flush();
  if (!out) {
    throw ConfigError("failed while writing '" + path.string() + "'");
  }
}

json load_json_file(const fs::path& path, const char* hint) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("missing '" + path.string() + "' (" + hint + ")");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
  return j;
}

json index_to_json(const PerformanceIndex& idx) {
  return {{"acc_rms", idx.acc_rms}, {"sws_rms", idx.sws_rms}, {"dtl_rms", idx.dtl_rms}};
}

double json_number(const json& j, const char* key, const fs::path& file) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError("'" + file.string() + "' lacks numeric field '" + key + "'");
  }
  return j.at(key).get<double>();
}

/// Runs the parameter search on a prepared road and persists its artifacts.
OptimizationResult run_optimize_stage(const ExperimentConfig& cfg, const RoadTrace& road,
                                      const fs::path& dir, const std::vector<std::string>& prov) {
  const SimConfig sc = cfg.sim_config();
  const SuspensionObjective obj =
      make_suspension_objective(cfg.params, road, cfg.weights, sc, cfg.settle());

  ESConfig es = cfg.es;
  es.seed = derive_seed(cfg.seed, "es");
  const std::array<double, 4> start{cfg.params.c1, cfg.params.k1, cfg.params.c2, cfg.params.k2};
  const OptimizationResult result = optimize(obj.fn, cfg.bounds, es, start);

  CsvWriter hist(dir / "es_history.csv", prov, "generation,best_cost,c1,k1,c2,k2");
  for (std::size_t g = 0; g < result.history.size(); ++g) {
    const auto& p = result.history_params[g];
    hist.row({static_cast<double>(g), result.history[g], p[0], p[1], p[2], p[3]});
  }
  hist.close();

  json j;
  j["best"] = {{"c1", result.c1}, {"k1", result.k1}, {"c2", result.c2}, {"k2", result.k2}};
  j["best_cost"] = result.best_cost;
  j["evaluations"] = result.evaluations;
  j["baseline"] = index_to_json(obj.baseline);
  j["road"] = {{"kind", road.spec.kind == RoadKind::random ? "random" : "step"},
               {"seed", road.spec.seed}};
  j["config"] = hash_string(config_hash(cfg));
  j["seed"] = cfg.seed;
  write_json_file(dir / "optimize_result.json", j);
  return result;
}

/// Runs the gain sweep on a prepared road/plant and persists its artifacts.
TuneResult run_tune_stage(const ExperimentConfig& cfg, const SuspensionParams& plant,
                          const char* plant_name, const RoadTrace& road, const fs::path& dir,
                          const std::vector<std::string>& prov) {
  const TuneResult result =
      tune_gains(plant, road, cfg.weights, cfg.tune, cfg.sim_config(), cfg.settle());

  CsvWriter sweep(dir / "tune_sweep.csv", prov, "ki,cost,acc_rms,sws_rms,dtl_rms");
  for (const TuneRow& row : result.sweep) {
    sweep.row({row.ki, row.cost, row.index.acc_rms, row.index.sws_rms, row.index.dtl_rms});
  }
  sweep.close();

  json j;
  j["gains"] = {{"kp", result.gains.kp}, {"ki", result.gains.ki}};
  j["cost"] = result.cost;
  j["plant"] = plant_name;
  j["plant_params"] = {{"c1", plant.c1}, {"k1", plant.k1}, {"c2", plant.c2}, {"k2", plant.k2}};
  j["index"] = index_to_json(result.index);
  j["open_loop"] = index_to_json(result.open_loop);
  j["config"] = hash_string(config_hash(cfg));
  j["seed"] = cfg.seed;
  write_json_file(dir / "tune_result.json", j);
  return result;
}

SuspensionParams load_optimized_params(const ExperimentConfig& cfg, const fs::path& dir) {
  const fs::path file = dir / "optimize_result.json";
  const json j = load_json_file(file, "run the optimize command first");
  if (!j.contains("best") || !j.at("best").is_object()) {
    throw ConfigError("'" + file.string() + "' lacks the 'best' parameter object");
  }
  const json& best = j.at("best");
  SuspensionParams p = cfg.params;
  p.c1 = json_number(best, "c1", file);
  p.k1 = json_number(best, "k1", file);
  p.c2 = json_number(best, "c2", file);
  p.k2 = json_number(best, "k2", file);
  return p;
}

PIGains load_tuned_gains(const fs::path& dir) {
  const fs::path file = dir / "tune_result.json";
  const json j = load_json_file(file, "run the tune command first");
  if (!j.contains("gains") || !j.at("gains").is_object()) {
    throw ConfigError("'" + file.string() + "' lacks the 'gains' object");
  }
  return {json_number(j.at("gains"), "kp", file), json_number(j.at("gains"), "ki", file)};
}

double ratio_allowing_degenerate(double value, double base) {
  if (base > 0.0) return value / base;
  return value == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

/// weighted_cost, except that an identically quiet channel (0/0) counts as ratio 0 so a
/// degenerate road (e.g. zero-height step) yields all-zero summaries instead of an error.
double cost_allowing_degenerate(const PerformanceIndex& idx, const PerformanceIndex& base,
                                const CostWeights& w) {
  if (base.acc_rms > 0.0 && base.sws_rms > 0.0 && base.dtl_rms > 0.0) {
    return weighted_cost(idx, base, w);
  }
  return w.acc * ratio_allowing_degenerate(idx.acc_rms, base.acc_rms) +
         w.dtl * ratio_allowing_degenerate(idx.dtl_rms, base.dtl_rms) +
         w.sws * ratio_allowing_degenerate(idx.sws_rms, base.sws_rms);
}

const char* model_name(SimModel model) {
  switch (model) {
    case SimModel::passive: return "passive";
    case SimModel::twin: return "twin";
    case SimModel::active: return "active";
  }
  return "";
}

}  // namespace

void cmd_road(const ExperimentConfig& cfg, std::optional<double> duration) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto prov = provenance_lines(cfg);
  const RoadTrace road = build_road(cfg, duration);
  write_road_csv(dir / "road.csv", prov, road);

  const PsdEstimate psd = estimate_psd(road, cfg.road.v);
  const bool has_target = cfg.road.kind == RoadCase::random;
  const IsoRoadClass grade =
      has_target ? IsoRoadClass::from_label(cfg.road.road_class) : IsoRoadClass{};
  CsvWriter w(dir / "road_psd.csv", prov, "n,psd,target_psd");
  for (std::size_t i = 0; i < psd.n.size(); ++i) {
    const double target = has_target
                              ? target_psd(grade, psd.n[i], cfg.road.n0, cfg.road.waviness)
                              : std::numeric_limits<double>::quiet_NaN();
    w.row({psd.n[i], psd.psd[i], target});
  }
  w.close();
  std::cout << "wrote " << (dir / "road.csv").string() << " and " << (dir / "road_psd.csv").string()
            << " (" << road.q.size() << " samples)\n";
}

void cmd_simulate(const ExperimentConfig& cfg, SimModel model) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto prov = provenance_lines(cfg);
  const RoadTrace road = build_road(cfg);
  const SimConfig sc = cfg.sim_config();

  SimOutput run;
  switch (model) {
    case SimModel::passive: run = simulate_passive(cfg.params, road, sc); break;
    case SimModel::twin: run = simulate_twin(cfg.params, road, sc); break;
    case SimModel::active: run = simulate_active(cfg.params, road, cfg.gains, sc); break;
  }
  const PerformanceIndex idx = performance_index(run, cfg.params, road, cfg.settle());

  const std::string name = model_name(model);
  write_sim_csv(dir / ("sim_" + name + ".csv"), prov, run);
  write_metrics_csv(dir / ("metrics_" + name + ".csv"), prov, idx);
  std::cout << name << ": acc_rms=" << format_double(idx.acc_rms)
            << " sws_rms=" << format_double(idx.sws_rms)
            << " dtl_rms=" << format_double(idx.dtl_rms) << '\n';
}

void cmd_optimize(const ExperimentConfig& cfg) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto prov = provenance_lines(cfg);
  const RoadTrace road = build_road(cfg);
  const OptimizationResult result = run_optimize_stage(cfg, road, dir, prov);
  std::cout << "best cost " << format_double(result.best_cost) << " at c1="
            << format_double(result.c1) << " k1=" << format_double(result.k1)
            << " c2=" << format_double(result.c2) << " k2=" << format_double(result.k2) << " ("
            << result.evaluations << " evaluations)\n";
}

void cmd_tune(const ExperimentConfig& cfg, TunePlant plant) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto prov = provenance_lines(cfg);
  const RoadTrace road = build_road(cfg);
  SuspensionParams p = cfg.params;
  const char* plant_name = "nominal";
  if (plant == TunePlant::optimized) {
    p = load_optimized_params(cfg, dir);
    plant_name = "optimized";
  }
  const TuneResult result = run_tune_stage(cfg, p, plant_name, road, dir, prov);
  std::cout << "tuned gains kp=" << format_double(result.gains.kp)
            << " ki=" << format_double(result.gains.ki) << " cost "
            << format_double(result.cost) << " vs open loop 1 (" << plant_name << " plant)\n";
}

void cmd_compare(const ExperimentConfig& cfg, bool inline_stages) {
  const fs::path dir = ensure_out_dir(cfg);
  const auto prov = provenance_lines(cfg);
  const RoadTrace road = build_road(cfg);
  const SimConfig sc = cfg.sim_config();
  const double settle = cfg.settle();
  write_road_csv(dir / "road.csv", prov, road);

  // Everything is normalized by the twin plant at nominal parameters on this very road
  // realization — the same baseline the optimizer uses.
  const SimOutput nominal_run = simulate_twin(cfg.params, road, sc);
  const PerformanceIndex base = performance_index(nominal_run, cfg.params, road, settle);
  const bool degenerate = !(base.acc_rms > 0.0 && base.sws_rms > 0.0 && base.dtl_rms > 0.0);

  SuspensionParams opt_params = cfg.params;
  PIGains gains{0.0, 0.0};
  if (!degenerate) {
    if (inline_stages) {
      const OptimizationResult opt = run_optimize_stage(cfg, road, dir, prov);
      opt_params.c1 = opt.c1;
      opt_params.k1 = opt.k1;
      opt_params.c2 = opt.c2;
      opt_params.k2 = opt.k2;
      gains = run_tune_stage(cfg, opt_params, "optimized", road, dir, prov).gains;
    } else {
      opt_params = load_optimized_params(cfg, dir);
      gains = load_tuned_gains(dir);
    }
  }

  const SimOutput run_passive = simulate_passive(cfg.params, road, sc);
  const SimOutput run_twin = simulate_twin(opt_params, road, sc);
  const SimOutput run_active = simulate_active(opt_params, road, gains, sc);

  const PerformanceIndex idx_passive = performance_index(run_passive, cfg.params, road, settle);
  const PerformanceIndex idx_twin = performance_index(run_twin, opt_params, road, settle);
  const PerformanceIndex idx_active = performance_index(run_active, opt_params, road, settle);

  write_sim_csv(dir / "sim_passive.csv", prov, run_passive);
  write_sim_csv(dir / "sim_twin.csv", prov, run_twin);
  write_sim_csv(dir / "sim_active.csv", prov, run_active);

  CsvWriter summary(dir / "summary.csv", prov, "model,acc_rms,sws_rms,dtl_rms,cost");
  const struct {
    const char* name;
    const PerformanceIndex& idx;
  } rows[] = {{"passive", idx_passive}, {"twin", idx_twin}, {"active", idx_active}};
  for (const auto& r : rows) {
    summary.row(r.name, {r.idx.acc_rms, r.idx.sws_rms, r.idx.dtl_rms,
                         cost_allowing_degenerate(r.idx, base, cfg.weights)});
  }
  summary.close();
  std::cout << "wrote " << (dir / "summary.csv").string() << '\n';
}

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"quarter-car suspension simulation and optimization toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  app.add_option("--config", config_path, "JSON config file (built-in defaults when omitted)");
  std::optional<std::uint64_t> seed_override;
  app.add_option("--seed", seed_override, "master seed override");
  std::optional<std::string> road_override;
  app.add_option("--road", road_override, "road case override")
      ->check(CLI::IsMember({"random", "step"}));
  std::optional<std::string> out_override;
  app.add_option("--out", out_override, "output directory override");

  CLI::App* road_cmd =
      app.add_subcommand("road", "generate the configured road profile and its spectrum");
  std::optional<double> duration_override;
  road_cmd->add_option("--duration", duration_override, "horizon override [s]");

  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "integrate one plant model over the configured road");
  std::string model_arg;
  sim_cmd->add_option("model", model_arg, "plant model")
      ->required()
      ->check(CLI::IsMember({"passive", "twin", "active"}));

  CLI::App* opt_cmd = app.add_subcommand(
      "optimize", "evolution-strategy search over (c1, k1, c2, k2) minimizing the weighted cost");

  CLI::App* tune_cmd = app.add_subcommand("tune", "grid-search the PI integral gain");
  std::string plant_arg = "nominal";
  tune_cmd->add_option("--plant", plant_arg, "plant parameters to tune against")
      ->check(CLI::IsMember({"nominal", "optimized"}));

  CLI::App* cmp_cmd = app.add_subcommand(
      "compare", "passive vs optimized twin vs PI-active on one shared road realization");
  std::string stages_arg = "inline";
  cmp_cmd->add_option("--stages", stages_arg,
                      "run optimize/tune inline or load their artifacts from the output dir")
      ->check(CLI::IsMember({"inline", "artifacts"}));

  for (CLI::App* sub : {road_cmd, sim_cmd, opt_cmd, tune_cmd, cmp_cmd}) {
    sub->fallthrough();
  }

  std::vector<const char*> argv;
  argv.reserve(args.size() + 1);
  argv.push_back("qcar");
  for (const std::string& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    ExperimentConfig cfg =
        config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (seed_override) cfg.seed = *seed_override;
    if (road_override) {
      cfg.road.kind = *road_override == "step" ? RoadCase::step : RoadCase::random;
    }
    if (out_override) cfg.out_dir = *out_override;
    cfg.validate();

    if (road_cmd->parsed()) {
      cmd_road(cfg, duration_override);
    } else if (sim_cmd->parsed()) {
      const SimModel model = model_arg == "passive"  ? SimModel::passive
                             : model_arg == "twin"   ? SimModel::twin
                                                     : SimModel::active;
      cmd_simulate(cfg, model);
    } else if (opt_cmd->parsed()) {
      cmd_optimize(cfg);
    } else if (tune_cmd->parsed()) {
      cmd_tune(cfg, plant_arg == "optimized" ? TunePlant::optimized : TunePlant::nominal);
    } else if (cmp_cmd->parsed()) {
      cmd_compare(cfg, stages_arg == "inline");
    }
    return 0;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args;
  args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run_cli(args);
}

}  // namespace qcar
