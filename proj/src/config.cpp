#include "qcar/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

#include "qcar/errors.hpp"
#include "qcar/rng.hpp"

namespace qcar {

namespace {

using nlohmann::json;

void check_keys(const json& obj, const char* section, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) {
    throw ConfigError(std::string("config: section '") + section + "' must be an object");
  }
  const std::set<std::string> allowed_set(allowed.begin(), allowed.end());
  for (const auto& item : obj.items()) {
    if (!allowed_set.count(item.key())) {
      throw ConfigError(std::string("config: unknown key '") + item.key() + "' in section '" +
                        section + "'");
    }
  }
}

template <typename T>
void read_field(const json& obj, const char* section, const char* key, T& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;  // optional: keep the default
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ConfigError(std::string("config: key '") + section + "." + key +
                      "' has the wrong type");
  }
}

void read_range(const json& obj, const char* section, const char* key, Range& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() || !(*it)[1].is_number()) {
    throw ConfigError(std::string("config: key '") + section + "." + key +
                      "' must be a [lower, upper] pair");
  }
  out.lo = (*it)[0].get<double>();
  out.hi = (*it)[1].get<double>();
}

}  // namespace

void ExperimentConfig::validate() const {
  try {
    params.validate();
    weights.validate();
    bounds.validate();
    es.validate();
    tune.validate();
    SimConfig{sim.dt, sim.duration_random}.validate();
    SimConfig{sim.dt, sim.duration_step}.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (road.kind == RoadCase::random) {
    try {
      random_spec(0).validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: road: ") + e.what());
    }
  } else {
    try {
      step_spec().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: road: ") + e.what());
    }
    if (!(duration() > road.step_time)) {
      throw ConfigError("config: sim.duration_step must exceed road.step_time");
    }
  }
  if (!(std::isfinite(sim.settle_random) && sim.settle_random >= 0.0) ||
      sim.settle_random >= sim.duration_random) {
    throw ConfigError("config: sim.settle_random must be in [0, duration_random)");
  }
  if (!(std::isfinite(sim.settle_step) && sim.settle_step >= 0.0) ||
      sim.settle_step >= sim.duration_step) {
    throw ConfigError("config: sim.settle_step must be in [0, duration_step)");
  }
  if (!(std::isfinite(gains.kp) && std::isfinite(gains.ki))) {
    throw ConfigError("config: gains.kp and gains.ki must be finite");
  }
  if (out_dir.empty()) {
    throw ConfigError("config: out_dir must not be empty");
  }
}

RandomRoadSpec ExperimentConfig::random_spec(std::uint64_t road_seed) const {
  RandomRoadSpec spec;
  spec.road_class = IsoRoadClass::from_label(road.road_class);
  spec.v = road.v;
  spec.n0 = road.n0;
  spec.f0 = road.f0;
  spec.waviness = road.waviness;
  spec.seed = road_seed;
  spec.dt = sim.dt;
  return spec;
}

json ExperimentConfig::to_json() const {
  json j;
  j["params"] = {{"ms", params.ms}, {"mu", params.mu}, {"c1", params.c1}, {"k1", params.k1},
                 {"c2", params.c2}, {"k2", params.k2}, {"kt", params.kt}};
  j["road"] = {{"kind", road.kind == RoadCase::random ? "random" : "step"},
               {"class", std::string(1, road.road_class)},
               {"v", road.v},
               {"n0", road.n0},
               {"f0", road.f0},
               {"waviness", road.waviness},
               {"step_height", road.step_height},
               {"step_time", road.step_time}};
  j["sim"] = {{"dt", sim.dt},
              {"duration_random", sim.duration_random},
              {"duration_step", sim.duration_step},
              {"settle_random", sim.settle_random},
              {"settle_step", sim.settle_step}};
  j["weights"] = {{"acc", weights.acc}, {"dtl", weights.dtl}, {"sws", weights.sws}};
  j["bounds"] = {{"c1", {bounds.c1.lo, bounds.c1.hi}},
                 {"k1", {bounds.k1.lo, bounds.k1.hi}},
                 {"c2", {bounds.c2.lo, bounds.c2.hi}},
                 {"k2", {bounds.k2.lo, bounds.k2.hi}}};
  j["es"] = {{"mu", es.mu},
             {"lambda", es.lambda},
             {"iterations", es.iterations},
             {"sigma0", es.sigma0},
             {"threads", es.threads}};
  j["tune"] = {{"ki_min", tune.ki_min},
               {"ki_max", tune.ki_max},
               {"points", tune.points},
               {"kp", tune.kp}};
  j["gains"] = {{"kp", gains.kp}, {"ki", gains.ki}};
  j["seed"] = seed;
  j["out_dir"] = out_dir;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  check_keys(j, "<root>",
             {"params", "road", "sim", "weights", "bounds", "es", "tune", "gains", "seed",
              "out_dir"});

  if (j.contains("params")) {
    const json& sec = j.at("params");
    check_keys(sec, "params", {"ms", "mu", "c1", "k1", "c2", "k2", "kt"});
    read_field(sec, "params", "ms", cfg.params.ms);
    read_field(sec, "params", "mu", cfg.params.mu);
    read_field(sec, "params", "c1", cfg.params.c1);
    read_field(sec, "params", "k1", cfg.params.k1);
    read_field(sec, "params", "c2", cfg.params.c2);
    read_field(sec, "params", "k2", cfg.params.k2);
    read_field(sec, "params", "kt", cfg.params.kt);
  }
  if (j.contains("road")) {
    const json& sec = j.at("road");
    check_keys(sec, "road",
               {"kind", "class", "v", "n0", "f0", "waviness", "step_height", "step_time"});
    std::string kind = "random";
    read_field(sec, "road", "kind", kind);
    if (kind == "random") {
      cfg.road.kind = RoadCase::random;
    } else if (kind == "step") {
      cfg.road.kind = RoadCase::step;
    } else {
      throw ConfigError("config: road.kind must be 'random' or 'step', got '" + kind + "'");
    }
    std::string label(1, cfg.road.road_class);
    read_field(sec, "road", "class", label);
    try {
      cfg.road.road_class = IsoRoadClass::from_label(label).label;
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("config: road.class: ") + e.what());
    }
    read_field(sec, "road", "v", cfg.road.v);
    read_field(sec, "road", "n0", cfg.road.n0);
    read_field(sec, "road", "f0", cfg.road.f0);
    read_field(sec, "road", "waviness", cfg.road.waviness);
    read_field(sec, "road", "step_height", cfg.road.step_height);
    read_field(sec, "road", "step_time", cfg.road.step_time);
  }
  if (j.contains("sim")) {
    const json& sec = j.at("sim");
    check_keys(sec, "sim",
               {"dt", "duration_random", "duration_step", "settle_random", "settle_step"});
    read_field(sec, "sim", "dt", cfg.sim.dt);
    read_field(sec, "sim", "duration_random", cfg.sim.duration_random);
    read_field(sec, "sim", "duration_step", cfg.sim.duration_step);
    read_field(sec, "sim", "settle_random", cfg.sim.settle_random);
    read_field(sec, "sim", "settle_step", cfg.sim.settle_step);
  }
  if (j.contains("weights")) {
    const json& sec = j.at("weights");
    check_keys(sec, "weights", {"acc", "dtl", "sws"});
    read_field(sec, "weights", "acc", cfg.weights.acc);
    read_field(sec, "weights", "dtl", cfg.weights.dtl);
    read_field(sec, "weights", "sws", cfg.weights.sws);
  }
  if (j.contains("bounds")) {
    const json& sec = j.at("bounds");
    check_keys(sec, "bounds", {"c1", "k1", "c2", "k2"});
    read_range(sec, "bounds", "c1", cfg.bounds.c1);
    read_range(sec, "bounds", "k1", cfg.bounds.k1);
    read_range(sec, "bounds", "c2", cfg.bounds.c2);
    read_range(sec, "bounds", "k2", cfg.bounds.k2);
  }
  if (j.contains("es")) {
    const json& sec = j.at("es");
    check_keys(sec, "es", {"mu", "lambda", "iterations", "sigma0", "threads"});
    read_field(sec, "es", "mu", cfg.es.mu);
    read_field(sec, "es", "lambda", cfg.es.lambda);
    read_field(sec, "es", "iterations", cfg.es.iterations);
    read_field(sec, "es", "sigma0", cfg.es.sigma0);
    read_field(sec, "es", "threads", cfg.es.threads);
  }
  if (j.contains("tune")) {
    const json& sec = j.at("tune");
    check_keys(sec, "tune", {"ki_min", "ki_max", "points", "kp"});
    read_field(sec, "tune", "ki_min", cfg.tune.ki_min);
    read_field(sec, "tune", "ki_max", cfg.tune.ki_max);
    read_field(sec, "tune", "points", cfg.tune.points);
    read_field(sec, "tune", "kp", cfg.tune.kp);
  }
  if (j.contains("gains")) {
    const json& sec = j.at("gains");
    check_keys(sec, "gains", {"kp", "ki"});
    read_field(sec, "gains", "kp", cfg.gains.kp);
    read_field(sec, "gains", "ki", cfg.gains.ki);
  }
  read_field(j, "<root>", "seed", cfg.seed);
  read_field(j, "<root>", "out_dir", cfg.out_dir);
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot read config file '" + path.string() + "'");
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config file '" + path.string() + "' is not valid JSON: " + e.what());
  }
  ExperimentConfig cfg = ExperimentConfig::from_json(j);
  cfg.validate();
  return cfg;
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  return fnv1a64(cfg.to_json().dump());
}

}  // namespace qcar
