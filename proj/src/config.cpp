#include "rrtlab/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <json.hpp>
#include <map>
#include <set>

namespace rrtlab {

using nlohmann::json;

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{
      "plan",          "fig2-degrees",   "nn-probability", "voronoi-decay",
      "selection-bias", "cost-convergence", "fit"};
  return names;
}

ExperimentConfig default_config(const std::string& experiment) {
  ExperimentConfig cfg;
  cfg.experiment = experiment;

  const auto unit_square = [&]() {
    cfg.workspace.space = SpaceSpec{SpaceType::holonomic, 2, 0.1};
    cfg.workspace.lo = {0.0, 0.0};
    cfg.workspace.hi = {1.0, 1.0};
    cfg.planner.system.type = SystemType::holonomic;
    cfg.planner.system.eps = 0.05;
  };

  if (experiment == "plan") {
    unit_square();
    cfg.planner.start = {0.1, 0.1};
    cfg.planner.K = 5000;
    cfg.planner.goal_bias = 0.05;
    cfg.planner.stop_on_goal = true;
    cfg.goal = GoalRegion{{0.9, 0.9}, 0.05};
  } else if (experiment == "fig2-degrees") {
    // side-20 square, forward-only car starting at the center
    cfg.workspace.space = SpaceSpec{SpaceType::car, 2, 0.1};
    cfg.workspace.lo = {0.0, 0.0};
    cfg.workspace.hi = {20.0, 20.0};
    cfg.planner.system.type = SystemType::car;
    cfg.planner.start = {10.0, 10.0, 0.0};
    cfg.planner.K = 20000;
    cfg.planner.stop_on_goal = false;
    cfg.params.checkpoints = {5000, 10000, 15000, 20000};
  } else if (experiment == "nn-probability") {
    unit_square();
    cfg.planner.start = {0.5, 0.5};
  } else if (experiment == "voronoi-decay") {
    unit_square();
    cfg.planner.start = {0.5, 0.5};
    cfg.replicates = 100;
  } else if (experiment == "selection-bias") {
    unit_square();
    cfg.planner.start = {0.5, 0.5};
    cfg.planner.stop_on_goal = false;
  } else if (experiment == "cost-convergence") {
    unit_square();
    cfg.planner.start = {0.1, 0.1};
    cfg.planner.stop_on_goal = false;
    cfg.planner.nn_backend = NnBackend::kdtree;  // exact-equivalent, much faster here
    cfg.goal = GoalRegion{{0.9, 0.9}, 0.05};
    cfg.replicates = 20;
    cfg.params.checkpoints = {1000, 2000, 5000, 10000, 20000, 50000};
    cfg.planner.K = 50000;
  } else if (experiment == "fit") {
    unit_square();
    cfg.planner.start = {0.5, 0.5};
  } else {
    throw ConfigParseError("experiment", "unknown experiment \"" + experiment +
                                             "\"; expected one of: plan, "
                                             "fig2-degrees, nn-probability, "
                                             "voronoi-decay, selection-bias, "
                                             "cost-convergence, fit");
  }
  return cfg;
}

namespace {

int levenshtein(const std::string& a, const std::string& b) {
  std::vector<int> prev(b.size() + 1), cur(b.size() + 1);
  for (size_t j = 0; j <= b.size(); ++j) prev[j] = static_cast<int>(j);
  for (size_t i = 1; i <= a.size(); ++i) {
    cur[0] = static_cast<int>(i);
    for (size_t j = 1; j <= b.size(); ++j) {
      const int sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

// well-known aliases from other planners' config dialects
const std::map<std::string, std::string>& alias_map() {
  static const std::map<std::string, std::string> m{
      {"stepsize", "eps"},        {"step_size", "eps"},
      {"step", "eps"},            {"iterations", "K"},
      {"iters", "K"},             {"max_iterations", "K"},
      {"bias", "goal_bias"},      {"theta_weight", "w_theta"},
      {"angular_weight", "w_theta"}, {"output", "out_dir"},
      {"outdir", "out_dir"},      {"out", "out_dir"},
      {"samples", "mc_samples"},  {"backend", "nn_backend"},
      {"wheelbase", "L"},         {"delta_t", "dt"},
      {"reps", "replicates"}};
  return m;
}

std::string suggest(const std::string& key, const std::set<std::string>& known) {
  const auto alias = alias_map().find(key);
  if (alias != alias_map().end() && known.count(alias->second))
    return alias->second;
  std::string best;
  int best_d = 1 + std::max<int>(2, static_cast<int>(key.size()) / 3);
  for (const std::string& k : known) {
    const int d = levenshtein(key, k);
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  return best;
}

[[noreturn]] void unknown_key(const std::string& scope, const std::string& key,
                              const std::set<std::string>& known) {
  std::string msg = "unknown key \"" + key + "\"" +
                    (scope.empty() ? "" : " in " + scope);
  const std::string s = suggest(key, known);
  if (!s.empty()) msg += "; did you mean \"" + s + "\"?";
  throw ConfigParseError(scope.empty() ? key : scope + "." + key, msg);
}

void check_keys(const json& j, const std::string& scope,
                const std::set<std::string>& known) {
  for (const auto& item : j.items())
    if (!known.count(item.key())) unknown_key(scope, item.key(), known);
}

[[noreturn]] void type_error(const std::string& key, const char* want) {
  throw ConfigParseError(key, "key \"" + key + "\" must be " + want);
}

double get_num(const json& j, const std::string& key, double cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_number()) type_error(key, "a number");
  return j[key].get<double>();
}

long get_long(const json& j, const std::string& key, long cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_number_integer()) type_error(key, "an integer");
  return j[key].get<long>();
}

std::uint64_t get_u64(const json& j, const std::string& key, std::uint64_t cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_number_unsigned() && !j[key].is_number_integer())
    type_error(key, "a non-negative integer");
  if (j[key].is_number_integer() && j[key].get<long long>() < 0)
    type_error(key, "a non-negative integer");
  return j[key].get<std::uint64_t>();
}

bool get_bool(const json& j, const std::string& key, bool cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_boolean()) type_error(key, "a boolean");
  return j[key].get<bool>();
}

std::string get_str(const json& j, const std::string& key, std::string cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_string()) type_error(key, "a string");
  return j[key].get<std::string>();
}

std::vector<double> get_dvec(const json& j, const std::string& key,
                             std::vector<double> cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_array()) type_error(key, "an array of numbers");
  std::vector<double> out;
  for (const auto& v : j[key]) {
    if (!v.is_number()) type_error(key, "an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

std::vector<long> get_lvec(const json& j, const std::string& key,
                           std::vector<long> cur) {
  if (!j.contains(key)) return cur;
  if (!j[key].is_array()) type_error(key, "an array of integers");
  std::vector<long> out;
  for (const auto& v : j[key]) {
    if (!v.is_number_integer()) type_error(key, "an array of integers");
    out.push_back(v.get<long>());
  }
  return out;
}

std::vector<int> get_ivec(const json& j, const std::string& key,
                          std::vector<int> cur) {
  std::vector<long> longs = get_lvec(j, key, std::vector<long>(cur.begin(), cur.end()));
  return std::vector<int>(longs.begin(), longs.end());
}

void parse_workspace(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "workspace",
             {"type", "dim", "lo", "hi", "w_theta", "obstacles"});
  const std::string type = get_str(
      j, "type", cfg.workspace.space.type == SpaceType::car ? "car" : "holonomic");
  if (type == "car") {
    cfg.workspace.space.type = SpaceType::car;
    cfg.planner.system.type = SystemType::car;
  } else if (type == "holonomic") {
    cfg.workspace.space.type = SpaceType::holonomic;
    cfg.planner.system.type = SystemType::holonomic;
  } else {
    throw ConfigParseError("workspace.type",
                           "workspace.type must be \"holonomic\" or \"car\"");
  }
  cfg.workspace.space.dim =
      static_cast<int>(get_long(j, "dim", cfg.workspace.space.dim));
  cfg.workspace.space.w_theta = get_num(j, "w_theta", cfg.workspace.space.w_theta);
  cfg.workspace.lo = get_dvec(j, "lo", cfg.workspace.lo);
  cfg.workspace.hi = get_dvec(j, "hi", cfg.workspace.hi);
  if (j.contains("obstacles")) {
    if (!j["obstacles"].is_array()) type_error("workspace.obstacles", "an array");
    cfg.workspace.obstacles.clear();
    for (const auto& jo : j["obstacles"]) {
      if (!jo.is_object()) type_error("workspace.obstacles", "an array of objects");
      check_keys(jo, "workspace.obstacles[]",
                 {"shape", "lo", "hi", "center", "radius"});
      const std::string shape = get_str(jo, "shape", "");
      if (shape == "box") {
        cfg.workspace.obstacles.push_back(Obstacle::make_box(
            get_dvec(jo, "lo", {}), get_dvec(jo, "hi", {})));
      } else if (shape == "disc") {
        cfg.workspace.obstacles.push_back(Obstacle::make_disc(
            get_dvec(jo, "center", {}), get_num(jo, "radius", 0)));
      } else {
        throw ConfigParseError("workspace.obstacles[].shape",
                               "obstacle shape must be \"box\" or \"disc\"");
      }
    }
  }
}

void parse_system(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "system",
             {"eps", "L", "v_set", "phi_set", "dt", "substeps", "random_inputs"});
  SystemSpec& sys = cfg.planner.system;
  sys.eps = get_num(j, "eps", sys.eps);
  sys.car.L = get_num(j, "L", sys.car.L);
  sys.car.v_set = get_dvec(j, "v_set", sys.car.v_set);
  sys.car.phi_set = get_dvec(j, "phi_set", sys.car.phi_set);
  sys.ispec.dt = get_num(j, "dt", sys.ispec.dt);
  sys.ispec.substeps = static_cast<int>(get_long(j, "substeps", sys.ispec.substeps));
  sys.random_inputs = get_bool(j, "random_inputs", sys.random_inputs);
}

void parse_planner(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "planner",
             {"K", "goal_bias", "start", "nn_backend", "stop_on_goal",
              "repeated_extend", "resolution"});
  PlannerConfig& p = cfg.planner;
  p.K = get_long(j, "K", p.K);
  p.goal_bias = get_num(j, "goal_bias", p.goal_bias);
  p.start = get_dvec(j, "start", p.start);
  if (j.contains("nn_backend")) {
    const std::string b = get_str(j, "nn_backend", "");
    try {
      p.nn_backend = nn_backend_from_string(b);
    } catch (const std::invalid_argument&) {
      throw ConfigParseError("planner.nn_backend",
                             "nn_backend must be \"linear\", \"kdtree\" or "
                             "\"random\" (got \"" + b + "\")");
    }
  }
  p.stop_on_goal = get_bool(j, "stop_on_goal", p.stop_on_goal);
  p.repeated_extend = get_bool(j, "repeated_extend", p.repeated_extend);
  p.resolution = get_num(j, "resolution", p.resolution);
}

void parse_goal(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "goal", {"center", "radius"});
  GoalRegion g = cfg.goal.value_or(GoalRegion{});
  g.center = get_dvec(j, "center", g.center);
  g.radius = get_num(j, "radius", g.radius);
  cfg.goal = g;
}

void parse_params(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "params",
             {"checkpoints", "n", "d", "trials", "n_initial", "n_insertions",
              "events", "tracked_ids", "mc_samples", "mode",
              "max_draws_per_event", "n_nodes", "window", "k_min", "input"});
  ExperimentParams& p = cfg.params;
  p.checkpoints = get_lvec(j, "checkpoints", p.checkpoints);
  p.nn_n = static_cast<int>(get_long(j, "n", p.nn_n));
  p.nn_d = static_cast<int>(get_long(j, "d", p.nn_d));
  p.nn_trials = get_long(j, "trials", p.nn_trials);
  p.decay.n_initial = static_cast<int>(get_long(j, "n_initial", p.decay.n_initial));
  p.decay.n_insertions = get_long(j, "n_insertions", p.decay.n_insertions);
  p.decay.events = static_cast<int>(get_long(j, "events", p.decay.events));
  p.decay.tracked_ids = get_ivec(j, "tracked_ids", p.decay.tracked_ids);
  const long mc = get_long(
      j, "mc_samples",
      0);  // shared by decay and selection-bias; 0 means "not given"
  if (mc > 0) {
    p.decay.mc_samples = mc;
    p.selbias.mc_samples = mc;
  } else if (j.contains("mc_samples")) {
    type_error("params.mc_samples", "a positive integer");
  }
  if (j.contains("mode")) {
    const std::string m = get_str(j, "mode", "");
    if (m == "conditioned") {
      p.decay.conditioned = true;
    } else if (m == "uniform") {
      p.decay.conditioned = false;
    } else {
      throw ConfigParseError("params.mode",
                             "mode must be \"conditioned\" or \"uniform\"");
    }
  }
  p.decay.max_draws_per_event =
      get_long(j, "max_draws_per_event", p.decay.max_draws_per_event);
  p.selbias.n_nodes = static_cast<int>(get_long(j, "n_nodes", p.selbias.n_nodes));
  p.selbias.window = get_long(j, "window", p.selbias.window);
  p.fit_k_min = static_cast<int>(get_long(j, "k_min", p.fit_k_min));
  p.fit_input = get_str(j, "input", p.fit_input);
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text,
                              const std::optional<std::string>& experiment_override) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigParseError("", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object())
    throw ConfigParseError("", "config document must be a JSON object");

  check_keys(j, "",
             {"experiment", "seed", "replicates", "out_dir", "workspace",
              "system", "planner", "goal", "params"});

  std::string experiment = get_str(j, "experiment", "");
  if (experiment_override) {
    if (!experiment.empty() && experiment != *experiment_override)
      throw ConfigParseError(
          "experiment", "config names experiment \"" + experiment +
                            "\" but \"" + *experiment_override + "\" was requested");
    experiment = *experiment_override;
  }
  if (experiment.empty()) experiment = "plan";

  ExperimentConfig cfg = default_config(experiment);  // throws on unknown name
  cfg.seed = get_u64(j, "seed", cfg.seed);
  cfg.replicates = get_long(j, "replicates", cfg.replicates);
  cfg.out_dir = get_str(j, "out_dir", cfg.out_dir);
  if (j.contains("workspace")) {
    if (!j["workspace"].is_object()) type_error("workspace", "an object");
    parse_workspace(j["workspace"], cfg);
  }
  if (j.contains("system")) {
    if (!j["system"].is_object()) type_error("system", "an object");
    parse_system(j["system"], cfg);
  }
  if (j.contains("planner")) {
    if (!j["planner"].is_object()) type_error("planner", "an object");
    parse_planner(j["planner"], cfg);
  }
  if (j.contains("goal")) {
    if (j["goal"].is_null()) {
      cfg.goal.reset();
    } else {
      if (!j["goal"].is_object()) type_error("goal", "an object or null");
      parse_goal(j["goal"], cfg);
    }
  }
  if (j.contains("params")) {
    if (!j["params"].is_object()) type_error("params", "an object");
    parse_params(j["params"], cfg);
  }
  return cfg;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  j["experiment"] = cfg.experiment;
  j["seed"] = cfg.seed;
  j["replicates"] = cfg.replicates;
  j["out_dir"] = cfg.out_dir;

  json ws;
  ws["type"] = cfg.workspace.space.type == SpaceType::car ? "car" : "holonomic";
  ws["dim"] = cfg.workspace.space.dim;
  ws["w_theta"] = cfg.workspace.space.w_theta;
  ws["lo"] = cfg.workspace.lo;
  ws["hi"] = cfg.workspace.hi;
  json obstacles = json::array();
  for (const Obstacle& o : cfg.workspace.obstacles) {
    json jo;
    if (o.shape == Obstacle::Shape::box) {
      jo["shape"] = "box";
      jo["lo"] = o.lo;
      jo["hi"] = o.hi;
    } else {
      jo["shape"] = "disc";
      jo["center"] = o.center;
      jo["radius"] = o.radius;
    }
    obstacles.push_back(jo);
  }
  ws["obstacles"] = obstacles;
  j["workspace"] = ws;

  json sys;
  sys["eps"] = cfg.planner.system.eps;
  sys["L"] = cfg.planner.system.car.L;
  sys["v_set"] = cfg.planner.system.car.v_set;
  sys["phi_set"] = cfg.planner.system.car.phi_set;
  sys["dt"] = cfg.planner.system.ispec.dt;
  sys["substeps"] = cfg.planner.system.ispec.substeps;
  sys["random_inputs"] = cfg.planner.system.random_inputs;
  j["system"] = sys;

  json pl;
  pl["K"] = cfg.planner.K;
  pl["goal_bias"] = cfg.planner.goal_bias;
  pl["start"] = cfg.planner.start;
  pl["nn_backend"] = to_string(cfg.planner.nn_backend);
  pl["stop_on_goal"] = cfg.planner.stop_on_goal;
  pl["repeated_extend"] = cfg.planner.repeated_extend;
  pl["resolution"] = cfg.planner.resolution;
  j["planner"] = pl;

  if (cfg.goal) {
    json g;
    g["center"] = cfg.goal->center;
    g["radius"] = cfg.goal->radius;
    j["goal"] = g;
  }

  json pr;
  pr["checkpoints"] = cfg.params.checkpoints;
  pr["n"] = cfg.params.nn_n;
  pr["d"] = cfg.params.nn_d;
  pr["trials"] = cfg.params.nn_trials;
  pr["n_initial"] = cfg.params.decay.n_initial;
  pr["n_insertions"] = cfg.params.decay.n_insertions;
  pr["events"] = cfg.params.decay.events;
  pr["tracked_ids"] = cfg.params.decay.tracked_ids;
  pr["mc_samples"] = cfg.params.decay.mc_samples;
  pr["mode"] = cfg.params.decay.conditioned ? "conditioned" : "uniform";
  pr["max_draws_per_event"] = cfg.params.decay.max_draws_per_event;
  pr["n_nodes"] = cfg.params.selbias.n_nodes;
  pr["window"] = cfg.params.selbias.window;
  pr["k_min"] = cfg.params.fit_k_min;
  pr["input"] = cfg.params.fit_input;
  j["params"] = pr;

  return j.dump(2) + "\n";
}

namespace {

void check_state_size(std::vector<Diagnostic>& out, const std::string& key,
                      const State& s, const SpaceSpec& space) {
  if (static_cast<int>(s.size()) != space.coord_count())
    out.push_back({key, key + " must have " + std::to_string(space.coord_count()) +
                            " coordinates for this space"});
}

}  // namespace

std::vector<Diagnostic> validate(const ExperimentConfig& cfg) {
  std::vector<Diagnostic> out;
  const SpaceSpec& space = cfg.workspace.space;

  if (std::find(experiment_names().begin(), experiment_names().end(),
                cfg.experiment) == experiment_names().end())
    out.push_back({"experiment", "unknown experiment \"" + cfg.experiment + "\""});
  if (cfg.replicates < 1)
    out.push_back({"replicates", "replicates must be >= 1"});
  if (cfg.out_dir.empty())
    out.push_back({"out_dir", "out_dir must not be empty"});

  // workspace
  if (space.dim < 1) out.push_back({"workspace.dim", "dim must be >= 1"});
  const size_t want_axes = static_cast<size_t>(space.position_count());
  if (cfg.workspace.lo.size() != want_axes || cfg.workspace.hi.size() != want_axes) {
    out.push_back({"workspace.lo",
                   "bounds need exactly " + std::to_string(want_axes) +
                       " axes for this space"});
  } else {
    for (size_t i = 0; i < want_axes; ++i)
      if (!(cfg.workspace.lo[i] < cfg.workspace.hi[i])) {
        out.push_back({"workspace.lo", "bounds must satisfy lo < hi on every axis"});
        break;
      }
  }
  if (!(space.w_theta > 0))
    out.push_back({"workspace.w_theta", "w_theta must be positive"});
  for (size_t i = 0; i < cfg.workspace.obstacles.size(); ++i) {
    const Obstacle& o = cfg.workspace.obstacles[i];
    const std::string key = "workspace.obstacles[" + std::to_string(i) + "]";
    if (o.shape == Obstacle::Shape::box) {
      if (o.lo.size() != want_axes || o.hi.size() != want_axes)
        out.push_back({key, "box needs lo/hi with one entry per position axis"});
    } else {
      if (o.center.size() != want_axes)
        out.push_back({key, "disc center needs one entry per position axis"});
      if (!(o.radius > 0)) out.push_back({key, "disc radius must be positive"});
    }
  }

  // planner + system
  if (cfg.planner.K < 1) out.push_back({"planner.K", "K must be >= 1"});
  if (cfg.planner.goal_bias < 0 || cfg.planner.goal_bias > 1)
    out.push_back({"goal_bias", "goal_bias must lie in [0, 1]"});
  if (cfg.planner.resolution < 0)
    out.push_back({"planner.resolution", "resolution must be >= 0"});
  check_state_size(out, "planner.start", cfg.planner.start, space);
  if (cfg.planner.system.type == SystemType::holonomic) {
    if (!(cfg.planner.system.eps > 0))
      out.push_back({"system.eps", "eps must be positive"});
  } else {
    const CarModel& car = cfg.planner.system.car;
    if (!(car.L > 0)) out.push_back({"system.L", "wheelbase L must be positive"});
    if (car.v_set.empty()) out.push_back({"system.v_set", "v_set must be nonempty"});
    if (car.phi_set.empty())
      out.push_back({"system.phi_set", "phi_set must be nonempty"});
    for (double phi : car.phi_set)
      if (!(std::fabs(phi) < M_PI / 2)) {
        out.push_back({"system.phi_set",
                       "steering angles must satisfy |phi| < pi/2 (tan must stay finite)"});
        break;
      }
    if (car.v_set.size() * car.phi_set.size() > 64)
      out.push_back({"system.v_set",
                     "control set size is limited to 64 inputs (v_set x phi_set)"});
    if (!(cfg.planner.system.ispec.dt > 0))
      out.push_back({"system.dt", "dt must be positive"});
    if (cfg.planner.system.ispec.substeps < 1)
      out.push_back({"system.substeps", "substeps must be >= 1"});
  }

  // goal
  if (cfg.goal) {
    check_state_size(out, "goal.center", cfg.goal->center, space);
    if (!(cfg.goal->radius > 0))
      out.push_back({"goal.radius", "goal radius must be positive"});
    if (static_cast<int>(cfg.goal->center.size()) == space.coord_count() &&
        cfg.workspace.lo.size() == want_axes &&
        !in_free_space(cfg.goal->center, cfg.workspace))
      out.push_back({"goal.center", "goal center must lie in free space"});
  }
  if ((cfg.experiment == "plan" || cfg.experiment == "cost-convergence") &&
      !cfg.goal)
    out.push_back({"goal", "experiment \"" + cfg.experiment + "\" needs a goal"});

  // single-tree experiments produce one artifact set
  if ((cfg.experiment == "plan" || cfg.experiment == "fig2-degrees" ||
       cfg.experiment == "fit") &&
      cfg.replicates != 1)
    out.push_back({"replicates",
                   "experiment \"" + cfg.experiment + "\" runs a single replicate"});

  // per-experiment parameters
  const ExperimentParams& p = cfg.params;
  if (cfg.experiment == "fig2-degrees" || cfg.experiment == "cost-convergence") {
    if (p.checkpoints.empty())
      out.push_back({"params.checkpoints", "need at least one checkpoint"});
    for (size_t i = 0; i < p.checkpoints.size(); ++i) {
      if (p.checkpoints[i] < 1 ||
          (i > 0 && p.checkpoints[i] <= p.checkpoints[i - 1])) {
        out.push_back({"params.checkpoints",
                       "checkpoints must be positive and strictly increasing"});
        break;
      }
    }
    if (!p.checkpoints.empty() && p.checkpoints.back() > cfg.planner.K)
      out.push_back({"params.checkpoints",
                     "last checkpoint exceeds planner.K (" +
                         std::to_string(cfg.planner.K) + ")"});
  }
  if (cfg.experiment == "nn-probability") {
    if (p.nn_n < 1) out.push_back({"params.n", "n must be >= 1"});
    if (p.nn_d < 1) out.push_back({"params.d", "d must be >= 1"});
    if (p.nn_trials < 1) out.push_back({"params.trials", "trials must be >= 1"});
  }
  if (cfg.experiment == "voronoi-decay") {
    if (space.type != SpaceType::holonomic)
      out.push_back({"workspace.type", "voronoi-decay needs a holonomic space"});
    if (p.decay.n_initial < 1)
      out.push_back({"params.n_initial", "n_initial must be >= 1"});
    if (p.decay.mc_samples < 1)
      out.push_back({"params.mc_samples", "mc_samples must be >= 1"});
    if (p.decay.conditioned && p.decay.events < 1)
      out.push_back({"params.events", "events must be >= 1"});
    if (!p.decay.conditioned && p.decay.n_insertions < 1)
      out.push_back({"params.n_insertions", "n_insertions must be >= 1"});
    if (p.decay.tracked_ids.empty())
      out.push_back({"params.tracked_ids", "need at least one tracked id"});
    for (int id : p.decay.tracked_ids)
      if (id < 0 || id >= p.decay.n_initial) {
        out.push_back({"params.tracked_ids",
                       "tracked ids must index the initial points (0 <= id < n_initial)"});
        break;
      }
  }
  if (cfg.experiment == "selection-bias") {
    if (space.type != SpaceType::holonomic)
      out.push_back({"workspace.type", "selection-bias needs a holonomic space"});
    if (p.selbias.n_nodes < 1)
      out.push_back({"params.n_nodes", "n_nodes must be >= 1"});
    if (p.selbias.window < 1)
      out.push_back({"params.window", "window must be >= 1"});
    if (p.selbias.mc_samples < 1)
      out.push_back({"params.mc_samples", "mc_samples must be >= 1"});
  }
  if (cfg.experiment == "cost-convergence") {
    if (!cfg.workspace.obstacles.empty())
      out.push_back({"workspace.obstacles",
                     "cost-convergence needs an obstacle-free workspace (the "
                     "optimum is the straight-line closed form)"});
    if (space.type != SpaceType::holonomic)
      out.push_back({"workspace.type", "cost-convergence needs a holonomic space"});
  }
  if (cfg.experiment == "fit") {
    if (p.fit_input.empty()) {
      out.push_back({"params.input", "fit needs params.input (a histogram CSV)"});
    } else if (!std::filesystem::exists(p.fit_input)) {
      out.push_back({"params.input",
                     "histogram CSV not found: " + p.fit_input});
    }
    if (p.fit_k_min < 1) out.push_back({"params.k_min", "k_min must be >= 1"});
  }

  // start validity last, only when the basic shapes are consistent
  if (out.empty() && !in_free_space(cfg.planner.start, cfg.workspace))
    out.push_back({"planner.start", "start state is in collision or out of bounds"});

  return out;
}

}  // namespace rrtlab
