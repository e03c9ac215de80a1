#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrtlab/analysis.hpp"
#include "rrtlab/planner.hpp"
#include "rrtlab/space.hpp"

namespace rrtlab {

// parse-time failure that can name the offending key
struct ConfigParseError : ConfigError {
  ConfigParseError(std::string k, const std::string& msg)
      : ConfigError(msg), key(std::move(k)) {}
  std::string key;
};

struct ExperimentParams {
  // fig2-degrees snapshots and cost-convergence checkpoints
  std::vector<long> checkpoints{5000, 10000, 15000, 20000};
  // nn-probability
  int nn_n = 10;
  int nn_d = 2;
  long nn_trials = 100000;
  // voronoi-decay
  VoronoiDecayParams decay;
  // selection-bias
  SelectionBiasParams selbias;
  // fit
  int fit_k_min = 1;
  std::string fit_input;  // histogram CSV to read
};

struct ExperimentConfig {
  std::string experiment = "plan";
  std::uint64_t seed = 1;
  long replicates = 1;
  std::string out_dir = "out";
  Workspace workspace;
  PlannerConfig planner;
  std::optional<GoalRegion> goal;
  ExperimentParams params;
};

const std::vector<std::string>& experiment_names();

// fully resolved defaults for one experiment (these are what an empty config
// document means)
ExperimentConfig default_config(const std::string& experiment);

struct Diagnostic {
  std::string key;
  std::string message;
};

// empty result iff run_experiment would accept the config
std::vector<Diagnostic> validate(const ExperimentConfig& cfg);

// Strict parse: unknown keys are rejected (with a suggestion when one is
// close), values are type-checked, and absent keys fall back to the
// experiment's defaults.  experiment_override, when set, must agree with the
// document's own "experiment" key if both are present.
ExperimentConfig parse_config(const std::string& json_text,
                              const std::optional<std::string>&
                                  experiment_override = std::nullopt);

// canonical resolved form; parse(serialize(cfg)) reproduces cfg exactly
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace rrtlab
