#pragma once

#include <string>
#include <vector>

#include "rrtlab/config.hpp"

namespace rrtlab {

struct RunOutcome {
  std::string out_dir;
  std::vector<std::string> artifacts;  // file names written, manifest last
};

// Executes the configured experiment and writes its artifact set (CSVs, SVG
// plots, manifest.json) into cfg.out_dir, creating the directory if needed.
//
// Throws ConfigError when the config fails validation (CLI exit 2) and
// std::runtime_error for failures at run time (CLI exit 1).  Every output
// byte except the manifest's timestamp is a pure function of (config, seed).
RunOutcome run_experiment(const ExperimentConfig& cfg);

}  // namespace rrtlab
