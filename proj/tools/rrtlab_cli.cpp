// rrtlab — experiment runner
//
//   rrtlab <experiment> [--config FILE] [--seed N] [--out DIR] [--replicates N]
//   rrtlab validate [--config FILE]
//
// Exit codes: 0 success, 1 runtime failure, 2 invalid config / usage.
// Errors are a single machine-parsable line on stderr:
//   error: kind=<usage|config|runtime> [key=<config key>] message=<text>

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "rrtlab/csvio.hpp"
#include "rrtlab/experiments.hpp"

namespace {

std::string experiment_list() {
  std::string out;
  for (const std::string& name : rrtlab::experiment_names()) {
    if (!out.empty()) out += ", ";
    out += name;
  }
  return out;
}

int fail(const std::string& kind, const std::string& key,
         const std::string& message, int code) {
  std::cerr << "error: kind=" << kind;
  if (!key.empty()) std::cerr << " key=" << key;
  std::cerr << " message=" << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "rrtlab: randomized-tree growth experiments.\n"
      "Experiments: " +
      experiment_list() +
      ".\n\"validate\" checks a config without running anything.\n"
      "RRTLAB_OUT overrides the configured output directory (a --out flag "
      "wins over both)."};

  std::string experiment;
  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  long replicates = 0;
  bool have_seed = false, have_out = false, have_replicates = false;

  app.add_option("experiment", experiment,
                 "experiment name (" + experiment_list() + ") or \"validate\"")
      ->required();
  app.add_option("--config", config_path, "JSON config file (defaults apply)");
  app.add_option("--seed", seed, "override the config's seed")
      ->each([&](const std::string&) { have_seed = true; });
  app.add_option("--out", out_dir, "override the output directory")
      ->each([&](const std::string&) { have_out = true; });
  app.add_option("--replicates", replicates, "override the replicate count")
      ->each([&](const std::string&) { have_replicates = true; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", "", e.what(), 2);
  }

  try {
    std::string config_text = "{}";
    if (!config_path.empty()) {
      try {
        config_text = rrtlab::read_file(config_path);
      } catch (const std::exception& e) {
        throw rrtlab::ConfigParseError("", e.what());
      }
    }

    const bool validate_only = experiment == "validate";
    rrtlab::ExperimentConfig cfg = rrtlab::parse_config(
        config_text, validate_only ? std::nullopt
                                   : std::optional<std::string>(experiment));

    if (have_seed) cfg.seed = seed;
    if (have_replicates) cfg.replicates = replicates;
    if (have_out) {
      cfg.out_dir = out_dir;
    } else if (const char* env = std::getenv("RRTLAB_OUT")) {
      if (*env) cfg.out_dir = env;
    }

    if (validate_only) {
      const std::vector<rrtlab::Diagnostic> problems = rrtlab::validate(cfg);
      for (const rrtlab::Diagnostic& d : problems)
        std::cout << d.key << ": " << d.message << "\n";
      if (!problems.empty()) return 2;
      std::cout << "ok experiment=" << cfg.experiment << "\n";
      return 0;
    }

    const rrtlab::RunOutcome outcome = rrtlab::run_experiment(cfg);
    std::cout << "ok experiment=" << cfg.experiment << " seed=" << cfg.seed
              << " out=" << outcome.out_dir
              << " artifacts=" << outcome.artifacts.size() << "\n";
    return 0;
  } catch (const rrtlab::ConfigParseError& e) {
    return fail("config", e.key, e.what(), 2);
  } catch (const rrtlab::ConfigError& e) {
    return fail("config", "", e.what(), 2);
  } catch (const std::exception& e) {
    return fail("runtime", "", e.what(), 1);
  }
}
