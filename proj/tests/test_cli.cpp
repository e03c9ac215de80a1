#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "rrtlab/config.hpp"
#include "rrtlab/csvio.hpp"
#include "support/oracles.hpp"

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs the real binary through the shell.  RRTLAB_OUT is scrubbed from the
// environment unless the caller injects its own assignment, so an ambient
// value can never redirect test artifacts.
CliResult run_cli(const std::string& args, const std::string& env = "") {
  static const std::string scratch = oracle::make_temp_dir("rrtlab-cli-io");
  static int counter = 0;
  const std::string out_file = scratch + "/out" + std::to_string(counter);
  const std::string err_file = scratch + "/err" + std::to_string(counter);
  ++counter;
  const std::string cmd = "env -u RRTLAB_OUT " + env + (env.empty() ? "" : " ") +
                          "\"" RRTLAB_CLI_BIN "\" " + args + " > \"" +
                          out_file + "\" 2> \"" + err_file + "\"";
  const int raw = std::system(cmd.c_str());
  CliResult r;
  r.code = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  return r;
}

std::string write_config(const std::string& text) {
  static const std::string dir = oracle::make_temp_dir("rrtlab-cli-cfg");
  static int counter = 0;
  const std::string path = dir + "/cfg" + std::to_string(counter++) + ".json";
  std::ofstream(path, std::ios::binary) << text;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

// split a CSV line; no quoting is used in any of our files
std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(slurp(path));
  std::string line;
  while (std::getline(in, line)) rows.push_back(fields(line));
  return rows;
}

}  // namespace

TEST_CASE("--help lists every experiment and exits 0") {
  const CliResult r = run_cli("--help");
  CHECK(r.code == 0);
  for (const std::string& name : rrtlab::experiment_names())
    CHECK(contains(r.out, name));
  CHECK(contains(r.out, "validate"));
  CHECK(contains(r.out, "RRTLAB_OUT"));
}

TEST_CASE("missing experiment argument is a usage error") {
  const CliResult r = run_cli("");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "kind=usage"));
}

TEST_CASE("unknown experiment name exits 2 and lists the choices") {
  const CliResult r = run_cli("warp-drive");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "kind=config"));
  CHECK(contains(r.err, "unknown experiment"));
  CHECK(contains(r.err, "fig2-degrees"));
}

TEST_CASE("unknown config key suggests the nearest real one") {
  const std::string cfg =
      write_config(R"({"system": {"stepsize": 0.1}})");
  const CliResult r = run_cli("validate --config \"" + cfg + "\"");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "kind=config"));
  CHECK(contains(r.err, "key=system.stepsize"));
  CHECK(contains(r.err, "did you mean \"eps\"?"));
}

TEST_CASE("validate reports out-of-range values by key") {
  const std::string cfg = write_config(
      R"({"experiment": "plan", "planner": {"goal_bias": 1.5}})");
  const CliResult r = run_cli("validate --config \"" + cfg + "\"");
  CHECK(r.code == 2);
  CHECK(contains(r.out, "goal_bias"));
  CHECK(contains(r.out, "[0, 1]"));
}

TEST_CASE("validate accepts an empty document (pure defaults)") {
  const std::string cfg = write_config("{}");
  const CliResult r = run_cli("validate --config \"" + cfg + "\"");
  CHECK(r.code == 0);
  CHECK(contains(r.out, "ok experiment=plan"));
}

TEST_CASE("missing config file exits 2") {
  const CliResult r = run_cli("plan --config /no/such/file.json");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "kind=config"));
}

TEST_CASE("malformed JSON exits 2") {
  const std::string cfg = write_config("{\"experiment\": ");
  const CliResult r = run_cli("plan --config \"" + cfg + "\"");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "not valid JSON"));
}

TEST_CASE("experiment name must agree with the config document") {
  const std::string cfg = write_config(R"({"experiment": "plan"})");
  const CliResult r = run_cli("fig2-degrees --config \"" + cfg + "\"");
  CHECK(r.code == 2);
  CHECK(contains(r.err, "key=experiment"));
}

TEST_CASE("config round-trip: serialize(parse(serialize(cfg))) is identity") {
  for (const std::string& name : rrtlab::experiment_names()) {
    const rrtlab::ExperimentConfig def = rrtlab::default_config(name);
    const std::string s0 = rrtlab::serialize_config(def);
    const rrtlab::ExperimentConfig back = rrtlab::parse_config(s0);
    CHECK(rrtlab::serialize_config(back) == s0);
    // an empty document plus the experiment override means the defaults
    const rrtlab::ExperimentConfig empty = rrtlab::parse_config("{}", name);
    CHECK(rrtlab::serialize_config(empty) == s0);
  }
}

TEST_CASE("plan run: artifacts, manifest, and an independently recomputed "
          "path cost") {
  const std::string out = oracle::make_temp_dir("rrtlab-plan") + "/run";
  const CliResult r = run_cli("plan --seed 3 --out \"" + out + "\"");
  REQUIRE(r.code == 0);
  CHECK(contains(r.out, "ok experiment=plan seed=3"));

  for (const char* f :
       {"tree.csv", "path.csv", "stats.csv", "plan.svg", "manifest.json"})
    CHECK(fs::exists(out + "/" + f));

  const json manifest = json::parse(slurp(out + "/manifest.json"));
  CHECK(manifest.at("experiment") == "plan");
  CHECK(manifest.at("seed") == 3);
  CHECK(manifest.at("results").at("status") == "reached");
  CHECK(manifest.at("config").is_object());
  CHECK(manifest.at("config_hash").is_string());
  CHECK(manifest.at("git_describe").is_string());
  const std::string ts = manifest.at("created_utc").get<std::string>();
  CHECK(ts.size() == 20);  // 2026-01-02T03:04:05Z
  CHECK(ts[10] == 'T');
  CHECK(ts.back() == 'Z');
  // every artifact named in the manifest exists, with its hash recorded
  for (const auto& [name, hash] : manifest.at("artifacts").items()) {
    CHECK(fs::exists(out + "/" + name));
    CHECK(hash.is_string());
  }

  // recompute the path cost from the CSV coordinates alone
  const auto path = read_csv(out + "/path.csv");
  REQUIRE(path.size() >= 2);
  REQUIRE(path[0] ==
          std::vector<std::string>{"step", "node_id", "x", "y",
                                   "cumulative_cost"});
  double cost = 0;
  for (size_t i = 2; i < path.size(); ++i) {
    const double dx = std::stod(path[i][2]) - std::stod(path[i - 1][2]);
    const double dy = std::stod(path[i][3]) - std::stod(path[i - 1][3]);
    cost += std::sqrt(dx * dx + dy * dy);
  }
  CHECK(std::fabs(std::stod(path.back()[4]) - cost) <= 1e-9);

  const auto stats = read_csv(out + "/stats.csv");
  REQUIRE(stats.size() == 2);
  const auto& h = stats[0];
  const auto cost_col =
      std::find(h.begin(), h.end(), "cost") - h.begin();
  REQUIRE(cost_col < static_cast<long>(h.size()));
  CHECK(std::fabs(std::stod(stats[1][cost_col]) - cost) <= 1e-9);
  CHECK(std::fabs(manifest.at("results").at("cost").get<double>() - cost) <=
        1e-9);

  CHECK(oracle::xml_well_formed(slurp(out + "/plan.svg")));
}

TEST_CASE("identical config and seed produce byte-identical CSV artifacts") {
  const std::string base = oracle::make_temp_dir("rrtlab-det");
  const CliResult r1 = run_cli("plan --seed 9 --out \"" + base + "/a\"");
  const CliResult r2 = run_cli("plan --seed 9 --out \"" + base + "/b\"");
  REQUIRE(r1.code == 0);
  REQUIRE(r2.code == 0);
  for (const char* f : {"tree.csv", "path.csv", "stats.csv", "plan.svg"}) {
    const std::string a = slurp(base + "/a/" + f);
    CHECK(!a.empty());
    CHECK(a == slurp(base + "/b/" + f));
  }
  // a different seed changes the tree
  const CliResult r3 = run_cli("plan --seed 10 --out \"" + base + "/c\"");
  REQUIRE(r3.code == 0);
  CHECK(slurp(base + "/a/tree.csv") != slurp(base + "/c/tree.csv"));
}

TEST_CASE("output directory precedence: --out beats RRTLAB_OUT beats config") {
  const std::string base = oracle::make_temp_dir("rrtlab-outdir");
  const std::string cfg = write_config(
      R"({"experiment": "plan", "out_dir": ")" + base + R"(/from-config"})");

  const CliResult r1 = run_cli("plan --config \"" + cfg + "\"");
  REQUIRE(r1.code == 0);
  CHECK(fs::exists(base + "/from-config/manifest.json"));

  const CliResult r2 = run_cli("plan --config \"" + cfg + "\"",
                               "RRTLAB_OUT=\"" + base + "/from-env\"");
  REQUIRE(r2.code == 0);
  CHECK(fs::exists(base + "/from-env/manifest.json"));

  const CliResult r3 =
      run_cli("plan --config \"" + cfg + "\" --out \"" + base + "/from-flag\"",
              "RRTLAB_OUT=\"" + base + "/from-env2\"");
  REQUIRE(r3.code == 0);
  CHECK(fs::exists(base + "/from-flag/manifest.json"));
  CHECK(!fs::exists(base + "/from-env2"));
}

TEST_CASE("runtime failures exit 1") {
  const std::string dir = oracle::make_temp_dir("rrtlab-block");
  std::ofstream(dir + "/wall") << "not a directory";
  const CliResult r = run_cli("plan --out \"" + dir + "/wall/run\"");
  CHECK(r.code == 1);
  CHECK(contains(r.err, "kind=runtime"));
}

TEST_CASE("fig2-degrees: one histogram CSV and SVG per checkpoint") {
  const std::string out = oracle::make_temp_dir("rrtlab-fig2") + "/run";
  const std::string cfg = write_config(R"({
    "experiment": "fig2-degrees",
    "planner": {"K": 300},
    "params": {"checkpoints": [150, 300]}
  })");
  const CliResult r =
      run_cli("fig2-degrees --config \"" + cfg + "\" --out \"" + out + "\"");
  REQUIRE(r.code == 0);

  size_t entries = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out)) ++entries;
  CHECK(entries == 5);  // 2 CSVs + 2 SVGs + manifest

  for (const char* f : {"degrees_150.csv", "degrees_300.csv",
                        "histogram_150.svg", "histogram_300.svg"})
    CHECK(fs::exists(out + "/" + f));

  const auto rows = read_csv(out + "/degrees_300.csv");
  REQUIRE(rows.size() >= 2);
  CHECK(rows[0] == std::vector<std::string>{"degree", "count"});
  long weighted = 0, n = 0;
  for (size_t i = 1; i < rows.size(); ++i) {
    weighted += std::stol(rows[i][0]) * std::stol(rows[i][1]);
    n += std::stol(rows[i][1]);
  }
  CHECK(weighted == n - 1);  // handshake survives serialization

  CHECK(oracle::xml_well_formed(slurp(out + "/histogram_300.svg")));

  const json manifest = json::parse(slurp(out + "/manifest.json"));
  CHECK(manifest.at("results").at("snapshots").size() == 2);
}

TEST_CASE("seed override lands in the manifest") {
  const std::string out = oracle::make_temp_dir("rrtlab-seed") + "/run";
  const std::string cfg = write_config(R"({"experiment": "plan", "seed": 4})");
  const CliResult r = run_cli("plan --config \"" + cfg + "\" --seed 11 --out \"" +
                              out + "\"");
  REQUIRE(r.code == 0);
  const json manifest = json::parse(slurp(out + "/manifest.json"));
  CHECK(manifest.at("seed") == 11);
  CHECK(manifest.at("config").at("seed") == 11);
}

TEST_CASE("fit: consumes a degree histogram CSV and emits both fits") {
  // manufacture a histogram whose CCDF is an exact power law k^-2 over ten
  // degree values: counts(k) proportional to k^-2 - (k+1)^-2, with the whole
  // remaining tail lumped into the last bin so no CCDF mass is truncated
  std::ostringstream hist;
  hist << "degree,count\n";
  const long scale = 10000000;
  for (int k = 0; k <= 10; ++k) {
    const double tail_k = k == 0 ? 1.0 : 1.0 / (double(k) * k);
    const double tail_next =
        k == 10 ? 0.0 : 1.0 / (double(k + 1) * (k + 1));
    hist << k << "," << std::lround(scale * (tail_k - tail_next)) << "\n";
  }
  const std::string dir = oracle::make_temp_dir("rrtlab-fit");
  const std::string hist_path = dir + "/hist.csv";
  std::ofstream(hist_path, std::ios::binary) << hist.str();

  const std::string cfg = write_config(R"({
    "experiment": "fit",
    "params": {"input": ")" + hist_path + R"("}
  })");
  const CliResult r =
      run_cli("fit --config \"" + cfg + "\" --out \"" + dir + "/run\"");
  REQUIRE(r.code == 0);

  const auto fit = read_csv(dir + "/run/fit.csv");
  REQUIRE(fit.size() == 3);
  CHECK(fit[0] == std::vector<std::string>{"model", "slope_param", "intercept",
                                           "r_squared", "k_min"});
  CHECK(fit[1][0] == "power_law");
  CHECK(std::fabs(std::stod(fit[1][1]) - 2.0) < 0.02);
  CHECK(std::stod(fit[1][3]) > 0.999);
  CHECK(fit[2][0] == "exponential");
  CHECK(oracle::xml_well_formed(slurp(dir + "/run/ccdf.svg")));

  // a malformed histogram is a config error, not a crash
  const std::string bad_path = dir + "/bad.csv";
  std::ofstream(bad_path, std::ios::binary) << "deg,count\n1,2\n";
  const std::string bad_cfg = write_config(R"({
    "experiment": "fit",
    "params": {"input": ")" + bad_path + R"("}
  })");
  const CliResult rb =
      run_cli("fit --config \"" + bad_cfg + "\" --out \"" + dir + "/run2\"");
  CHECK(rb.code == 2);
}

TEST_CASE("nn-probability run emits frequencies that sum to one") {
  const std::string out = oracle::make_temp_dir("rrtlab-nnp") + "/run";
  const std::string cfg = write_config(R"({
    "experiment": "nn-probability",
    "params": {"n": 10, "d": 2, "trials": 20000}
  })");
  const CliResult r = run_cli("nn-probability --config \"" + cfg +
                              "\" --out \"" + out + "\"");
  REQUIRE(r.code == 0);
  const auto rows = read_csv(out + "/freqs.csv");
  REQUIRE(rows.size() >= 11);  // header + 10 nodes (single replicate)
  double sum = 0;
  int freq_col = -1;
  for (size_t c = 0; c < rows[0].size(); ++c)
    if (rows[0][c] == "frequency") freq_col = static_cast<int>(c);
  REQUIRE(freq_col >= 0);
  for (size_t i = 1; i < rows.size(); ++i) sum += std::stod(rows[i][freq_col]);
  CHECK(std::fabs(sum - 1.0) <= 1e-9);
  CHECK(oracle::xml_well_formed(slurp(out + "/freqs.svg")));
}

TEST_CASE("voronoi-decay run writes the envelope table") {
  const std::string out = oracle::make_temp_dir("rrtlab-dec") + "/run";
  const std::string cfg = write_config(R"({
    "experiment": "voronoi-decay",
    "replicates": 5,
    "params": {"events": 3, "mc_samples": 2000}
  })");
  const CliResult r = run_cli("voronoi-decay --config \"" + cfg +
                              "\" --out \"" + out + "\"");
  REQUIRE(r.code == 0);
  CHECK(fs::exists(out + "/events.csv"));
  const auto env = read_csv(out + "/envelope.csv");
  REQUIRE(env.size() == 4);  // header + 3 events
  CHECK(env[0][0] == "node_id");
  const json manifest = json::parse(slurp(out + "/manifest.json"));
  CHECK(manifest.at("results").contains("within_envelope"));
}
