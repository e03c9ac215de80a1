#include "rrtlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <limits>

#include <json.hpp>

#include "rrtlab/analysis.hpp"
#include "rrtlab/csvio.hpp"
#include "rrtlab/svg.hpp"

#ifndef RRTLAB_GIT_DESCRIBE
#define RRTLAB_GIT_DESCRIBE "unknown"
#endif

namespace rrtlab {

using nlohmann::json;

namespace {

namespace fs = std::filesystem;

// collects written files + their content hashes for the manifest
struct ArtifactSink {
  fs::path dir;
  std::vector<std::pair<std::string, std::string>> entries;

  void write(const std::string& name, const std::string& bytes) {
    write_file((dir / name).string(), bytes);
    entries.emplace_back(name, to_hex(fnv1a64(bytes)));
  }
};

std::string utc_now() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string fd(double v) { return format_double(v); }
std::string fi(long long v) { return format_int(v); }

// -------------------------------------------------------------------- plan

void run_plan(const ExperimentConfig& cfg, ArtifactSink& sink, json& results) {
  RngStream rng(cfg.seed, 0);
  const GoalRegion* goal = cfg.goal ? &*cfg.goal : nullptr;
  const PlanResult res = build_rrt(cfg.workspace, goal, cfg.planner, rng);

  sink.write("tree.csv", tree_to_csv(res.tree, cfg.workspace.space));

  std::vector<State> path_states;
  double cost = std::numeric_limits<double>::infinity();
  if (res.goal_node) {
    const auto path = extract_path(res.tree, *res.goal_node);
    cost = path_cost(path, cfg.workspace.space);
    CsvWriter csv([&] {
      std::vector<std::string> h{"step", "node_id"};
      const auto names = tree_csv_header(cfg.workspace.space);
      // reuse the state/control column names from the tree schema
      h.insert(h.end(), names.begin() + 4, names.end());
      h.push_back("cumulative_cost");
      return h;
    }());
    // recover node ids along the path by walking parents again
    std::vector<int> ids;
    for (int id = *res.goal_node; id != -1; id = res.tree[id].parent)
      ids.push_back(id);
    std::reverse(ids.begin(), ids.end());
    double run_cost = 0;
    for (size_t i = 0; i < path.size(); ++i) {
      const auto& [state, control] = path[i];
      path_states.push_back(state);
      if (i > 0) run_cost += distance(path[i - 1].first, state, cfg.workspace.space);
      std::vector<std::string> row{fi(static_cast<long long>(i)), fi(ids[i])};
      for (double c : state) row.push_back(fd(c));
      if (cfg.workspace.space.type == SpaceType::car) {
        row.push_back(control ? fd(control->v) : "");
        row.push_back(control ? fd(control->phi) : "");
      }
      row.push_back(fd(run_cost));
      csv.row(row);
    }
    sink.write("path.csv", csv.str());
  }

  CsvWriter stats({"status", "iterations_used", "nodes", "goal_nodes",
                   "extensions_attempted", "extensions_rejected", "cost"});
  stats.row({res.status == PlanStatus::reached ? "reached" : "exhausted",
             fi(res.iterations_used), fi(res.tree.size()),
             fi(static_cast<long long>(res.goal_nodes.size())),
             fi(res.extensions_attempted), fi(res.extensions_rejected),
             fd(cost)});
  sink.write("stats.csv", stats.str());

  sink.write("plan.svg",
             svg_tree(res.tree, cfg.workspace, path_states, cfg.goal));

  results["status"] = res.status == PlanStatus::reached ? "reached" : "exhausted";
  results["nodes"] = res.tree.size();
  results["iterations_used"] = res.iterations_used;
  if (std::isfinite(cost)) results["cost"] = cost;
}

// ------------------------------------------------------------ fig2-degrees

void run_fig2(const ExperimentConfig& cfg, ArtifactSink& sink, json& results) {
  RngStream rng(cfg.seed, 0);
  PlannerConfig pc = cfg.planner;
  pc.stop_on_goal = false;  // exploration only; snapshots need the full run
  const PlanResult res = build_rrt(cfg.workspace, nullptr, pc, rng);

  json snaps = json::array();
  for (long chk : cfg.params.checkpoints) {
    const DegreeHistogram h = degree_histogram(res.tree, chk);
    CsvWriter csv({"degree", "count"});
    std::vector<std::string> labels;
    std::vector<double> values;
    for (const auto& [deg, count] : h.counts) {
      csv.row({fi(deg), fi(count)});
      labels.push_back(std::to_string(deg));
      values.push_back(static_cast<double>(count));
    }
    const std::string tag = std::to_string(chk);
    sink.write("degrees_" + tag + ".csv", csv.str());
    sink.write("histogram_" + tag + ".svg",
               svg_bar_chart("out-degree histogram, K = " + tag, "out-degree",
                             "nodes", labels, values));
    json s;
    s["iteration"] = chk;
    s["nodes"] = h.n;
    s["max_degree"] = h.counts.empty() ? 0 : h.counts.rbegin()->first;
    snaps.push_back(s);
  }
  results["snapshots"] = snaps;
  results["nodes_total"] = res.tree.size();
}

// ---------------------------------------------------------- nn-probability

void run_nn_probability(const ExperimentConfig& cfg, ArtifactSink& sink,
                        json& results) {
  const int n = cfg.params.nn_n;
  const long trials = cfg.params.nn_trials;

  CsvWriter freqs({"replicate", "index", "count", "frequency"});
  CsvWriter stats({"replicate", "n", "d", "trials", "chi_square", "p_value",
                   "min_frequency", "max_frequency"});
  std::vector<double> rep0;
  json reps = json::array();
  for (long r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    const std::vector<double> freq =
        nearest_probability_trial(n, cfg.params.nn_d, trials, rng);
    if (r == 0) rep0 = freq;
    std::vector<long> counts(freq.size());
    for (size_t i = 0; i < freq.size(); ++i) {
      counts[i] = std::llround(freq[i] * static_cast<double>(trials));
      freqs.row({fi(r), fi(static_cast<long long>(i)), fi(counts[i]),
                 fd(freq[i])});
    }
    const double stat = chi_square_stat_uniform(counts);
    const double p = chi_square_pvalue(stat, n - 1);
    const auto [lo, hi] = std::minmax_element(freq.begin(), freq.end());
    stats.row({fi(r), fi(n), fi(cfg.params.nn_d), fi(trials), fd(stat), fd(p),
               fd(*lo), fd(*hi)});
    json jr;
    jr["chi_square"] = stat;
    jr["p_value"] = p;
    reps.push_back(jr);
  }
  sink.write("freqs.csv", freqs.str());
  sink.write("stats.csv", stats.str());

  std::vector<std::string> labels;
  std::vector<double> values;
  for (size_t i = 0; i < rep0.size(); ++i) {
    labels.push_back(std::to_string(i));
    values.push_back(rep0[i]);
  }
  sink.write("freqs.svg",
             svg_bar_chart("nearest-neighbour selection frequency (expect 1/" +
                               std::to_string(n) + ")",
                           "point index", "frequency", labels, values));
  results["replicates"] = reps;
}

// ----------------------------------------------------------- voronoi-decay

void run_voronoi_decay(const ExperimentConfig& cfg, ArtifactSink& sink,
                       json& results) {
  const VoronoiDecayParams& params = cfg.params.decay;
  // per tracked id, per event/step: dlog values across replicates
  std::map<int, std::map<long, std::vector<double>>> dlogs;

  CsvWriter events({"replicate", "node_id", "step", "volume", "stderr", "hit",
                    "hits_so_far", "dlog_volume"});
  for (long r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    const auto traces = voronoi_decay_experiment(cfg.workspace, params, rng);
    for (const VoronoiDecayTrace& tr : traces) {
      for (const DecayTracePoint& p : tr.points) {
        const double dlog = std::log(p.volume) - std::log(tr.v0);
        events.row({fi(r), fi(tr.node_id), fi(p.step), fd(p.volume),
                    fd(p.stderr_), p.hit ? "1" : "0", fi(p.hits_so_far),
                    fd(dlog)});
        if (!params.conditioned || p.hit)
          dlogs[tr.node_id][params.conditioned ? p.step : p.hits_so_far]
              .push_back(dlog);
      }
    }
  }
  sink.write(params.conditioned ? "events.csv" : "traces.csv", events.str());

  const double log_gamma = std::log(gamma_constant(2, 6));
  results["gamma"] = gamma_constant(2, 6);

  if (params.conditioned) {
    CsvWriter env({"node_id", "event", "replicates", "mean_dlog_volume",
                   "sd_dlog_volume", "bound_dlog_volume", "margin"});
    std::vector<SvgSeries> series(2);
    series[0].label = "mean dlog V";
    series[1].label = "k log(gamma) + 3 sd";
    bool within = true;
    for (const auto& [node_id, by_event] : dlogs) {
      for (const auto& [k, vals] : by_event) {
        const double m = mean(vals);
        const double sd = vals.size() > 1 ? sample_stddev(vals) : 0.0;
        const double bound =
            static_cast<double>(k) * log_gamma + 3.0 * sd;
        env.row({fi(node_id), fi(k), fi(static_cast<long long>(vals.size())),
                 fd(m), fd(sd), fd(bound), fd(bound - m)});
        if (m > bound) within = false;
        if (node_id == params.tracked_ids.front()) {
          series[0].points.emplace_back(static_cast<double>(k), m);
          series[1].points.emplace_back(static_cast<double>(k), bound);
        }
      }
    }
    sink.write("envelope.csv", env.str());
    sink.write("envelope.svg",
               svg_line_chart("Voronoi cell decay per shrink event",
                              "shrink events", "log(V_k / V_0)", series));
    results["within_envelope"] = within;
  } else {
    // unconditioned traces: mean shrink against events observed so far
    std::vector<SvgSeries> series;
    for (int id : params.tracked_ids) {
      SvgSeries s;
      s.label = "node " + std::to_string(id);
      series.push_back(s);
    }
    for (size_t i = 0; i < params.tracked_ids.size(); ++i) {
      const auto it = dlogs.find(params.tracked_ids[i]);
      if (it == dlogs.end()) continue;
      for (const auto& [k, vals] : it->second)
        series[i].points.emplace_back(static_cast<double>(k), mean(vals));
    }
    sink.write("traces.svg",
               svg_line_chart("Voronoi cell decay (uniform insertions)",
                              "shrink events so far", "mean log(V / V_0)",
                              series));
  }
}

// ---------------------------------------------------------- selection-bias

void run_selection_bias(const ExperimentConfig& cfg, ArtifactSink& sink,
                        json& results) {
  const SelectionBiasParams& params = cfg.params.selbias;

  CsvWriter nodes({"replicate", "backend", "node_id", "x", "y", "frequency",
                   "volume_fraction"});
  CsvWriter stats({"replicate", "backend", "n_nodes", "window", "pearson_r"});
  std::vector<SvgSeries> scatter(2);
  scatter[0].label = "nearest";
  scatter[1].label = "random";
  json reps = json::array();

  for (long r = 0; r < cfg.replicates; ++r) {
    json jr;
    for (int pass = 0; pass < 2; ++pass) {
      PlannerConfig pc = cfg.planner;
      if (pass == 1) pc.nn_backend = NnBackend::random;
      RngStream rng(cfg.seed, 2 * static_cast<std::uint64_t>(r) + pass);
      const SelectionBiasReport rep =
          selection_bias_experiment(cfg.workspace, pc, params, rng);
      const std::string backend = to_string(rep.backend);
      for (size_t i = 0; i < rep.states.size(); ++i) {
        nodes.row({fi(r), backend, fi(static_cast<long long>(i)),
                   fd(rep.states[i][0]),
                   fd(rep.states[i].size() > 1 ? rep.states[i][1] : 0.0),
                   fd(rep.freq[i]), fd(rep.mc_fraction[i])});
        if (r == 0)
          scatter[pass].points.emplace_back(rep.mc_fraction[i], rep.freq[i]);
      }
      stats.row({fi(r), backend, fi(static_cast<long long>(rep.states.size())),
                 fi(params.window), fd(rep.pearson_r)});
      jr[pass == 0 ? "nearest_r" : "random_r"] = rep.pearson_r;
    }
    reps.push_back(jr);
  }
  sink.write("nodes.csv", nodes.str());
  sink.write("stats.csv", stats.str());
  sink.write("bias.svg",
             svg_scatter("selection frequency vs cell volume",
                         "Voronoi volume fraction", "selection frequency",
                         scatter));
  results["replicates"] = reps;
}

// -------------------------------------------------------- cost-convergence

void run_cost_convergence(const ExperimentConfig& cfg, ArtifactSink& sink,
                          json& results) {
  const std::vector<long>& checkpoints = cfg.params.checkpoints;

  CsvWriter yn({"replicate", "n", "y_n", "rel_gap"});
  std::vector<std::vector<double>> gaps(checkpoints.size());
  std::vector<std::vector<double>> costs(checkpoints.size());
  double c_star = 0;
  bool monotone = true;

  for (long r = 0; r < cfg.replicates; ++r) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(r));
    const CostConvergenceResult res = cost_convergence_experiment(
        cfg.workspace, *cfg.goal, cfg.planner, checkpoints, rng);
    c_star = res.c_star;
    for (size_t i = 0; i < checkpoints.size(); ++i) {
      yn.row({fi(r), fi(checkpoints[i]), fd(res.y_n[i]), fd(res.rel_gap[i])});
      if (std::isfinite(res.y_n[i])) {
        costs[i].push_back(res.y_n[i]);
        gaps[i].push_back(res.rel_gap[i]);
      }
      if (i > 0 && res.y_n[i] > res.y_n[i - 1]) monotone = false;
    }
  }
  sink.write("yn.csv", yn.str());

  CsvWriter stats({"n", "c_star", "replicates_finite", "mean_y_n", "min_y_n",
                   "mean_rel_gap", "frac_gap_gt_2pct"});
  SvgSeries mean_curve{"mean Y_n", {}};
  SvgSeries best_curve{"best Y_n", {}};
  SvgSeries cstar_curve{"c*", {}};
  double final_frac = 0;
  for (size_t i = 0; i < checkpoints.size(); ++i) {
    const long nf = static_cast<long>(costs[i].size());
    const double mean_y = nf ? mean(costs[i]) : 0;
    const double min_y =
        nf ? *std::min_element(costs[i].begin(), costs[i].end()) : 0;
    long gt = 0;
    for (double g : gaps[i])
      if (g > 0.02) ++gt;
    const double frac =
        nf ? static_cast<double>(gt) / static_cast<double>(nf) : 0;
    if (i + 1 == checkpoints.size()) final_frac = frac;
    stats.row({fi(checkpoints[i]), fd(c_star), fi(nf), fd(nf ? mean_y : 0),
               fd(nf ? min_y : 0), fd(nf ? mean(gaps[i]) : 0), fd(frac)});
    if (nf) {
      mean_curve.points.emplace_back(static_cast<double>(checkpoints[i]), mean_y);
      best_curve.points.emplace_back(static_cast<double>(checkpoints[i]), min_y);
    }
    cstar_curve.points.emplace_back(static_cast<double>(checkpoints[i]), c_star);
  }
  sink.write("stats.csv", stats.str());
  sink.write("yn.svg",
             svg_line_chart("best path cost vs iterations", "iterations n",
                            "cost", {mean_curve, best_curve, cstar_curve},
                            /*log_x=*/true));
  results["c_star"] = c_star;
  results["y_n_monotone"] = monotone;
  results["frac_gap_gt_2pct_at_final_n"] = final_frac;
}

// -------------------------------------------------------------------- fit

DegreeHistogram read_histogram_csv(const std::string& path) {
  const std::string text = read_file(path);
  DegreeHistogram h;
  size_t pos = 0;
  long line_no = 0;
  while (pos < text.size()) {
    size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "degree,count")
        throw ConfigError("fit input " + path +
                          ": expected header \"degree,count\", got \"" + line +
                          "\"");
      continue;
    }
    const size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw ConfigError("fit input " + path + ": malformed line " +
                        std::to_string(line_no));
    try {
      const int deg = std::stoi(line.substr(0, comma));
      const long count = std::stol(line.substr(comma + 1));
      if (deg < 0 || count < 0) throw std::invalid_argument("negative");
      h.counts[deg] += count;
      h.n += count;
    } catch (const std::exception&) {
      throw ConfigError("fit input " + path + ": malformed line " +
                        std::to_string(line_no));
    }
  }
  if (h.n == 0)
    throw ConfigError("fit input " + path + ": no histogram rows");
  return h;
}

void run_fit(const ExperimentConfig& cfg, ArtifactSink& sink, json& results) {
  const DegreeHistogram h = read_histogram_csv(cfg.params.fit_input);
  const CcdfSeries c = ccdf(h);
  const PowerLawFit pl = fit_power_law(c, cfg.params.fit_k_min);
  const ExponentialFit ex = fit_exponential_tail(c, cfg.params.fit_k_min);

  CsvWriter ccsv({"k", "fraction"});
  SvgSeries data{"ccdf", {}};
  for (const CcdfPoint& p : c.points) {
    ccsv.row({fi(p.k), fd(p.fraction)});
    if (p.k >= 1 && p.fraction > 0)
      data.points.emplace_back(static_cast<double>(p.k), p.fraction);
  }
  sink.write("ccdf.csv", ccsv.str());

  CsvWriter fcsv({"model", "slope_param", "intercept", "r_squared", "k_min"});
  fcsv.row({"power_law", fd(pl.exponent), fd(pl.intercept), fd(pl.r_squared),
            fi(pl.k_min)});
  fcsv.row({"exponential", fd(ex.rate), fd(ex.intercept), fd(ex.r_squared),
            fi(ex.k_min)});
  sink.write("fit.csv", fcsv.str());

  SvgSeries fitline{"power-law fit", {}};
  for (const auto& [k, frac] : data.points) {
    (void)frac;
    fitline.points.emplace_back(
        k, std::exp(pl.intercept - pl.exponent * std::log(k)));
  }
  sink.write("ccdf.svg",
             svg_scatter("degree CCDF (log-log)", "degree k",
                         "P(degree >= k)", {data, fitline},
                         /*log_x=*/true, /*log_y=*/true));

  results["power_law"] = {{"exponent", pl.exponent},
                          {"r_squared", pl.r_squared}};
  results["exponential"] = {{"rate", ex.rate}, {"r_squared", ex.r_squared}};
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& cfg) {
  const std::vector<Diagnostic> problems = validate(cfg);
  if (!problems.empty()) {
    std::string msg = "invalid config:";
    for (const Diagnostic& d : problems) msg += " [" + d.key + "] " + d.message;
    throw ConfigError(msg);
  }

  ArtifactSink sink;
  sink.dir = cfg.out_dir;
  std::error_code ec;
  fs::create_directories(sink.dir, ec);
  if (ec)
    throw std::runtime_error("cannot create output directory " + cfg.out_dir +
                             ": " + ec.message());

  json results = json::object();
  if (cfg.experiment == "plan") {
    run_plan(cfg, sink, results);
  } else if (cfg.experiment == "fig2-degrees") {
    run_fig2(cfg, sink, results);
  } else if (cfg.experiment == "nn-probability") {
    run_nn_probability(cfg, sink, results);
  } else if (cfg.experiment == "voronoi-decay") {
    run_voronoi_decay(cfg, sink, results);
  } else if (cfg.experiment == "selection-bias") {
    run_selection_bias(cfg, sink, results);
  } else if (cfg.experiment == "cost-convergence") {
    run_cost_convergence(cfg, sink, results);
  } else if (cfg.experiment == "fit") {
    run_fit(cfg, sink, results);
  } else {
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
  }

  const std::string config_text = serialize_config(cfg);
  json manifest;
  manifest["experiment"] = cfg.experiment;
  manifest["seed"] = cfg.seed;
  manifest["replicates"] = cfg.replicates;
  manifest["config"] = json::parse(config_text);
  manifest["config_hash"] = to_hex(fnv1a64(config_text));
  manifest["git_describe"] = RRTLAB_GIT_DESCRIBE;
  manifest["created_utc"] = utc_now();
  json artifacts = json::object();
  for (const auto& [name, hash] : sink.entries) artifacts[name] = hash;
  manifest["artifacts"] = artifacts;
  manifest["results"] = results;
  sink.write("manifest.json", manifest.dump(2) + "\n");

  RunOutcome out;
  out.out_dir = cfg.out_dir;
  for (const auto& [name, hash] : sink.entries) out.artifacts.push_back(name);
  return out;
}

}  // namespace rrtlab
