#include "rrtlab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace rrtlab {

DegreeHistogram degree_histogram(const Tree& tree, long at_iteration) {
  DegreeHistogram h;
  h.iteration = at_iteration;
  std::vector<int> degree(tree.size(), 0);
  std::vector<char> included(tree.size(), 0);
  for (const TreeNode& n : tree.nodes) {
    if (n.birth_iteration > at_iteration) continue;
    included[n.id] = 1;
    ++h.n;
    if (n.parent >= 0) ++degree[n.parent];  // parent precedes child, so it is included
  }
  if (h.n == 0) throw std::invalid_argument("degree_histogram: no snapshot at that iteration");
  for (const TreeNode& n : tree.nodes)
    if (included[n.id]) ++h.counts[degree[n.id]];
  return h;
}

CcdfSeries ccdf(const DegreeHistogram& h) {
  if (h.n < 1) throw std::invalid_argument("ccdf: empty histogram");
  const int max_deg = h.counts.rbegin()->first;
  CcdfSeries series;
  series.points.reserve(max_deg + 1);
  long at_least = h.n;
  for (int k = 0; k <= max_deg; ++k) {
    series.points.push_back(
        CcdfPoint{k, static_cast<double>(at_least) / static_cast<double>(h.n)});
    const auto it = h.counts.find(k);
    if (it != h.counts.end()) at_least -= it->second;
  }
  return series;
}

namespace {

// shared tail selection for both fits: k >= max(k_min, 1), fraction > 0
std::vector<CcdfPoint> fit_points(const CcdfSeries& c, int k_min) {
  std::vector<CcdfPoint> pts;
  for (const CcdfPoint& p : c.points)
    if (p.k >= std::max(k_min, 1) && p.fraction > 0) pts.push_back(p);
  return pts;
}

}  // namespace

PowerLawFit fit_power_law(const CcdfSeries& c, int k_min) {
  const std::vector<CcdfPoint> pts = fit_points(c, k_min);
  if (pts.size() < 3)
    throw std::runtime_error(
        "fit_power_law: fewer than 3 usable tail points; grow the tree longer "
        "to populate higher degrees");
  std::vector<double> lx, ly;
  for (const CcdfPoint& p : pts) {
    lx.push_back(std::log(static_cast<double>(p.k)));
    ly.push_back(std::log(p.fraction));
  }
  const LineFit f = least_squares(lx, ly);
  PowerLawFit out;
  out.exponent = -f.slope;
  out.intercept = f.intercept;
  out.r_squared = f.r_squared;
  out.k_min = std::max(k_min, 1);
  return out;
}

ExponentialFit fit_exponential_tail(const CcdfSeries& c, int k_min) {
  const std::vector<CcdfPoint> pts = fit_points(c, k_min);
  if (pts.size() < 3)
    throw std::runtime_error(
        "fit_exponential_tail: fewer than 3 usable tail points; grow the tree "
        "longer to populate higher degrees");
  std::vector<double> x, ly;
  for (const CcdfPoint& p : pts) {
    x.push_back(static_cast<double>(p.k));
    ly.push_back(std::log(p.fraction));
  }
  const LineFit f = least_squares(x, ly);
  ExponentialFit out;
  out.rate = -f.slope;
  out.intercept = f.intercept;
  out.r_squared = f.r_squared;
  out.k_min = std::max(k_min, 1);
  return out;
}

double gamma_constant(int d, long f_d) {
  if (d < 1 || f_d < 1)
    throw std::invalid_argument("gamma_constant: need d >= 1 and f_d >= 1");
  const double denom = std::ldexp(static_cast<double>(f_d), d);  // 2^d * f_d
  return (denom - 1.0) / denom;
}

std::vector<VoronoiEstimate> voronoi_volumes_mc(const std::vector<State>& points,
                                                const Workspace& ws,
                                                long mc_samples, RngStream& rng) {
  if (points.empty())
    throw std::invalid_argument("voronoi_volumes_mc: no points");
  if (mc_samples < 1)
    throw std::invalid_argument("voronoi_volumes_mc: mc_samples must be >= 1");
  std::vector<long> hits(points.size(), 0);
  for (long s = 0; s < mc_samples; ++s) {
    const State q = sample_uniform(ws, rng);
    int best = 0;
    double best_d2 = distance2(points[0], q, ws.space);
    for (size_t i = 1; i < points.size(); ++i) {
      const double d2 = distance2(points[i], q, ws.space);
      if (d2 < best_d2) {  // strict keeps the smallest id on ties
        best = static_cast<int>(i);
        best_d2 = d2;
      }
    }
    ++hits[best];
  }
  std::vector<VoronoiEstimate> out(points.size());
  for (size_t i = 0; i < points.size(); ++i) {
    const double p = static_cast<double>(hits[i]) / static_cast<double>(mc_samples);
    out[i] = VoronoiEstimate{static_cast<int>(i), p,
                             std::sqrt(p * (1.0 - p) / static_cast<double>(mc_samples)),
                             mc_samples};
  }
  return out;
}

namespace {

// nearest existing point by index (ties to smallest), shared by both decay modes
int nearest_point(const std::vector<State>& pts, const State& q,
                  const MetricSpec& metric) {
  int best = 0;
  double best_d2 = distance2(pts[0], q, metric);
  for (size_t i = 1; i < pts.size(); ++i) {
    const double d2 = distance2(pts[i], q, metric);
    if (d2 < best_d2) {
      best = static_cast<int>(i);
      best_d2 = d2;
    }
  }
  return best;
}

double floored(long hits, long mc_samples) {
  // keep log-volume traces finite when a cell loses its last sample
  const double v = static_cast<double>(hits) / static_cast<double>(mc_samples);
  return std::max(v, 0.5 / static_cast<double>(mc_samples));
}

std::vector<VoronoiDecayTrace> decay_uniform(const Workspace& ws,
                                             const VoronoiDecayParams& params,
                                             RngStream& rng) {
  std::vector<State> pts;
  pts.reserve(params.n_initial + params.n_insertions);
  for (int i = 0; i < params.n_initial; ++i) pts.push_back(sample_uniform(ws, rng));

  // one persistent pool; each sample remembers the distance to its owner the
  // moment it was claimed.  New points can only steal samples, never release
  // them, so every tracked subset (and hence every trace) shrinks monotonically.
  std::vector<State> pool;
  pool.reserve(params.mc_samples);
  for (long s = 0; s < params.mc_samples; ++s) pool.push_back(sample_uniform(ws, rng));

  struct TrackedCell {
    int node_id;
    std::vector<int> samples;     // pool indices currently owned
    std::vector<double> owner_d2; // distance2 from each sample to the node
    long hits = 0;
  };
  std::vector<TrackedCell> cells;
  for (int id : params.tracked_ids) {
    if (id < 0 || id >= params.n_initial)
      throw std::invalid_argument(
          "voronoi_decay_experiment: tracked ids must index the initial points");
    cells.push_back(TrackedCell{id, {}, {}, 0});
  }
  for (long s = 0; s < params.mc_samples; ++s) {
    const int owner = nearest_point(pts, pool[s], ws.space);
    for (TrackedCell& c : cells)
      if (owner == c.node_id) {
        c.samples.push_back(static_cast<int>(s));
        c.owner_d2.push_back(distance2(pool[s], pts[c.node_id], ws.space));
      }
  }

  std::vector<VoronoiDecayTrace> traces;
  for (TrackedCell& c : cells) {
    VoronoiDecayTrace t;
    t.node_id = c.node_id;
    t.v0 = floored(static_cast<long>(c.samples.size()), params.mc_samples);
    traces.push_back(t);
  }

  for (long ins = 1; ins <= params.n_insertions; ++ins) {
    const State x = sample_uniform(ws, rng);
    const int owner = nearest_point(pts, x, ws.space);
    pts.push_back(x);
    for (size_t ci = 0; ci < cells.size(); ++ci) {
      TrackedCell& c = cells[ci];
      const bool hit = owner == c.node_id;
      if (hit) ++c.hits;
      // drop samples now closer to x than to their owner; the tie (equal
      // distance) stays with the earlier point, matching the global
      // smallest-id attribution rule
      size_t w = 0;
      for (size_t si = 0; si < c.samples.size(); ++si) {
        const double d2_new = distance2(pool[c.samples[si]], x, ws.space);
        if (d2_new < c.owner_d2[si]) continue;  // stolen
        c.samples[w] = c.samples[si];
        c.owner_d2[w] = c.owner_d2[si];
        ++w;
      }
      c.samples.resize(w);
      c.owner_d2.resize(w);
      const double v = floored(static_cast<long>(w), params.mc_samples);
      traces[ci].points.push_back(DecayTracePoint{
          ins, v,
          std::sqrt(v * (1.0 - v) / static_cast<double>(params.mc_samples)), hit,
          c.hits});
    }
  }
  return traces;
}

std::vector<VoronoiDecayTrace> decay_conditioned(const Workspace& ws,
                                                 const VoronoiDecayParams& params,
                                                 RngStream& rng) {
  if (params.tracked_ids.empty())
    throw std::invalid_argument("voronoi_decay_experiment: no tracked id");
  const int tracked = params.tracked_ids.front();
  if (tracked < 0 || tracked >= params.n_initial)
    throw std::invalid_argument(
        "voronoi_decay_experiment: tracked ids must index the initial points");

  std::vector<State> pts;
  pts.reserve(params.n_initial + params.events);
  for (int i = 0; i < params.n_initial; ++i) pts.push_back(sample_uniform(ws, rng));

  // fresh pool per estimate: events are few, so independent estimates are
  // affordable and make the replicate statistics straightforward
  const auto estimate = [&]() {
    long hits = 0;
    for (long s = 0; s < params.mc_samples; ++s) {
      const State q = sample_uniform(ws, rng);
      if (nearest_point(pts, q, ws.space) == tracked) ++hits;
    }
    return floored(hits, params.mc_samples);
  };

  VoronoiDecayTrace trace;
  trace.node_id = tracked;
  trace.v0 = estimate();

  for (int k = 1; k <= params.events; ++k) {
    long draws = 0;
    while (true) {
      if (++draws > params.max_draws_per_event)
        throw std::runtime_error(
            "voronoi_decay_experiment: tracked cell became too small to hit "
            "within the draw budget");
      const State x = sample_uniform(ws, rng);
      if (nearest_point(pts, x, ws.space) == tracked) {
        pts.push_back(x);
        break;
      }
    }
    const double v = estimate();
    trace.points.push_back(DecayTracePoint{
        k, v, std::sqrt(v * (1.0 - v) / static_cast<double>(params.mc_samples)),
        true, k});
  }
  return {trace};
}

}  // namespace

std::vector<VoronoiDecayTrace> voronoi_decay_experiment(
    const Workspace& ws, const VoronoiDecayParams& params, RngStream& rng) {
  if (params.n_initial < 1)
    throw std::invalid_argument("voronoi_decay_experiment: n_initial must be >= 1");
  if (params.mc_samples < 1)
    throw std::invalid_argument("voronoi_decay_experiment: mc_samples must be >= 1");
  if (ws.space.type != SpaceType::holonomic)
    throw std::invalid_argument(
        "voronoi_decay_experiment: defined for holonomic spaces");
  return params.conditioned ? decay_conditioned(ws, params, rng)
                            : decay_uniform(ws, params, rng);
}

SelectionBiasReport selection_bias_experiment(const Workspace& ws,
                                              const PlannerConfig& cfg,
                                              const SelectionBiasParams& params,
                                              RngStream& rng) {
  if (params.n_nodes < 1)
    throw std::invalid_argument("selection_bias_experiment: n_nodes must be >= 1");
  if (params.window < 1)
    throw std::invalid_argument("selection_bias_experiment: window must be >= 1");

  // grow to the requested size with the configured backend
  Tree tree;
  TreeNode root;
  root.state = cfg.start;
  if (!in_free_space(root.state, ws))
    throw ConfigError("selection_bias_experiment: start state is in collision");
  tree.nodes.push_back(root);
  NnIndex index(cfg.nn_backend, ws.space);
  index.insert(0, root.state);
  long iterations = 0;
  while (tree.size() < params.n_nodes) {
    if (++iterations > params.max_grow_iterations)
      throw std::runtime_error(
          "selection_bias_experiment: could not grow the tree to the requested "
          "size (workspace too constrained?)");
    const State x_rand = sample_uniform(ws, rng);
    extend(tree, index, x_rand, ws, nullptr, cfg, rng, iterations);
  }

  SelectionBiasReport report;
  report.backend = cfg.nn_backend;
  for (const TreeNode& n : tree.nodes) report.states.push_back(n.state);

  const std::vector<VoronoiEstimate> volumes =
      voronoi_volumes_mc(report.states, ws, params.mc_samples, rng);
  for (const VoronoiEstimate& v : volumes) report.mc_fraction.push_back(v.volume_fraction);

  report.counts.assign(report.states.size(), 0);
  for (long t = 0; t < params.window; ++t) {
    const State q = sample_uniform(ws, rng);
    ++report.counts[index.nearest(q, rng)];
  }
  for (long c : report.counts)
    report.freq.push_back(static_cast<double>(c) / static_cast<double>(params.window));
  report.pearson_r = pearson_correlation(report.freq, report.mc_fraction);
  return report;
}

CostConvergenceResult cost_convergence_experiment(
    const Workspace& ws, const GoalRegion& goal, const PlannerConfig& cfg,
    const std::vector<long>& checkpoints, RngStream& rng) {
  if (checkpoints.empty())
    throw std::invalid_argument("cost_convergence_experiment: no checkpoints");
  if (!ws.obstacles.empty())
    throw ConfigError(
        "cost_convergence_experiment: workspace must be obstacle-free (the "
        "optimal cost is computed as the straight-line closed form)");
  if (ws.space.type != SpaceType::holonomic)
    throw ConfigError(
        "cost_convergence_experiment: the straight-line optimum only applies "
        "to holonomic systems");
  for (size_t i = 1; i < checkpoints.size(); ++i)
    if (checkpoints[i] <= checkpoints[i - 1])
      throw std::invalid_argument(
          "cost_convergence_experiment: checkpoints must be strictly increasing");

  PlannerConfig run_cfg = cfg;
  run_cfg.stop_on_goal = false;
  run_cfg.K = checkpoints.back();
  const PlanResult res = build_rrt(ws, &goal, run_cfg, rng);

  CostConvergenceResult out;
  out.checkpoints = checkpoints;
  out.c_star = distance(run_cfg.start, goal.center, ws.space) - goal.radius;
  if (out.c_star <= 0)
    throw ConfigError("cost_convergence_experiment: start lies inside the goal");
  out.goal_nodes_found = static_cast<long>(res.goal_nodes.size());

  // goal nodes arrive in birth order, so one sweep gives every checkpoint's
  // running minimum
  size_t gi = 0;
  double best = std::numeric_limits<double>::infinity();
  for (long cp : checkpoints) {
    while (gi < res.goal_nodes.size() &&
           res.tree[res.goal_nodes[gi]].birth_iteration <= cp) {
      best = std::min(best, node_cost_from_edges(res.tree, res.goal_nodes[gi]));
      ++gi;
    }
    out.y_n.push_back(best);
    out.rel_gap.push_back((best - out.c_star) / out.c_star);
  }
  return out;
}

}  // namespace rrtlab
