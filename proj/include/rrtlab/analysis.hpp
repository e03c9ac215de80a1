#pragma once

#include <map>
#include <vector>

#include "rrtlab/planner.hpp"
#include "rrtlab/space.hpp"
#include "rrtlab/stats.hpp"

namespace rrtlab {

struct DegreeHistogram {
  std::map<int, long> counts;  // out-degree -> number of nodes
  long n = 0;                  // nodes included in the snapshot
  long iteration = 0;          // snapshot iteration
};

struct CcdfPoint {
  int k = 0;
  double fraction = 0;  // share of nodes with degree >= k
};

struct CcdfSeries {
  std::vector<CcdfPoint> points;  // k = 0 .. max observed degree
};

struct PowerLawFit {
  double exponent = 0;   // negated slope of the log-log regression
  double intercept = 0;
  double r_squared = 0;
  int k_min = 1;
};

// log-linear alternative (fraction ~ C * exp(-rate * k)); reported alongside
// the power law so the better-fitting tail model is visible
struct ExponentialFit {
  double rate = 0;
  double intercept = 0;
  double r_squared = 0;
  int k_min = 1;
};

struct VoronoiEstimate {
  int node_id = 0;
  double volume_fraction = 0;
  double stderr_ = 0;  // binomial
  long mc_samples = 0;
};

// Degree counts over nodes with birth_iteration <= at_iteration.  Parents are
// always born before children, so filtering by birth keeps degrees consistent
// with the included node set.
DegreeHistogram degree_histogram(const Tree& tree, long at_iteration);

CcdfSeries ccdf(const DegreeHistogram& h);

// least squares on (log k, log fraction) over k >= max(k_min, 1) with
// positive fraction; throws (suggesting a larger run) when fewer than three
// points qualify
PowerLawFit fit_power_law(const CcdfSeries& c, int k_min = 1);

// least squares on (k, log fraction) over the same point set
ExponentialFit fit_exponential_tail(const CcdfSeries& c, int k_min = 1);

// contraction factor (2^d * f_d - 1) / (2^d * f_d); defaults used elsewhere
// are f(1) = 2 and f(2) = 6
double gamma_constant(int d, long f_d);

// Monte Carlo cell volumes: each uniform workspace sample is attributed to
// its nearest point (ties to the smallest id), so fractions sum to 1 exactly.
std::vector<VoronoiEstimate> voronoi_volumes_mc(const std::vector<State>& points,
                                                const Workspace& ws,
                                                long mc_samples, RngStream& rng);

// ---------------------------------------------------------------------------
// Voronoi decay
//
// The pure insertion process: points arrive uniformly at random, each new
// point claims territory from the cell it lands in.  Two modes:
//
//   uniform      — insert n_insertions unconditioned uniform points and
//                  re-estimate the tracked cells after every insertion.
//                  Volumes come from one persistent sample pool whose
//                  attribution is updated incrementally, so each tracked
//                  trace is non-increasing by construction.
//   conditioned  — only count insertions that land inside the tracked node's
//                  cell (draws landing elsewhere are discarded, not added).
//                  Each accepted insertion is one shrink event; volumes are
//                  re-estimated from a fresh pool after every event.  This
//                  isolates the per-event contraction that the gamma bound
//                  speaks about: unconditioned insertions shrink a typical
//                  cell like 1/n overall, which reaches a fixed event count
//                  only after exponentially many insertions.
// ---------------------------------------------------------------------------

struct VoronoiDecayParams {
  int n_initial = 10;       // uniform points present before tracking starts
  long n_insertions = 2000; // uniform mode: insertions to perform
  int events = 10;          // conditioned mode: shrink events to record
  std::vector<int> tracked_ids{0};  // must be < n_initial
  long mc_samples = 20000;
  bool conditioned = true;
  long max_draws_per_event = 10000000;  // conditioned-mode rejection cap
};

struct DecayTracePoint {
  long step = 0;       // insertion number (uniform) or event number (conditioned)
  double volume = 0;   // floored at 0.5 / mc_samples so log traces stay finite
  double stderr_ = 0;
  bool hit = false;    // insertion landed in this node's cell
  long hits_so_far = 0;
};

struct VoronoiDecayTrace {
  int node_id = 0;
  double v0 = 0;  // volume before the first tracked insertion
  std::vector<DecayTracePoint> points;
};

std::vector<VoronoiDecayTrace> voronoi_decay_experiment(
    const Workspace& ws, const VoronoiDecayParams& params, RngStream& rng);

// ---------------------------------------------------------------------------
// Selection bias
//
// Grows a tree to n_nodes with the configured backend, freezes it, estimates
// every cell volume, then replays `window` random samples through the
// nearest-neighbour query alone (no insertions — growth during the window
// would dilute exactly the per-state selection distribution being measured).
// ---------------------------------------------------------------------------

struct SelectionBiasParams {
  int n_nodes = 200;
  long window = 2000;
  long mc_samples = 200000;
  long max_grow_iterations = 1000000;
};

struct SelectionBiasReport {
  NnBackend backend = NnBackend::linear;
  std::vector<State> states;        // tree states at window start
  std::vector<long> counts;         // selections per node over the window
  std::vector<double> freq;         // counts / window
  std::vector<double> mc_fraction;  // cell volume estimates at window start
  double pearson_r = 0;             // 0 when fewer than two nodes
};

SelectionBiasReport selection_bias_experiment(const Workspace& ws,
                                              const PlannerConfig& cfg,
                                              const SelectionBiasParams& params,
                                              RngStream& rng);

// ---------------------------------------------------------------------------
// Cost convergence
//
// Y_n: best cost over goal-reaching paths after n iterations (+inf until the
// first goal node).  The workspace must be obstacle-free so the optimum has
// the closed form c* = |start - goal center| - goal radius.
// ---------------------------------------------------------------------------

struct CostConvergenceResult {
  std::vector<long> checkpoints;
  std::vector<double> y_n;      // +inf where no goal node exists yet
  std::vector<double> rel_gap;  // (y_n - c*) / c*
  double c_star = 0;
  long goal_nodes_found = 0;
};

CostConvergenceResult cost_convergence_experiment(
    const Workspace& ws, const GoalRegion& goal, const PlannerConfig& cfg,
    const std::vector<long>& checkpoints, RngStream& rng);

}  // namespace rrtlab
