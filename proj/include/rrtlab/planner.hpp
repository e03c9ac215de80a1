#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rrtlab/dynamics.hpp"
#include "rrtlab/nn.hpp"
#include "rrtlab/space.hpp"

namespace rrtlab {

// raised when a run is misconfigured (bad start state, malformed document…);
// distinct from runtime failures so the CLI can map it to its own exit code
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TreeNode {
  int id = 0;
  int parent = -1;  // -1 marks the root
  State state;
  std::optional<ControlInput> control;  // control that produced the in-edge
  int out_degree = 0;
  long birth_iteration = 0;  // loop iteration that created the node; root is 0
  double edge_length = 0;    // metric distance to the parent
  // car systems: bitmask over control-set indices already expanded from this
  // node — re-applying one would duplicate an existing child exactly
  std::uint64_t used_inputs = 0;
};

struct Tree {
  std::vector<TreeNode> nodes;
  int size() const { return static_cast<int>(nodes.size()); }
  const TreeNode& operator[](int id) const { return nodes[id]; }
  TreeNode& operator[](int id) { return nodes[id]; }
};

enum class SystemType { holonomic, car };

struct SystemSpec {
  SystemType type = SystemType::holonomic;
  double eps = 0.05;  // holonomic step size
  CarModel car;
  IntegrationSpec ispec;
  bool random_inputs = false;  // car: draw u uniformly instead of best-of-U
};

struct PlannerConfig {
  long K = 5000;          // sampling iterations (rejected extensions count)
  double goal_bias = 0.0; // probability of sampling the goal center instead
  State start;
  SystemSpec system;
  NnBackend nn_backend = NnBackend::linear;
  bool stop_on_goal = true;
  // keep stepping toward the same sample until blocked (off by default; a
  // holonomic growth heuristic, not part of the base algorithm)
  bool repeated_extend = false;
  double resolution = 0;  // collision-check spacing; 0 = workspace default
};

enum class PlanStatus { reached, exhausted };

struct PlanResult {
  Tree tree;
  PlanStatus status = PlanStatus::exhausted;
  std::optional<int> goal_node;  // first node inside the goal region
  std::vector<int> goal_nodes;   // every goal node, in birth order
  long iterations_used = 0;
  long extensions_attempted = 0;
  long extensions_rejected = 0;
};

enum class ExtendStatus { extended, rejected, reached };

struct ExtendResult {
  ExtendStatus status = ExtendStatus::rejected;
  int node_id = -1;  // valid unless rejected
};

// One extension attempt toward x_rand: nearest neighbour, one step of the
// system, collision check, append on success.  Rejection mutates nothing.
// goal may be null (exploration-only growth); `iteration` is recorded as the
// new node's birth iteration.
ExtendResult extend(Tree& tree, NnIndex& index, const State& x_rand,
                    const Workspace& ws, const GoalRegion* goal,
                    const PlannerConfig& cfg, RngStream& rng, long iteration);

// Full growth loop: seeds the tree at cfg.start (the root is itself checked
// against the goal), then runs up to cfg.K sampling iterations.
PlanResult build_rrt(const Workspace& ws, const GoalRegion* goal,
                     const PlannerConfig& cfg, RngStream& rng);

using PathEntry = std::pair<State, std::optional<ControlInput>>;

// root-to-leaf sequence; each entry carries the control of its in-edge
std::vector<PathEntry> extract_path(const Tree& tree, int leaf);

double path_cost(const std::vector<PathEntry>& path, const MetricSpec& metric);

// cost of the root-to-node path using the edge lengths stored at insertion
double node_cost_from_edges(const Tree& tree, int id);

// column names of the tree CSV serialization, in order
std::vector<std::string> tree_csv_header(const SpaceSpec& space);
// one node per line: id, parent_id (-1 for root), birth_iteration,
// out_degree, state components, control components (car files only; empty on
// the root row)
std::string tree_to_csv(const Tree& tree, const SpaceSpec& space);

}  // namespace rrtlab
