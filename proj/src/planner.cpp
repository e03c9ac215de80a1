#include "rrtlab/planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "rrtlab/csvio.hpp"

namespace rrtlab {

namespace {

SpaceSpec space_of(const Workspace& ws) { return ws.space; }

// appends the accepted node and keeps every derived structure in sync
int commit_node(Tree& tree, NnIndex& index, int parent, State state,
                std::optional<ControlInput> control, int control_index,
                long iteration, const MetricSpec& metric) {
  TreeNode node;
  node.id = tree.size();
  node.parent = parent;
  node.state = std::move(state);
  node.control = control;
  node.birth_iteration = iteration;
  node.edge_length = distance(tree[parent].state, node.state, metric);
  tree.nodes.push_back(node);
  tree[parent].out_degree += 1;
  if (control_index >= 0 && control_index < 64)
    tree[parent].used_inputs |= (1ull << control_index);
  index.insert(node.id, tree.nodes.back().state);
  return node.id;
}

}  // namespace

ExtendResult extend(Tree& tree, NnIndex& index, const State& x_rand,
                    const Workspace& ws, const GoalRegion* goal,
                    const PlannerConfig& cfg, RngStream& rng, long iteration) {
  if (tree.size() == 0) throw std::logic_error("extend: tree is empty");
  const SpaceSpec space = space_of(ws);
  const double resolution =
      cfg.resolution > 0 ? cfg.resolution : ws.default_resolution();
  const int near_id = index.nearest(x_rand, rng);
  const TreeNode& near = tree[near_id];

  State x_new;
  std::optional<ControlInput> control;
  int control_index = -1;

  if (cfg.system.type == SystemType::holonomic) {
    x_new = holonomic_step(near.state, x_rand, cfg.system.eps);
    // a zero-length step would duplicate an existing state (this happens when
    // goal-biased sampling returns a state already in the tree); treat it as
    // a failed extension rather than growing a degenerate edge
    if (distance2(x_new, near.state, space) == 0.0)
      return ExtendResult{ExtendStatus::rejected, -1};
    if (!in_free_space(x_new, ws) ||
        segment_collides(near.state, x_new, ws, resolution))
      return ExtendResult{ExtendStatus::rejected, -1};
  } else {
    const CarState s_near = CarState::from_state(near.state);
    InputChoice choice;
    if (cfg.system.random_inputs) {
      choice = random_input_choice(cfg.system.car, s_near, cfg.system.ispec, rng);
    } else {
      choice = best_input_choice(cfg.system.car, s_near,
                                 CarState::from_state(x_rand), cfg.system.ispec,
                                 space);
    }
    // the same control from the same node lands on the same state; adding it
    // again would stack duplicate children on one parent
    if (choice.index < 64 && (near.used_inputs >> choice.index) & 1ull)
      return ExtendResult{ExtendStatus::rejected, -1};
    std::vector<CarState> trace;
    trace.reserve(cfg.system.ispec.substeps + 1);
    const CarState end =
        propagate_traced(cfg.system.car, s_near, choice.u, cfg.system.ispec, trace);
    // collision-check the integrated trajectory, not its chord
    for (size_t i = 0; i < trace.size(); ++i) {
      const State p = trace[i].to_state();
      if (!in_free_space(p, ws)) return ExtendResult{ExtendStatus::rejected, -1};
      if (i > 0 &&
          segment_collides(trace[i - 1].to_state(), p, ws, resolution))
        return ExtendResult{ExtendStatus::rejected, -1};
    }
    x_new = end.to_state();
    control = choice.u;
    control_index = choice.index;
  }

  const int id = commit_node(tree, index, near_id, std::move(x_new), control,
                             control_index, iteration, space);
  if (goal && in_goal(tree[id].state, *goal, space))
    return ExtendResult{ExtendStatus::reached, id};
  return ExtendResult{ExtendStatus::extended, id};
}

PlanResult build_rrt(const Workspace& ws, const GoalRegion* goal,
                     const PlannerConfig& cfg, RngStream& rng) {
  if (cfg.K < 1) throw ConfigError("build_rrt: K must be >= 1");
  if (cfg.goal_bias < 0 || cfg.goal_bias > 1)
    throw ConfigError("build_rrt: goal_bias must lie in [0, 1]");
  const SpaceSpec space = space_of(ws);
  if (static_cast<int>(cfg.start.size()) != space.coord_count())
    throw ConfigError("build_rrt: start state does not match the space");
  if (!in_free_space(cfg.start, ws))
    throw ConfigError("build_rrt: start state is in collision");

  PlanResult result;
  TreeNode root;
  root.id = 0;
  root.state = cfg.start;
  result.tree.nodes.push_back(root);
  NnIndex index(cfg.nn_backend, space);
  index.insert(0, cfg.start);

  if (goal && in_goal(cfg.start, *goal, space)) {
    result.status = PlanStatus::reached;
    result.goal_node = 0;
    result.goal_nodes.push_back(0);
    if (cfg.stop_on_goal) return result;
  }

  for (long i = 1; i <= cfg.K; ++i) {
    result.iterations_used = i;
    const State x_rand = (goal && cfg.goal_bias > 0 && rng.chance(cfg.goal_bias))
                             ? goal->center
                             : sample_uniform(ws, rng);
    bool stop = false;
    double best_d2 = std::numeric_limits<double>::infinity();
    while (true) {
      ++result.extensions_attempted;
      const ExtendResult ext = extend(result.tree, index, x_rand, ws, goal, cfg,
                                      rng, i);
      if (ext.status == ExtendStatus::rejected) {
        ++result.extensions_rejected;
        break;
      }
      if (ext.status == ExtendStatus::reached) {
        result.goal_nodes.push_back(ext.node_id);
        if (!result.goal_node) result.goal_node = ext.node_id;
        result.status = PlanStatus::reached;
        if (cfg.stop_on_goal) stop = true;
        break;
      }
      // extended: optionally keep marching toward the same sample
      if (!cfg.repeated_extend) break;
      const double d2 = distance2(result.tree.nodes.back().state, x_rand, space);
      if (d2 == 0.0) break;
      // march only while every step gets strictly closer to the sample.  a
      // true nearest-neighbour step always improves by the full step length,
      // but a random neighbour (or a car that overshoots) can stall, and
      // without this cutoff the loop would keep inserting nodes forever
      if (d2 >= best_d2) break;
      best_d2 = d2;
    }
    if (stop) break;
  }
  if (!result.goal_nodes.empty()) result.status = PlanStatus::reached;
  return result;
}

std::vector<PathEntry> extract_path(const Tree& tree, int leaf) {
  if (leaf < 0 || leaf >= tree.size())
    throw std::out_of_range("extract_path: unknown node id");
  std::vector<PathEntry> path;
  for (int id = leaf; id != -1; id = tree[id].parent)
    path.emplace_back(tree[id].state, tree[id].control);
  std::reverse(path.begin(), path.end());
  return path;
}

double path_cost(const std::vector<PathEntry>& path, const MetricSpec& metric) {
  if (path.empty()) throw std::invalid_argument("path_cost: empty path");
  double cost = 0;
  for (size_t i = 1; i < path.size(); ++i)
    cost += distance(path[i - 1].first, path[i].first, metric);
  return cost;
}

double node_cost_from_edges(const Tree& tree, int id) {
  if (id < 0 || id >= tree.size())
    throw std::out_of_range("node_cost_from_edges: unknown node id");
  double cost = 0;
  for (int cur = id; tree[cur].parent != -1; cur = tree[cur].parent)
    cost += tree[cur].edge_length;
  return cost;
}

std::vector<std::string> tree_csv_header(const SpaceSpec& space) {
  std::vector<std::string> h{"id", "parent_id", "birth_iteration", "out_degree"};
  if (space.type == SpaceType::car) {
    h.insert(h.end(), {"x", "y", "theta", "v", "phi"});
  } else {
    static const char* named[] = {"x", "y", "z"};
    for (int i = 0; i < space.dim; ++i)
      h.push_back(i < 3 ? named[i] : "c" + std::to_string(i));
  }
  return h;
}

std::string tree_to_csv(const Tree& tree, const SpaceSpec& space) {
  CsvWriter csv(tree_csv_header(space));
  for (const TreeNode& n : tree.nodes) {
    std::vector<std::string> row{format_int(n.id), format_int(n.parent),
                                 format_int(n.birth_iteration),
                                 format_int(n.out_degree)};
    for (double c : n.state) row.push_back(format_double(c));
    if (space.type == SpaceType::car) {
      if (n.control) {
        row.push_back(format_double(n.control->v));
        row.push_back(format_double(n.control->phi));
      } else {
        row.push_back("");
        row.push_back("");
      }
    }
    csv.row(row);
  }
  return csv.str();
}

}  // namespace rrtlab
