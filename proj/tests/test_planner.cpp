#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <sstream>
#include <vector>

#include "rrtlab/planner.hpp"
#include "rrtlab/stats.hpp"

using namespace rrtlab;

namespace {

Workspace unit_square() {
  Workspace ws;
  ws.space = SpaceSpec{SpaceType::holonomic, 2, 0.1};
  ws.lo = {0.0, 0.0};
  ws.hi = {1.0, 1.0};
  return ws;
}

Workspace car_square(double side = 20.0) {
  Workspace ws;
  ws.space = SpaceSpec{SpaceType::car, 2, 0.1};
  ws.lo = {0.0, 0.0};
  ws.hi = {side, side};
  return ws;
}

PlannerConfig holo_cfg(State start = {0.5, 0.5}) {
  PlannerConfig cfg;
  cfg.system.type = SystemType::holonomic;
  cfg.system.eps = 0.05;
  cfg.start = std::move(start);
  return cfg;
}

PlannerConfig car_cfg(State start = {10.0, 10.0, 0.0}) {
  PlannerConfig cfg;
  cfg.system.type = SystemType::car;
  cfg.start = std::move(start);
  cfg.stop_on_goal = false;
  return cfg;
}

// structural checks every produced tree must satisfy
void check_tree_invariants(const Tree& tree) {
  REQUIRE(!tree.nodes.empty());
  CHECK(tree.nodes[0].parent == -1);
  CHECK(tree.nodes[0].birth_iteration == 0);
  std::vector<int> recount(tree.size(), 0);
  long degree_sum = 0;
  for (const TreeNode& n : tree.nodes) {
    CHECK(n.id == &n - tree.nodes.data());
    if (n.id > 0) {
      REQUIRE(n.parent >= 0);
      CHECK(n.parent < n.id);  // acyclicity: parents precede children
      ++recount[n.parent];
      CHECK(tree[n.parent].birth_iteration <= n.birth_iteration);
    }
    degree_sum += n.out_degree;
  }
  CHECK(degree_sum == tree.size() - 1);  // handshake identity
  for (const TreeNode& n : tree.nodes) CHECK(n.out_degree == recount[n.id]);
}

}  // namespace

TEST_CASE("K = 1 in an empty square always extends: exactly 2 nodes") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg();
  cfg.K = 1;
  RngStream rng(51, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  CHECK(res.tree.size() == 2);
  CHECK(res.extensions_attempted == 1);
  CHECK(res.extensions_rejected == 0);
  check_tree_invariants(res.tree);
}

TEST_CASE("goal containing the start: reached with a single node") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.5, 0.5});
  cfg.K = 100;
  cfg.stop_on_goal = true;
  const GoalRegion goal{{0.5, 0.5}, 0.2};
  RngStream rng(52, 0);
  const PlanResult res = build_rrt(ws, &goal, cfg, rng);
  CHECK(res.status == PlanStatus::reached);
  CHECK(res.tree.size() == 1);
  REQUIRE(res.goal_node.has_value());
  CHECK(*res.goal_node == 0);
  CHECK(res.iterations_used == 0);
}

TEST_CASE("5000-iteration holonomic run: bounds, step lengths, invariants") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.1, 0.1});
  cfg.K = 5000;
  RngStream rng(53, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  check_tree_invariants(res.tree);
  for (const TreeNode& n : res.tree.nodes) {
    REQUIRE(n.state.size() == 2);
    CHECK(n.state[0] >= 0.0);
    CHECK(n.state[0] <= 1.0);
    CHECK(n.state[1] >= 0.0);
    CHECK(n.state[1] <= 1.0);
    if (n.parent >= 0) {
      const double d = distance(n.state, res.tree[n.parent].state, ws.space);
      CHECK(d <= cfg.system.eps + 1e-12);
      CHECK(d == doctest::Approx(n.edge_length));
    }
  }
}

TEST_CASE("start state inside an obstacle is a configuration error") {
  Workspace ws = unit_square();
  ws.obstacles.push_back(Obstacle::make_disc({0.5, 0.5}, 0.1));
  PlannerConfig cfg = holo_cfg({0.5, 0.5});
  RngStream rng(54, 0);
  CHECK_THROWS_AS(build_rrt(ws, nullptr, cfg, rng), ConfigError);
}

TEST_CASE("extend: sample inside an obstacle still extends toward it") {
  Workspace ws = unit_square();
  ws.obstacles.push_back(Obstacle::make_disc({0.5, 0.5}, 0.05));
  PlannerConfig cfg = holo_cfg({0.5, 0.2});
  Tree tree;
  NnIndex index(cfg.nn_backend, ws.space);
  tree.nodes.push_back(TreeNode{0, -1, cfg.start, std::nullopt, 0, 0, 0, 0});
  index.insert(0, cfg.start);
  RngStream rng(55, 0);
  // x_rand at the obstacle center; the clipped eps-step stays outside
  const ExtendResult r =
      extend(tree, index, {0.5, 0.5}, ws, nullptr, cfg, rng, 1);
  CHECK(r.status == ExtendStatus::extended);
  REQUIRE(tree.size() == 2);
  CHECK(tree[1].state[1] == doctest::Approx(0.25));
  CHECK(tree[0].out_degree == 1);  // root degree 0 -> 1 on first success
}

TEST_CASE("extend: blocked step rejects and mutates nothing") {
  Workspace ws = unit_square();
  ws.obstacles.push_back(Obstacle::make_disc({0.5, 0.28}, 0.05));
  PlannerConfig cfg = holo_cfg({0.5, 0.2});
  Tree tree;
  NnIndex index(cfg.nn_backend, ws.space);
  tree.nodes.push_back(TreeNode{0, -1, cfg.start, std::nullopt, 0, 0, 0, 0});
  index.insert(0, cfg.start);
  RngStream rng(56, 0);
  // the eps-step from (0.5,0.2) toward (0.5,0.9) lands at (0.5,0.25), and the
  // obstacle covers y in [0.23, 0.33] at x = 0.5
  const ExtendResult r =
      extend(tree, index, {0.5, 0.9}, ws, nullptr, cfg, rng, 1);
  CHECK(r.status == ExtendStatus::rejected);
  CHECK(tree.size() == 1);
  CHECK(tree[0].out_degree == 0);
  CHECK(index.size() == 1);
}

TEST_CASE("rejected extensions consume iterations (Alg. 1 loop semantics)") {
  Workspace ws = unit_square();
  // wall with a gap: plenty of rejections
  ws.obstacles.push_back(Obstacle::make_box({0.45, 0.0}, {0.55, 0.8}));
  PlannerConfig cfg = holo_cfg({0.2, 0.5});
  cfg.K = 2000;
  RngStream rng(57, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  CHECK(res.iterations_used == 2000);
  CHECK(res.extensions_attempted == 2000);
  CHECK(res.extensions_rejected > 0);
  CHECK(res.tree.size() ==
        1 + res.extensions_attempted - res.extensions_rejected);
  check_tree_invariants(res.tree);
  // no node inside the wall
  for (const TreeNode& n : res.tree.nodes)
    CHECK(in_free_space(n.state, ws));
}

TEST_CASE("goal bias 1 with stop_on_goal walks straight to the goal") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.1, 0.1});
  cfg.K = 5000;
  cfg.goal_bias = 1.0;
  cfg.stop_on_goal = true;
  const GoalRegion goal{{0.9, 0.9}, 0.05};
  RngStream rng(58, 0);
  const PlanResult res = build_rrt(ws, &goal, cfg, rng);
  REQUIRE(res.status == PlanStatus::reached);
  // straight-line distance 8*sqrt(2)/10 ~ 1.1314, eps 0.05, radius 0.05
  // => ceil((1.1314 - 0.05)/0.05) = 22 extensions
  CHECK(res.tree.size() == 23);
  REQUIRE(res.goal_node.has_value());
  CHECK(in_goal(res.tree[*res.goal_node].state, goal, ws.space));
}

TEST_CASE("stop_on_goal = false keeps growing and records every goal node") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.1, 0.1});
  cfg.K = 3000;
  cfg.goal_bias = 0.05;
  cfg.stop_on_goal = false;
  const GoalRegion goal{{0.9, 0.9}, 0.05};
  RngStream rng(59, 0);
  const PlanResult res = build_rrt(ws, &goal, cfg, rng);
  CHECK(res.iterations_used == 3000);
  CHECK(res.status == PlanStatus::reached);
  CHECK(res.goal_nodes.size() > 1);
  // goal_node is the first entry and they arrive in birth order
  REQUIRE(res.goal_node.has_value());
  CHECK(res.goal_nodes.front() == *res.goal_node);
  for (size_t i = 1; i < res.goal_nodes.size(); ++i)
    CHECK(res.goal_nodes[i - 1] < res.goal_nodes[i]);
  for (int id : res.goal_nodes)
    CHECK(in_goal(res.tree[id].state, goal, ws.space));
  // Y_n (running best cost over goal nodes) is non-increasing by construction
  double best = std::numeric_limits<double>::infinity();
  for (int id : res.goal_nodes) {
    const double c = node_cost_from_edges(res.tree, id);
    const double y = std::min(best, c);
    CHECK(y <= best);
    best = y;
  }
}

TEST_CASE("repeated_extend walks multiple steps per iteration") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.5, 0.5});
  cfg.K = 10;
  cfg.repeated_extend = true;
  RngStream rng(60, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  check_tree_invariants(res.tree);
  CHECK(res.tree.size() > 11);  // strictly more than one node per iteration
  for (const TreeNode& n : res.tree.nodes)
    if (n.parent >= 0)
      CHECK(distance(n.state, res.tree[n.parent].state, ws.space) <=
            cfg.system.eps + 1e-12);
}

TEST_CASE("car tree: each control spawns at most one child per node") {
  Workspace ws = car_square();
  PlannerConfig cfg = car_cfg();
  cfg.K = 3000;
  RngStream rng(61, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  check_tree_invariants(res.tree);
  const int max_inputs = cfg.system.car.control_count();
  std::vector<std::set<std::pair<double, double>>> used(res.tree.size());
  for (const TreeNode& n : res.tree.nodes) {
    CHECK(n.out_degree <= max_inputs);
    if (n.parent < 0) continue;
    REQUIRE(n.control.has_value());
    const auto key = std::make_pair(n.control->v, n.control->phi);
    CHECK(used[n.parent].count(key) == 0);  // duplicate child = same state
    used[n.parent].insert(key);
  }
}

TEST_CASE("car run stays within bounds and traces are collision-checked") {
  Workspace ws = car_square();
  ws.obstacles.push_back(Obstacle::make_disc({10.0, 13.0}, 1.5));
  PlannerConfig cfg = car_cfg();
  cfg.K = 2000;
  RngStream rng(62, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  check_tree_invariants(res.tree);
  for (const TreeNode& n : res.tree.nodes) {
    CHECK(in_free_space(n.state, ws));
    CHECK(n.state[2] >= -M_PI);
    CHECK(n.state[2] < M_PI);
  }
}

TEST_CASE("extract_path: root leaf, chains, and cost agreement") {
  Workspace ws = unit_square();
  PlannerConfig cfg = holo_cfg({0.2, 0.2});
  cfg.K = 400;
  RngStream rng(63, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);

  const auto root_path = extract_path(res.tree, 0);
  REQUIRE(root_path.size() == 1);
  CHECK(root_path[0].first == cfg.start);
  CHECK_FALSE(root_path[0].second.has_value());
  CHECK(path_cost(root_path, ws.space) == 0.0);

  // deepest node: path states chain root -> leaf through tree edges
  int deep = 0;
  const auto depth = [&](int id) {
    int d = 0;
    for (; res.tree[id].parent >= 0; id = res.tree[id].parent) ++d;
    return d;
  };
  for (int i = 1; i < res.tree.size(); ++i)
    if (depth(i) > depth(deep)) deep = i;
  const auto path = extract_path(res.tree, deep);
  REQUIRE(path.size() == static_cast<size_t>(depth(deep) + 1));
  CHECK(path.front().first == cfg.start);
  CHECK(path.back().first == res.tree[deep].state);

  // summed metric equals the stored edge lengths
  double stored = 0;
  for (int id = deep; res.tree[id].parent >= 0; id = res.tree[id].parent)
    stored += res.tree[id].edge_length;
  CHECK(path_cost(path, ws.space) == doctest::Approx(stored).epsilon(1e-12));
  CHECK(node_cost_from_edges(res.tree, deep) ==
        doctest::Approx(stored).epsilon(1e-12));

  CHECK_THROWS_AS(extract_path(res.tree, res.tree.size() + 5),
                  std::out_of_range);
}

TEST_CASE("path_cost basics") {
  const MetricSpec m{SpaceType::holonomic, 2, 0.1};
  CHECK(path_cost({{State{0.2, 0.7}, std::nullopt}}, m) == 0.0);
  CHECK(path_cost({{State{0, 0}, std::nullopt}, {State{3, 4}, std::nullopt}},
                  m) == 5.0);
  CHECK(path_cost({{State{0, 0}, std::nullopt},
                   {State{0.5, 0}, std::nullopt},
                   {State{1, 0}, std::nullopt}},
                  m) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("random NN backend with goal bias 0 grows a uniform recursive tree") {
  // out-degrees then match the classical model: E[root degree] = H_{n-1}
  Workspace ws = unit_square();
  const int n_nodes = 200;
  const int replicates = 200;
  std::vector<double> root_degree;
  for (int r = 0; r < replicates; ++r) {
    PlannerConfig cfg = holo_cfg({0.5, 0.5});
    cfg.K = n_nodes - 1;
    cfg.nn_backend = NnBackend::random;
    RngStream rng(64, static_cast<std::uint64_t>(r));
    const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
    REQUIRE(res.tree.size() == n_nodes);  // empty space: every extension lands
    root_degree.push_back(static_cast<double>(res.tree[0].out_degree));
  }
  const double m = mean(root_degree);
  const double sd = sample_stddev(root_degree);
  const double expected = harmonic_number(n_nodes - 1);
  CHECK(std::fabs(m - expected) <=
        3.0 * sd / std::sqrt(static_cast<double>(replicates)));
}

TEST_CASE("identical config and seed give byte-identical serializations") {
  Workspace ws = car_square();
  PlannerConfig cfg = car_cfg();
  cfg.K = 500;
  RngStream r1(65, 0), r2(65, 0);
  const PlanResult a = build_rrt(ws, nullptr, cfg, r1);
  const PlanResult b = build_rrt(ws, nullptr, cfg, r2);
  CHECK(tree_to_csv(a.tree, ws.space) == tree_to_csv(b.tree, ws.space));
}

TEST_CASE("tree CSV: documented schema, root markers, constant width") {
  Workspace ws = car_square();
  PlannerConfig cfg = car_cfg();
  cfg.K = 60;
  RngStream rng(66, 0);
  const PlanResult res = build_rrt(ws, nullptr, cfg, rng);
  const std::string csv = tree_to_csv(res.tree, ws.space);

  std::istringstream in(csv);
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "id,parent_id,birth_iteration,out_degree,x,y,theta,v,phi");

  size_t rows = 0;
  while (std::getline(in, line)) {
    const size_t commas = std::count(line.begin(), line.end(), ',');
    CHECK(commas == 8);  // constant column count
    if (rows == 0) {
      // root row: parent -1, and both control cells empty (trailing ",,")
      CHECK(line.substr(0, 5) == "0,-1,");
      CHECK(line[line.size() - 1] == ',');
      CHECK(line[line.size() - 2] == ',');
    }
    ++rows;
  }
  CHECK(rows == static_cast<size_t>(res.tree.size()));

  const auto header = tree_csv_header(ws.space);
  REQUIRE(header.size() == 9);
  CHECK(header[0] == "id");
  CHECK(header[1] == "parent_id");
  CHECK(header[4] == "x");
}
