#pragma once

#include <string>
#include <vector>

#include "rrtlab/space.hpp"

namespace rrtlab {

enum class NnBackend { linear, kdtree, random };

NnBackend nn_backend_from_string(const std::string& s);
std::string to_string(NnBackend b);

// Append-only nearest-neighbour index over dense node ids 0..n-1.
//
//   linear — exhaustive scan; the reference answer for everything else
//   kdtree — bulk-rebuilt k-d tree plus a linearly scanned pending buffer;
//            answers are identical to `linear`, ties included
//   random — ignores the query and returns a uniformly random id
//
// Ties are broken toward the smallest id.  Both deterministic backends
// evaluate squared distances through the same code path, so their comparisons
// see bit-identical values and agree even on exact floating-point ties.
//
// The k-d tree only accelerates holonomic spaces: the wrapped car heading
// does not split on a coordinate axis, so car-space indices silently run the
// linear scan instead (visible via backend_in_use()).
class NnIndex {
public:
  NnIndex(NnBackend backend, SpaceSpec space);

  // id must equal size(); the point is queryable immediately
  void insert(int id, const State& s);

  // deterministic backends only; throws if the backend needs randomness
  int nearest(const State& q) const;
  // any backend; the stream is consumed only by the random backend
  int nearest(const State& q, RngStream& rng) const;

  int size() const { return n_; }
  const SpaceSpec& space() const { return space_; }
  NnBackend backend() const { return backend_; }
  // what actually answers queries (kdtree falls back to linear for car spaces)
  NnBackend backend_in_use() const { return in_use_; }

  State state_of(int id) const;

private:
  struct KdNode {
    int point = -1;  // index into the flat coords buffer
    int axis = 0;
    int left = -1, right = -1;
  };

  double point_d2(int id, const State& q) const;
  int scan_range(int first, int last, const State& q, int best, double& best_d2) const;
  void rebuild();
  int build_recursive(int* ids, int count, int depth);
  void query_recursive(int node, const State& q, int& best, double& best_d2) const;

  NnBackend backend_;
  NnBackend in_use_;
  SpaceSpec space_;
  int dims_ = 0;  // coordinates stored per point
  int n_ = 0;
  std::vector<double> coords_;   // flat, n_ * dims_
  std::vector<KdNode> kd_;       // rebuilt in bulk
  int kd_root_ = -1;
  int kd_size_ = 0;              // points covered by the built tree
  std::vector<int> scratch_;     // rebuild workspace
};

// Empirical check of uniform nearest-neighbour selection: each trial draws n
// i.i.d. uniform points in [0,1]^d plus one query point and records which of
// the n is nearest.  Returns per-point frequencies indexed by insertion rank;
// exchangeability makes every rank equally likely (probability 1/n).
std::vector<double> nearest_probability_trial(int n, int d, long trials,
                                              RngStream& rng);

}  // namespace rrtlab
