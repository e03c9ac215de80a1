#include "rrtlab/nn.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rrtlab {

NnBackend nn_backend_from_string(const std::string& s) {
  if (s == "linear") return NnBackend::linear;
  if (s == "kdtree") return NnBackend::kdtree;
  if (s == "random") return NnBackend::random;
  throw std::invalid_argument("unknown nn backend: " + s);
}

std::string to_string(NnBackend b) {
  switch (b) {
    case NnBackend::linear: return "linear";
    case NnBackend::kdtree: return "kdtree";
    case NnBackend::random: return "random";
  }
  return "?";
}

NnIndex::NnIndex(NnBackend backend, SpaceSpec space)
    : backend_(backend), in_use_(backend), space_(space) {
  dims_ = space_.coord_count();
  // the car metric wraps the heading, which a coordinate-axis split cannot
  // represent; fall back to the scan rather than return wrong neighbours
  if (backend_ == NnBackend::kdtree && space_.type == SpaceType::car)
    in_use_ = NnBackend::linear;
}

void NnIndex::insert(int id, const State& s) {
  if (id != n_)
    throw std::invalid_argument("NnIndex::insert: ids must be dense (expected " +
                                std::to_string(n_) + ", got " + std::to_string(id) + ")");
  if (static_cast<int>(s.size()) != dims_)
    throw std::invalid_argument("NnIndex::insert: state has wrong dimension");
  coords_.insert(coords_.end(), s.begin(), s.end());
  ++n_;
  if (in_use_ == NnBackend::kdtree) {
    // pending points (those beyond kd_size_) are scanned linearly on every
    // query; rebuild in bulk once the buffer outgrows sqrt(n)
    const long pending = n_ - kd_size_;
    if (pending * pending > n_ || pending > 2048) rebuild();
  }
}

State NnIndex::state_of(int id) const {
  if (id < 0 || id >= n_) throw std::out_of_range("NnIndex::state_of: bad id");
  return State(coords_.begin() + static_cast<size_t>(id) * dims_,
               coords_.begin() + static_cast<size_t>(id + 1) * dims_);
}

// Single source of truth for point-query distances: both the scan and the
// k-d traversal call this, so identical inputs give bit-identical doubles and
// the two backends cannot disagree, even on exact ties.
double NnIndex::point_d2(int id, const State& q) const {
  const double* p = coords_.data() + static_cast<size_t>(id) * dims_;
  if (space_.type == SpaceType::car) {
    const double dx = p[0] - q[0];
    const double dy = p[1] - q[1];
    const double dt = angle_dist(p[2], q[2]);
    return dx * dx + dy * dy + space_.w_theta * dt * dt;
  }
  double d2 = 0;
  for (int i = 0; i < dims_; ++i) {
    const double d = p[i] - q[i];
    d2 += d * d;
  }
  return d2;
}

int NnIndex::scan_range(int first, int last, const State& q, int best,
                        double& best_d2) const {
  for (int id = first; id < last; ++id) {
    const double d2 = point_d2(id, q);
    if (best < 0 || d2 < best_d2 || (d2 == best_d2 && id < best)) {
      best = id;
      best_d2 = d2;
    }
  }
  return best;
}

int NnIndex::build_recursive(int* ids, int count, int depth) {
  if (count <= 0) return -1;
  const int axis = depth % dims_;
  const int mid = count / 2;
  std::nth_element(ids, ids + mid, ids + count, [&](int a, int b) {
    return coords_[static_cast<size_t>(a) * dims_ + axis] <
           coords_[static_cast<size_t>(b) * dims_ + axis];
  });
  const int me = static_cast<int>(kd_.size());
  kd_.push_back(KdNode{ids[mid], axis, -1, -1});
  const int left = build_recursive(ids, mid, depth + 1);
  const int right = build_recursive(ids + mid + 1, count - mid - 1, depth + 1);
  kd_[me].left = left;
  kd_[me].right = right;
  return me;
}

void NnIndex::rebuild() {
  kd_.clear();
  kd_.reserve(n_);
  scratch_.resize(n_);
  for (int i = 0; i < n_; ++i) scratch_[i] = i;
  kd_root_ = build_recursive(scratch_.data(), n_, 0);
  kd_size_ = n_;
}

void NnIndex::query_recursive(int node, const State& q, int& best,
                              double& best_d2) const {
  if (node < 0) return;
  const KdNode& kn = kd_[node];
  const double d2 = point_d2(kn.point, q);
  if (best < 0 || d2 < best_d2 || (d2 == best_d2 && kn.point < best)) {
    best = kn.point;
    best_d2 = d2;
  }
  const double split = coords_[static_cast<size_t>(kn.point) * dims_ + kn.axis];
  const double delta = q[kn.axis] - split;
  const int near = delta < 0 ? kn.left : kn.right;
  const int far = delta < 0 ? kn.right : kn.left;
  query_recursive(near, q, best, best_d2);
  // prune with the strict inequality: axis distance never exceeds the true
  // point distance, so candidates tying best_d2 are always still visited
  if (delta * delta > best_d2) return;
  query_recursive(far, q, best, best_d2);
}

int NnIndex::nearest(const State& q) const {
  if (n_ == 0) throw std::out_of_range("NnIndex::nearest: index is empty");
  if (static_cast<int>(q.size()) != dims_)
    throw std::invalid_argument("NnIndex::nearest: query has wrong dimension");
  if (backend_ == NnBackend::random)
    throw std::invalid_argument("NnIndex::nearest: random backend needs an RngStream");
  int best = -1;
  double best_d2 = 0;
  if (in_use_ == NnBackend::kdtree) {
    query_recursive(kd_root_, q, best, best_d2);
    best = scan_range(kd_size_, n_, q, best, best_d2);  // pending buffer
  } else {
    best = scan_range(0, n_, q, best, best_d2);
  }
  return best;
}

int NnIndex::nearest(const State& q, RngStream& rng) const {
  if (backend_ == NnBackend::random) {
    if (n_ == 0) throw std::out_of_range("NnIndex::nearest: index is empty");
    return static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n_)));
  }
  return nearest(q);
}

std::vector<double> nearest_probability_trial(int n, int d, long trials,
                                              RngStream& rng) {
  if (n < 1 || d < 1 || trials < 1)
    throw std::invalid_argument("nearest_probability_trial: n, d, trials must be >= 1");
  std::vector<long> wins(n, 0);
  std::vector<double> pts(static_cast<size_t>(n) * d);
  std::vector<double> q(d);
  for (long t = 0; t < trials; ++t) {
    for (double& c : pts) c = rng.uniform01();
    for (double& c : q) c = rng.uniform01();
    int best = 0;
    double best_d2 = 0;
    for (int i = 0; i < n; ++i) {
      double d2 = 0;
      for (int k = 0; k < d; ++k) {
        const double diff = pts[static_cast<size_t>(i) * d + k] - q[k];
        d2 += diff * diff;
      }
      if (i == 0 || d2 < best_d2) {
        best = i;
        best_d2 = d2;
      }
    }
    ++wins[best];
  }
  std::vector<double> freq(n);
  for (int i = 0; i < n; ++i)
    freq[i] = static_cast<double>(wins[i]) / static_cast<double>(trials);
  return freq;
}

}  // namespace rrtlab
