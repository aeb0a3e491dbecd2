// Spatial branch-and-bound for max ||x||_2^2 over a box-bounded polytope.
//
// Every node is a sub-box bounded from above by the secant LP (relax.hpp).
// Nodes are expanded best-bound first; each relaxation vertex is scored with
// the true objective and offered to the incumbent and the solution pool.
// In pool mode pruning is relaxed by eps_pool so every near-optimal vertex,
// not just one, ends up in the pool.

#pragma once

#include "sscheck/core.hpp"
#include "sscheck/lp.hpp"

#include <chrono>
#include <cstddef>
#include <vector>

namespace sscheck {

struct BnbNode {
  Vector lower;
  Vector upper;
  double ub = kInf;
  Vector relax_point;
  std::size_t depth = 0;
  std::size_t id = 0;  // creation order, breaks ub ties deterministically
};

/// Distinct near-optimal feasible points, best first.
class SolutionPool {
 public:
  SolutionPool(std::size_t capacity, double eps_pool, double delta_unit);

  /// Offers a feasible point. Returns true if it was stored.
  bool offer(const Vector& x, double value);

  std::size_t size() const { return points_.size(); }
  std::size_t capacity() const { return capacity_; }
  const std::vector<Vector>& points() const { return points_; }
  const std::vector<double>& values() const { return values_; }
  double best_value() const { return values_.empty() ? -kInf : values_.front(); }

 private:
  void trim();

  std::size_t capacity_;
  double eps_pool_;
  double delta_unit_;
  std::vector<Vector> points_;
  std::vector<double> values_;
};

enum class BnbStatus { ThresholdExceeded, Converged, Deadline };

const char* to_string(BnbStatus status);

class InfeasiblePolytope : public Error {
 public:
  using Error::Error;
};

struct BnbOptions {
  Tolerances tol;
  std::chrono::duration<double> deadline{300.0};
  bool pool_mode = false;
  std::size_t pool_capacity = 0;     // 0 means r + 1
  std::size_t tighten_stride = 4;    // LP box tightening every this many levels (0 disables)
  std::size_t max_nodes = 1000000;   // frontier cap; hitting it ends the run inconclusively
  std::size_t workers = 1;
  LpOptions lp;
};

struct GlobalResult {
  BnbStatus status = BnbStatus::Deadline;
  double best_value = -kInf;   // squared norm of best_point
  Vector best_point;
  double global_ub = kInf;
  SolutionPool pool{1, 1e-6, 1e-6};
  std::size_t nodes_explored = 0;
  std::size_t lp_pivots = 0;
  bool node_limit_hit = false;
  std::chrono::duration<double> elapsed{0.0};
};

GlobalResult maximize_norm(const Polytope& p, const BnbOptions& opts);

/// True iff H^T x >= -eps_feas, |e^T x - 1| <= eps_feas and ||x||^2 >= stop_threshold.
bool verify_certificate(const FactorMatrix& h, const Vector& x, const Tolerances& tol);

/// Convex ascent over P: repeatedly moves to the LP vertex maximizing the
/// linearization 2 x^T y. Returns the visited vertices; the last one has the
/// largest squared norm.
std::vector<Vector> vertex_ascent(const Polytope& p, const Vector& start, const LpOptions& opts,
                                  std::size_t max_steps = 64, std::size_t* pivots = nullptr);

}  // namespace sscheck
