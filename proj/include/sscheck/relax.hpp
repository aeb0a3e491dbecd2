// Linear overestimation of sum_i x_i^2 over a box. For a single square the
// two McCormick upper inequalities coincide with the chord of x^2 over
// [l, u], so the relaxation of the whole objective is
//
//     sum_i x_i^2  <=  sum_i (l_i + u_i) x_i  -  sum_i l_i u_i.

#pragma once

#include "sscheck/core.hpp"
#include "sscheck/lp.hpp"

namespace sscheck {

struct SecantBound {
  Vector slope;  // l + u
  double offset = 0.0;  // -sum l_i u_i

  double evaluate(const Vector& x) const { return slope.dot(x) + offset; }
};

SecantBound secant_overestimator(const Vector& lower, const Vector& upper);

/// Per-coordinate gap (l_i + u_i) x_i - l_i u_i - x_i^2 between the chord and
/// the square at x.
Vector secant_gaps(const Vector& lower, const Vector& upper, const Vector& x);

struct NodeBound {
  double ub = -kInf;    // -inf when P intersected with the box is empty
  Vector relax_point;   // LP maximizer of the secant
  Vector lower;         // node box actually used (after tightening)
  Vector upper;
  std::size_t lp_pivots = 0;

  bool feasible() const { return ub > -kInf; }
};

/// Shrinks [lower, upper] to the LP coordinate ranges of P over that box.
/// Returns false when the intersection is empty.
bool tighten_box(const Polytope& p, Vector& lower, Vector& upper, const LpOptions& opts = {},
                 std::size_t* pivots = nullptr);

/// Upper bound on max sum x_i^2 over P intersected with [lower, upper], from
/// the secant LP. With `tighten`, the box is first shrunk by tighten_box.
NodeBound node_upper_bound(const Polytope& p, const Vector& lower, const Vector& upper, bool tighten,
                           const LpOptions& opts = {});

}  // namespace sscheck
