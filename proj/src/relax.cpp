#include "sscheck/relax.hpp"

#include <algorithm>
#include <cmath>

namespace sscheck {

SecantBound secant_overestimator(const Vector& lower, const Vector& upper) {
  if (lower.size() != upper.size()) throw DimensionError("secant: box bounds differ in dimension");
  if (!lower.allFinite() || !upper.allFinite()) throw Error("secant: box must be finite");
  for (Eigen::Index i = 0; i < lower.size(); ++i) {
    if (lower(i) > upper(i)) throw Error("secant: lower bound exceeds upper bound");
  }
  SecantBound s;
  s.slope = lower + upper;
  s.offset = -lower.cwiseProduct(upper).sum();
  return s;
}

Vector secant_gaps(const Vector& lower, const Vector& upper, const Vector& x) {
  return ((lower + upper).cwiseProduct(x) - lower.cwiseProduct(upper) - x.cwiseAbs2()).cwiseMax(0.0);
}

bool tighten_box(const Polytope& p, Vector& lower, Vector& upper, const LpOptions& opts, std::size_t* pivots) {
  const Polytope node = p.with_box(lower, upper);
  const auto r = static_cast<Eigen::Index>(p.dim());
  Vector lo = lower;
  Vector hi = upper;
  for (Eigen::Index i = 0; i < r; ++i) {
    Vector c = Vector::Zero(r);
    c(i) = 1.0;
    const LpResult up = maximize_linear(node, c, opts);
    if (pivots) *pivots += up.pivots;
    if (up.status != LpStatus::Optimal) return false;
    const LpResult down = maximize_linear(node, -c, opts);
    if (pivots) *pivots += down.pivots;
    if (down.status != LpStatus::Optimal) return false;
    // Pad by the LP's rounding so no feasible point is cut; stay inside the
    // original box.
    const double pad_lo = 1e-12 * (1.0 + std::abs(down.objective));
    const double pad_hi = 1e-12 * (1.0 + std::abs(up.objective));
    lo(i) = std::clamp(-down.objective - pad_lo, lower(i), upper(i));
    hi(i) = std::clamp(up.objective + pad_hi, lower(i), upper(i));
    if (lo(i) > hi(i)) lo(i) = hi(i) = 0.5 * (lo(i) + hi(i));
  }
  lower = lo;
  upper = hi;
  return true;
}

NodeBound node_upper_bound(const Polytope& p, const Vector& lower, const Vector& upper, bool tighten,
                           const LpOptions& opts) {
  NodeBound out;
  out.lower = lower;
  out.upper = upper;
  if (tighten && !tighten_box(p, out.lower, out.upper, opts, &out.lp_pivots)) return out;

  const SecantBound sec = secant_overestimator(out.lower, out.upper);
  const LpResult lp = maximize_linear(p.with_box(out.lower, out.upper), sec.slope, opts);
  out.lp_pivots += lp.pivots;
  if (lp.status != LpStatus::Optimal) return out;
  out.relax_point = lp.point;
  out.ub = lp.objective + sec.offset;
  return out;
}

}  // namespace sscheck
