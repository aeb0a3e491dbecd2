#include "sscheck/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sscheck {

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i <= k; ++i) c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  return c;
}

bool lex_less(const Vector& a, const Vector& b) {
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    if (a(i) != b(i)) return a(i) < b(i);
  }
  return false;
}

}  // namespace

double enumeration_cost(const Polytope& p) {
  const std::size_t inequalities = p.num_rows() + 2 * p.dim();
  const std::size_t pick = p.sum_constraint ? p.dim() - 1 : p.dim();
  return binomial(inequalities, pick);
}

bool within_budget(const Polytope& p, const OracleLimits& limits) {
  return p.dim() <= limits.max_rank && p.num_rows() + 2 * p.dim() + 1 <= limits.max_constraints &&
         enumeration_cost(p) <= static_cast<double>(limits.max_subsets);
}

VertexList enumerate_vertices(const Polytope& p, const OracleLimits& limits, double eps_feas,
                              double delta_unit) {
  if (!p.is_bounded()) throw Error("vertex enumeration needs a bounded polytope");
  if (!within_budget(p, limits)) {
    std::ostringstream msg;
    msg << "vertex enumeration over budget: r = " << p.dim() << ", constraints = " << p.num_rows() + 2 * p.dim() + 1
        << ", candidate active sets = " << enumeration_cost(p);
    throw BudgetExceeded(msg.str());
  }

  const auto r = static_cast<Eigen::Index>(p.dim());
  const auto n = static_cast<Eigen::Index>(p.num_rows());
  const Eigen::Index m = n + 2 * r;
  // Inequality j as (row, rhs): H^T rows, then x_i >= l_i, then -x_i >= -u_i.
  Matrix rows = Matrix::Zero(m, r);
  Vector rhs = Vector::Zero(m);
  rows.topRows(n) = p.normals;
  for (Eigen::Index i = 0; i < r; ++i) {
    rows(n + i, i) = 1.0;
    rhs(n + i) = p.lower(i);
    rows(n + r + i, i) = -1.0;
    rhs(n + r + i) = -p.upper(i);
  }

  const Eigen::Index pick = p.sum_constraint ? r - 1 : r;
  std::vector<Vector> found;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(pick));
  for (Eigen::Index k = 0; k < pick; ++k) idx[static_cast<std::size_t>(k)] = k;

  Matrix a(r, r);
  Vector b(r);
  auto visit = [&]() {
    for (Eigen::Index k = 0; k < pick; ++k) {
      const Eigen::Index j = idx[static_cast<std::size_t>(k)];
      // Opposite bounds on one coordinate cannot both be active on a
      // nondegenerate box.
      if (j >= n + r) {
        const Eigen::Index coord = j - n - r;
        if (std::find(idx.begin(), idx.end(), n + coord) != idx.end()) return;
      }
      a.row(k) = rows.row(j);
      b(k) = rhs(j);
    }
    if (p.sum_constraint) {
      a.row(r - 1).setOnes();
      b(r - 1) = 1.0;
    }
    // Partial pivoting misses exactly repeated rows; use the rank.
    const Eigen::FullPivLU<Matrix> lu(a);
    if (!lu.isInvertible() || !(lu.rcond() > 1e-11)) return;
    const Vector x = lu.solve(b);
    if (!x.allFinite() || p.violation(x) > eps_feas) return;
    found.push_back(x);
  };

  if (pick == 0) {
    visit();
  } else {
    for (;;) {
      visit();
      Eigen::Index k = pick - 1;
      while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - pick + k) --k;
      if (k < 0) break;
      ++idx[static_cast<std::size_t>(k)];
      for (Eigen::Index q = k + 1; q < pick; ++q) idx[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q - 1)] + 1;
    }
  }

  std::sort(found.begin(), found.end(), lex_less);
  VertexList out;
  for (const Vector& v : found) {
    const bool dup = std::any_of(out.vertices.begin(), out.vertices.end(), [&](const Vector& w) {
      return (v - w).cwiseAbs().maxCoeff() <= delta_unit;
    });
    if (!dup) out.vertices.push_back(v);
  }
  std::ostringstream src;
  src << "polytope r=" << r << " rows=" << n << (p.sum_constraint ? " with e^T x = 1" : "") << " box=["
      << p.lower.minCoeff() << ", " << p.upper.maxCoeff() << "]";
  out.source = src.str();
  return out;
}

ExactMax exact_max_norm(const Polytope& p, const OracleLimits& limits, double eps_feas, double eps_pool,
                        double delta_unit) {
  const VertexList vl = enumerate_vertices(p, limits, eps_feas, delta_unit);
  ExactMax out;
  out.vertex_count = vl.vertices.size();
  for (const Vector& v : vl.vertices) out.value = std::max(out.value, v.squaredNorm());
  for (const Vector& v : vl.vertices) {
    if (v.squaredNorm() >= out.value - eps_pool) out.maximizers.push_back(v);
  }
  return out;
}

}  // namespace sscheck
