#include "sscheck/lp.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace sscheck {

const char* to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

namespace {

// Constraint rows in a fixed order; `eq` (if >= 0) is an equality that
// never leaves the basis.
struct DenseProblem {
  Matrix a;
  Vector b;
  int eq = -1;
};

struct Basis {
  std::vector<int> rows;
  Vector x;
  Vector lambda;  // c == B^T lambda, indexed by basis position
};

enum class Walk { Optimal, Unbounded };

Walk walk_vertices(const DenseProblem& prob, const Vector& c, Basis& basis, const LpOptions& opts,
                   std::size_t& pivots) {
  const auto d = static_cast<Eigen::Index>(basis.rows.size());
  const auto m = prob.a.rows();
  const double opt_tol = 1e-11 * std::max(1.0, c.cwiseAbs().maxCoeff());

  std::vector<char> in_basis(static_cast<std::size_t>(m), 0);
  for (int j : basis.rows) in_basis[static_cast<std::size_t>(j)] = 1;

  Matrix bmat(d, d);
  Vector rhs(d);
  for (;;) {
    for (Eigen::Index p = 0; p < d; ++p) {
      bmat.row(p) = prob.a.row(basis.rows[static_cast<std::size_t>(p)]);
      rhs(p) = prob.b(basis.rows[static_cast<std::size_t>(p)]);
    }
    const Eigen::PartialPivLU<Matrix> lu(bmat);
    const Matrix inv = lu.inverse();
    if (!inv.allFinite()) throw LpError("simplex basis became singular");
    basis.x = inv * rhs;
    basis.lambda = inv.transpose() * c;

    // Leaving constraint: lowest row index with a positive multiplier.
    Eigen::Index leave = -1;
    int leave_row = static_cast<int>(m);
    for (Eigen::Index p = 0; p < d; ++p) {
      const int row = basis.rows[static_cast<std::size_t>(p)];
      if (row == prob.eq) continue;
      if (basis.lambda(p) > opt_tol && row < leave_row) {
        leave = p;
        leave_row = row;
      }
    }
    if (leave < 0) return Walk::Optimal;

    if (++pivots > opts.max_pivots) throw LpError("simplex pivot budget exhausted");

    const Vector dir = inv.col(leave);
    const double piv_tol = 1e-9 * std::max(1.0, dir.cwiseAbs().maxCoeff());
    const Vector alpha = prob.a * dir;
    const Vector slack = prob.a * basis.x - prob.b;

    double tmin = kInf;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (in_basis[static_cast<std::size_t>(j)] || j == prob.eq || alpha(j) >= -piv_tol) continue;
      tmin = std::min(tmin, std::max(0.0, slack(j)) / -alpha(j));
    }
    if (!std::isfinite(tmin)) return Walk::Unbounded;

    const double tie = 1e-12 * std::max(1.0, tmin);
    Eigen::Index enter = -1;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (in_basis[static_cast<std::size_t>(j)] || j == prob.eq || alpha(j) >= -piv_tol) continue;
      if (std::max(0.0, slack(j)) / -alpha(j) <= tmin + tie) {
        enter = j;
        break;
      }
    }

    in_basis[static_cast<std::size_t>(leave_row)] = 0;
    in_basis[static_cast<std::size_t>(enter)] = 1;
    basis.rows[static_cast<std::size_t>(leave)] = static_cast<int>(enter);
  }
}

void check_system(const LinearSystem& s) {
  const auto d = s.lower.size();
  if (d < 1 || s.upper.size() != d) throw DimensionError("LP box has inconsistent dimension");
  if (s.rows.rows() > 0 && s.rows.cols() != d) throw DimensionError("LP rows do not match box dimension");
  if (s.rhs.size() != s.rows.rows()) throw DimensionError("LP rhs does not match row count");
  if (!s.lower.allFinite() || !s.upper.allFinite()) throw LpError("LP requires finite variable bounds");
}

struct Solved {
  LpResult result;
  Basis basis;   // final phase-2 basis (Optimal only)
};

// Two-phase solve. Phase 1 adds a slack s >= 0 to every general row,
// starting from a vertex of the box (intersected with the sum equality),
// and minimizes s.
Solved solve(const LinearSystem& sys, const Vector& c, const LpOptions& opts) {
  check_system(sys);
  const auto d = sys.lower.size();
  const auto m = sys.rows.rows();
  if (c.size() != d) throw DimensionError("LP objective dimension mismatch");

  const Eigen::Index lower0 = m;
  const Eigen::Index upper0 = m + d;
  const Eigen::Index eq_row = m + 2 * d;  // slot exists in certificates even without equality
  const bool has_eq = sys.sum_rhs.has_value();
  const double beta = has_eq ? *sys.sum_rhs : 0.0;

  Solved out;
  out.result.certificate = Vector();

  // Box vertex, adjusted so the coordinates sum to beta.
  Vector x0 = sys.lower;
  Eigen::Index free_coord = -1;
  std::vector<char> at_upper(static_cast<std::size_t>(d), 0);
  if (has_eq) {
    double rem = beta - sys.lower.sum();
    const double scale_tol = opts.eps_feas * std::max(1.0, std::abs(beta));
    if (rem < -scale_tol || sys.upper.sum() < beta - scale_tol) {
      Vector cert = Vector::Zero(static_cast<Eigen::Index>(sys.certificate_size()));
      if (rem < 0) {
        cert.segment(lower0, d).setOnes();
        cert(eq_row) = -1.0;
      } else {
        cert.segment(upper0, d).setOnes();
        cert(eq_row) = 1.0;
      }
      out.result.status = LpStatus::Infeasible;
      out.result.certificate = cert;
      return out;
    }
    // Raise coordinates in order; the one left partly raised is basic.
    // Saturated coordinates are set to the bound exactly so the starting
    // basis describes x0.
    for (Eigen::Index i = 0; i < d && rem > 0; ++i) {
      const double width = sys.upper(i) - sys.lower(i);
      if (rem >= width) {
        x0(i) = sys.upper(i);
        at_upper[static_cast<std::size_t>(i)] = 1;
        rem -= width;
        free_coord = i;
      } else {
        x0(i) += rem;
        rem = 0.0;
        free_coord = i;
      }
    }
    if (free_coord < 0) free_coord = 0;
  }

  // Phase-1 problem in (x, s).
  DenseProblem p1;
  const Eigen::Index s_low = eq_row + 1;
  const Eigen::Index s_up = eq_row + 2;
  p1.a = Matrix::Zero(s_up + 1, d + 1);
  p1.b = Vector::Zero(s_up + 1);
  if (m > 0) {
    p1.a.topLeftCorner(m, d) = sys.rows;
    p1.a.col(d).head(m).setOnes();
    p1.b.head(m) = sys.rhs;
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    p1.a(lower0 + i, i) = 1.0;
    p1.b(lower0 + i) = sys.lower(i);
    p1.a(upper0 + i, i) = -1.0;
    p1.b(upper0 + i) = -sys.upper(i);
  }
  if (has_eq) {
    p1.a.row(eq_row).head(d).setOnes();
    p1.b(eq_row) = beta;
    p1.eq = static_cast<int>(eq_row);
  } else {
    // Unused slot: a zero row with rhs -1 is never active nor violated.
    p1.b(eq_row) = -1.0;
  }
  double s0 = 0.0;
  Eigen::Index worst = s_low;
  if (m > 0) {
    const Vector viol = sys.rhs - sys.rows * x0;
    for (Eigen::Index j = 0; j < m; ++j) {
      if (viol(j) > s0) {
        s0 = viol(j);
        worst = j;
      }
    }
  }
  p1.a(s_low, d) = 1.0;
  p1.a(s_up, d) = -1.0;
  p1.b(s_up) = -(s0 + 1.0);

  Basis basis;
  for (Eigen::Index i = 0; i < d; ++i) {
    if (i == free_coord) continue;
    basis.rows.push_back(static_cast<int>(at_upper[static_cast<std::size_t>(i)] ? upper0 + i : lower0 + i));
  }
  if (has_eq) basis.rows.push_back(static_cast<int>(eq_row));
  basis.rows.push_back(static_cast<int>(worst));

  std::size_t pivots = 0;
  if (s0 > 0.0) {
    Vector c1 = Vector::Zero(d + 1);
    c1(d) = -1.0;
    if (walk_vertices(p1, c1, basis, opts, pivots) != Walk::Optimal) {
      throw LpError("phase-1 problem reported unbounded");
    }
    const double s_star = basis.x(d);
    if (s_star > opts.eps_feas) {
      Vector cert = Vector::Zero(static_cast<Eigen::Index>(sys.certificate_size()));
      for (std::size_t p = 0; p < basis.rows.size(); ++p) {
        const int row = basis.rows[p];
        const double mult = -basis.lambda(static_cast<Eigen::Index>(p));
        if (row == s_low || row == s_up) continue;
        if (row == eq_row) {
          cert(eq_row) = mult;
        } else {
          cert(row) = std::max(0.0, mult);
        }
      }
      out.result.status = LpStatus::Infeasible;
      out.result.certificate = cert;
      out.result.pivots = pivots;
      return out;
    }
  } else {
    basis.x = Vector::Zero(d + 1);
    basis.x.head(d) = x0;
  }

  // Drop the slack and, if needed, one more row to get a d x d basis.
  DenseProblem p2;
  p2.a = p1.a.topLeftCorner(eq_row + 1, d);
  p2.b = p1.b.head(eq_row + 1);
  p2.eq = p1.eq;
  std::vector<int> rows;
  for (int row : basis.rows) {
    if (row != s_low && row != s_up) rows.push_back(row);
  }
  if (static_cast<Eigen::Index>(rows.size()) > d) {
    double best_rcond = -1.0;
    std::size_t drop = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (rows[k] == p2.eq) continue;
      Matrix bm(d, d);
      Eigen::Index p = 0;
      for (std::size_t q = 0; q < rows.size(); ++q) {
        if (q != k) bm.row(p++) = p2.a.row(rows[q]);
      }
      // Ratio of smallest to largest pivot of a full-pivoting LU.
      const Eigen::FullPivLU<Matrix> lu(bm);
      const Vector piv = lu.matrixLU().diagonal().cwiseAbs();
      const double rc = piv.maxCoeff() > 0.0 ? piv.minCoeff() / piv.maxCoeff() : 0.0;
      if (rc > best_rcond) {
        best_rcond = rc;
        drop = k;
      }
    }
    rows.erase(rows.begin() + static_cast<std::ptrdiff_t>(drop));
  }
  Basis b2;
  b2.rows = std::move(rows);
  if (walk_vertices(p2, c, b2, opts, pivots) != Walk::Optimal) {
    out.result.status = LpStatus::Unbounded;
    out.result.pivots = pivots;
    return out;
  }
  out.result.status = LpStatus::Optimal;
  out.result.point = b2.x;
  out.result.objective = c.dot(b2.x);
  out.result.pivots = pivots;
  out.basis = std::move(b2);
  return out;
}

}  // namespace

LinearSystem to_linear_system(const Polytope& p) {
  LinearSystem s;
  s.rows = p.normals;
  s.rhs = Vector::Zero(p.normals.rows());
  if (p.sum_constraint) s.sum_rhs = 1.0;
  s.lower = p.lower;
  s.upper = p.upper;
  return s;
}

LpResult maximize(const LinearSystem& system, const Vector& objective, const LpOptions& opts) {
  return solve(system, objective, opts).result;
}

bool verify_farkas(const LinearSystem& sys, const Vector& cert, double eps) {
  const auto d = static_cast<Eigen::Index>(sys.dim());
  const auto m = static_cast<Eigen::Index>(sys.num_rows());
  if (cert.size() != static_cast<Eigen::Index>(sys.certificate_size())) return false;
  if (cert.head(m + 2 * d).minCoeff() < -eps) return false;
  const double scale = std::max(1e-300, cert.cwiseAbs().maxCoeff());
  const Vector mu = cert / scale;
  Vector combo = Vector::Zero(d);
  double value = 0.0;
  if (m > 0) {
    combo += sys.rows.transpose() * mu.head(m);
    value += sys.rhs.dot(mu.head(m));
  }
  combo += mu.segment(m, d);
  value += sys.lower.dot(mu.segment(m, d));
  combo -= mu.segment(m + d, d);
  value -= sys.upper.dot(mu.segment(m + d, d));
  const double nu = mu(m + 2 * d);
  if (sys.sum_rhs) {
    combo += Vector::Constant(d, nu);
    value += nu * *sys.sum_rhs;
  } else if (std::abs(nu) > eps) {
    return false;
  }
  return combo.cwiseAbs().maxCoeff() <= eps && value > eps;
}

LpResult cone_member(const FactorMatrix& h, const Vector& v, const LpOptions& opts) {
  const auto r = static_cast<Eigen::Index>(h.rank());
  const auto n = static_cast<Eigen::Index>(h.cols());
  if (v.size() != r) throw DimensionError("cone membership: vector dimension does not match rank");

  // Separation LP: maximize -v^T p over { H^T p >= 0, -1 <= p <= 1 }.
  // Optimum 0 means no separating p; the multipliers of the active H rows
  // then form the witness y.
  LinearSystem sys;
  sys.rows = h.entries().transpose();
  sys.rhs = Vector::Zero(n);
  sys.lower = Vector::Constant(r, -1.0);
  sys.upper = Vector::Ones(r);
  const Vector c = -v;
  Solved s = solve(sys, c, opts);
  if (s.result.status != LpStatus::Optimal) throw LpError("separation LP failed on a feasible system");

  LpResult out;
  out.pivots = s.result.pivots;
  const double tol = opts.eps_feas * std::max(1.0, v.lpNorm<1>());
  if (s.result.objective > tol) {
    out.status = LpStatus::Infeasible;
    out.certificate = s.result.point;
    out.objective = -s.result.objective;
    return out;
  }
  Vector y = Vector::Zero(n);
  for (std::size_t p = 0; p < s.basis.rows.size(); ++p) {
    const int row = s.basis.rows[p];
    if (row < n) y(row) = std::max(0.0, -s.basis.lambda(static_cast<Eigen::Index>(p)));
  }
  out.status = LpStatus::Optimal;
  out.point = y;
  out.objective = 0.0;
  return out;
}

bool verify_cone_witness(const FactorMatrix& h, const Vector& v, const Vector& y, double eps) {
  if (y.size() != static_cast<Eigen::Index>(h.cols()) || v.size() != static_cast<Eigen::Index>(h.rank())) {
    return false;
  }
  if (y.size() > 0 && y.minCoeff() < -eps) return false;
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  return (h.entries() * y - v).cwiseAbs().maxCoeff() <= eps * scale;
}

bool verify_separator(const FactorMatrix& h, const Vector& v, const Vector& p, double eps) {
  if (p.size() != static_cast<Eigen::Index>(h.rank()) || v.size() != p.size()) return false;
  if ((h.entries().transpose() * p).minCoeff() < -eps) return false;
  return p.dot(v) < -eps;
}

LpResult maximize_linear(const Polytope& p, const Vector& c, const LpOptions& opts) {
  if (!p.is_bounded()) throw LpError("maximize_linear needs a box-bounded polytope");
  if (c.size() != p.lower.size()) throw DimensionError("objective dimension does not match polytope");
  return solve(to_linear_system(p), c, opts).result;
}

std::pair<double, double> coordinate_range(const Polytope& p, std::size_t i, const LpOptions& opts) {
  if (i >= p.dim()) throw DimensionError("coordinate index out of range");
  Vector c = Vector::Zero(static_cast<Eigen::Index>(p.dim()));
  c(static_cast<Eigen::Index>(i)) = 1.0;
  const LpResult hi = maximize_linear(p, c, opts);
  if (hi.status != LpStatus::Optimal) throw LpError("coordinate range requested on an empty polytope");
  const LpResult lo = maximize_linear(p, -c, opts);
  if (lo.status != LpStatus::Optimal) throw LpError("coordinate range requested on an empty polytope");
  return {-lo.objective, hi.objective};
}

}  // namespace sscheck
