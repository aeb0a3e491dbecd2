// Dense vertex simplex for LPs whose variable count is small (the rank r)
// and whose constraint count is large (the n columns of H).
//
// Problems are stated in inequality form
//
//     maximize c^T x  s.t.  a_j^T x >= b_j,  (sum x == beta),  lower <= x <= upper
//
// and solved by walking vertices: a basis is a set of `dim` linearly
// independent active constraints, the equality always among them. Leaving
// and entering choices follow Bland's lowest-index rule.

#pragma once

#include "sscheck/core.hpp"

#include <optional>
#include <utility>

namespace sscheck {

enum class LpStatus { Optimal, Infeasible, Unbounded };

const char* to_string(LpStatus status);

class LpError : public Error {
 public:
  using Error::Error;
};

struct LpOptions {
  double eps_feas = 1e-9;
  std::size_t max_pivots = 200000;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  Vector point;         // maximizer (Optimal) or membership witness
  double objective = 0.0;
  Vector certificate;   // Farkas multipliers / separating vector (Infeasible)
  std::size_t pivots = 0;
};

struct LinearSystem {
  Matrix rows;                    // m x d
  Vector rhs;                     // m
  std::optional<double> sum_rhs;  // e^T x == *sum_rhs when set
  Vector lower;                   // d, finite
  Vector upper;                   // d, finite

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(rows.rows()); }
  /// Size of a Farkas certificate vector: m rows, d lower, d upper, 1 equality.
  std::size_t certificate_size() const { return num_rows() + 2 * dim() + 1; }
};

LinearSystem to_linear_system(const Polytope& p);

/// Infeasible results carry multipliers (mu_rows, mu_lower, mu_upper, nu) with
/// mu >= 0, sum mu_j a_j + nu e == 0 and sum mu_j b_j + nu beta > 0.
LpResult maximize(const LinearSystem& system, const Vector& objective, const LpOptions& opts = {});

/// Checks a Farkas certificate produced by maximize().
bool verify_farkas(const LinearSystem& system, const Vector& certificate, double eps);

/// Is v in cone(H)? Optimal: point holds y >= 0 with H y == v (over the
/// stored, column-normalized H). Infeasible: certificate holds p with
/// p^T H >= 0 and p^T v < 0, scaled so that ||p||_inf <= 1.
LpResult cone_member(const FactorMatrix& h, const Vector& v, const LpOptions& opts = {});

bool verify_cone_witness(const FactorMatrix& h, const Vector& v, const Vector& y, double eps);
bool verify_separator(const FactorMatrix& h, const Vector& v, const Vector& p, double eps);

/// Requires finite bounds. Never Unbounded; the returned point is a vertex.
LpResult maximize_linear(const Polytope& p, const Vector& c, const LpOptions& opts = {});

/// Exact LP minimum and maximum of x_i over P. Throws LpError if P is empty.
std::pair<double, double> coordinate_range(const Polytope& p, std::size_t i, const LpOptions& opts = {});

}  // namespace sscheck
