// Domain types shared by every stage of the SSC check: the factor matrix,
// tolerance bundle, unit vectors and the box-bounded polytope
//
//   { x : e^T x = 1,  H^T x >= 0,  lower <= x <= upper }.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace sscheck {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class InvalidMatrix : public Error {
 public:
  using Error::Error;
};

struct Tolerances {
  double eps_feas = 1e-9;
  double eps_gap = 1e-6;
  double stop_threshold = 1.0001;  // applied to the squared norm
  double eps_pool = 1e-6;
  double delta_unit = 1e-6;

  /// Throws Error when any field is out of range.
  void validate() const;
};

/// e_i in R^dimension.
struct UnitVector {
  std::size_t index = 0;
  std::size_t dimension = 0;

  UnitVector(std::size_t index, std::size_t dimension);
  Vector dense() const;
  /// l-infinity distance from x to e_i.
  double distance(const Vector& x) const;
};

/// Index of the unit vector within l-infinity distance `radius` of x, or -1.
int nearest_unit_vector(const Vector& x, double radius);

/// Nonnegative r x n matrix H. Columns are stored normalized to unit 1-norm;
/// all-zero columns are dropped. The mapping back to the caller's columns is
/// kept so certificates can be reported against the original input.
class FactorMatrix {
 public:
  explicit FactorMatrix(const Matrix& entries);

  std::size_t rank() const { return static_cast<std::size_t>(h_.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(h_.cols()); }
  const Matrix& entries() const { return h_; }

  /// Original column index of stored column j.
  std::size_t source_column(std::size_t j) const { return source_[j]; }
  /// 1-norm the stored column j was divided by.
  double column_scale(std::size_t j) const { return scale_[j]; }
  std::size_t source_cols() const { return source_cols_; }
  const std::vector<std::size_t>& dropped_columns() const { return dropped_; }

  /// Rewrites a combination y over stored columns as one over the original
  /// columns, i.e. H_orig * result == entries() * y.
  Vector to_source_weights(const Vector& y) const;

 private:
  Matrix h_;
  std::vector<std::size_t> source_;
  std::vector<double> scale_;
  std::vector<std::size_t> dropped_;
  std::size_t source_cols_ = 0;
};

/// { x : (sum x = 1 if sum_constraint), normals * x >= 0, lower <= x <= upper }.
struct Polytope {
  Matrix normals;  // n x r, rows are constraint normals
  bool sum_constraint = true;
  Vector lower;
  Vector upper;

  std::size_t dim() const { return static_cast<std::size_t>(lower.size()); }
  std::size_t num_rows() const { return static_cast<std::size_t>(normals.rows()); }
  bool is_bounded() const;

  /// Same constraint rows over a different box.
  Polytope with_box(Vector lo, Vector hi) const;

  /// Largest violation of any constraint at x (0 when feasible).
  double violation(const Vector& x) const;
  bool contains(const Vector& x, double eps) const { return violation(x) <= eps; }
};

/// Bounded: box [-1, 1]^r. Unbounded formulation: box [2 - r, 1]^r, the
/// range every feasible point already lies in whenever H passes NC-SSC.
Polytope build_polytope(const FactorMatrix& h, bool bounded);

enum class SecondOrderCone { Primal, Dual };

/// Primal: e^T x >= sqrt(r - 1) ||x||_2. Dual: e^T x >= ||x||_2.
bool second_order_cone_member(const Vector& x, SecondOrderCone cone, double eps_feas = 1e-9);

Matrix identity_matrix(std::size_t r);
/// e e^T - I.
Matrix all_pairs_matrix(std::size_t r);

}  // namespace sscheck
