#include "sscheck/core.hpp"

#include <cmath>
#include <sstream>

namespace sscheck {

void Tolerances::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(std::string("tolerance ") + name + " must be a positive finite number");
    }
  };
  positive(eps_feas, "eps_feas");
  positive(eps_gap, "eps_gap");
  positive(eps_pool, "eps_pool");
  positive(delta_unit, "delta_unit");
  positive(stop_threshold, "stop_threshold");
  if (!(stop_threshold > 1.0)) throw Error("stop_threshold must exceed 1");
}

UnitVector::UnitVector(std::size_t index, std::size_t dimension)
    : index(index), dimension(dimension) {
  if (index >= dimension) throw DimensionError("unit vector index out of range");
}

Vector UnitVector::dense() const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(dimension));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return v;
}

double UnitVector::distance(const Vector& x) const {
  if (static_cast<std::size_t>(x.size()) != dimension) {
    throw DimensionError("unit vector distance: dimension mismatch");
  }
  return (x - dense()).cwiseAbs().maxCoeff();
}

int nearest_unit_vector(const Vector& x, double radius) {
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    double dist = std::abs(x(i) - 1.0);
    for (Eigen::Index j = 0; j < x.size() && dist <= radius; ++j) {
      if (j != i) dist = std::max(dist, std::abs(x(j)));
    }
    if (dist <= radius) return static_cast<int>(i);
  }
  return -1;
}

FactorMatrix::FactorMatrix(const Matrix& entries) : source_cols_(static_cast<std::size_t>(entries.cols())) {
  const auto r = entries.rows();
  if (r < 2) throw InvalidMatrix("factor matrix needs rank r >= 2 (got " + std::to_string(r) + ")");
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    for (Eigen::Index i = 0; i < r; ++i) {
      const double v = entries(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        std::ostringstream msg;
        msg << "factor matrix entry (" << i + 1 << ", " << j + 1 << ") = " << v
            << " is not a nonnegative finite number";
        throw InvalidMatrix(msg.str());
      }
    }
  }

  std::vector<Eigen::Index> kept;
  for (Eigen::Index j = 0; j < entries.cols(); ++j) {
    const double s = entries.col(j).sum();
    if (s > 0.0) {
      kept.push_back(j);
      scale_.push_back(s);
    } else {
      dropped_.push_back(static_cast<std::size_t>(j));
    }
  }
  if (kept.empty()) throw InvalidMatrix("factor matrix has no nonzero column");

  h_.resize(r, static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    h_.col(static_cast<Eigen::Index>(k)) = entries.col(kept[k]) / scale_[k];
    source_.push_back(static_cast<std::size_t>(kept[k]));
  }
}

Vector FactorMatrix::to_source_weights(const Vector& y) const {
  if (static_cast<std::size_t>(y.size()) != cols()) {
    throw DimensionError("weight vector does not match the stored column count");
  }
  Vector out = Vector::Zero(static_cast<Eigen::Index>(source_cols_));
  for (std::size_t j = 0; j < cols(); ++j) {
    out(static_cast<Eigen::Index>(source_[j])) = y(static_cast<Eigen::Index>(j)) / scale_[j];
  }
  return out;
}

bool Polytope::is_bounded() const {
  return lower.allFinite() && upper.allFinite();
}

Polytope Polytope::with_box(Vector lo, Vector hi) const {
  if (lo.size() != lower.size() || hi.size() != upper.size()) {
    throw DimensionError("box dimension does not match polytope");
  }
  Polytope p = *this;
  p.lower = std::move(lo);
  p.upper = std::move(hi);
  return p;
}

double Polytope::violation(const Vector& x) const {
  if (x.size() != lower.size()) throw DimensionError("point dimension does not match polytope");
  double worst = 0.0;
  if (normals.rows() > 0) worst = std::max(worst, -(normals * x).minCoeff());
  if (sum_constraint) worst = std::max(worst, std::abs(x.sum() - 1.0));
  worst = std::max(worst, (lower - x).maxCoeff());
  worst = std::max(worst, (x - upper).maxCoeff());
  return worst;
}

Polytope build_polytope(const FactorMatrix& h, bool bounded) {
  const auto r = static_cast<Eigen::Index>(h.rank());
  Polytope p;
  p.normals = h.entries().transpose();
  p.sum_constraint = true;
  p.upper = Vector::Ones(r);
  p.lower = Vector::Constant(r, bounded ? -1.0 : 2.0 - static_cast<double>(r));
  return p;
}

bool second_order_cone_member(const Vector& x, SecondOrderCone cone, double eps_feas) {
  if (x.size() < 2) throw DimensionError("second-order cone test needs dimension r >= 2");
  const double coeff = cone == SecondOrderCone::Primal ? std::sqrt(static_cast<double>(x.size() - 1)) : 1.0;
  return x.sum() >= coeff * x.norm() - eps_feas;
}

Matrix identity_matrix(std::size_t r) {
  return Matrix::Identity(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r));
}

Matrix all_pairs_matrix(std::size_t r) {
  const auto n = static_cast<Eigen::Index>(r);
  return Matrix::Ones(n, n) - Matrix::Identity(n, n);
}

}  // namespace sscheck
