// Test-side reference implementations, written independently of the library.

#pragma once

#include "sscheck/core.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace testing {

using sscheck::Matrix;
using sscheck::Polytope;
using sscheck::Vector;

// Every constraint of P written as g^T x >= c (box included). The sum
// equality is handled separately.
struct Rows {
  Matrix g;
  Vector c;
};

inline Rows all_rows(const Polytope& p) {
  const auto r = static_cast<Eigen::Index>(p.dim());
  const auto n = p.normals.rows();
  Rows out{Matrix::Zero(n + 2 * r, r), Vector::Zero(n + 2 * r)};
  out.g.topRows(n) = p.normals;
  for (Eigen::Index i = 0; i < r; ++i) {
    out.g(n + i, i) = 1.0;
    out.c(n + i) = p.lower(i);
    out.g(n + r + i, i) = -1.0;
    out.c(n + r + i) = -p.upper(i);
  }
  return out;
}

// Vertices of a bounded polytope by trying every set of r - 1 (or r without
// the sum equality) constraints. Slow; fine for r <= 4 and a few dozen rows.
inline std::vector<Vector> brute_vertices(const Polytope& p, double tol = 1e-9) {
  const Rows rows = all_rows(p);
  const auto r = static_cast<Eigen::Index>(p.dim());
  const auto m = rows.g.rows();
  const Eigen::Index pick = p.sum_constraint ? r - 1 : r;
  std::vector<Vector> found;
  std::vector<Eigen::Index> idx;
  std::function<void(Eigen::Index)> rec = [&](Eigen::Index start) {
    if (static_cast<Eigen::Index>(idx.size()) == pick) {
      Matrix a(r, r);
      Vector b(r);
      for (Eigen::Index k = 0; k < pick; ++k) {
        a.row(k) = rows.g.row(idx[static_cast<std::size_t>(k)]);
        b(k) = rows.c(idx[static_cast<std::size_t>(k)]);
      }
      if (p.sum_constraint) {
        a.row(r - 1).setOnes();
        b(r - 1) = 1.0;
      }
      Eigen::FullPivLU<Matrix> lu(a);
      if (lu.rank() < r) return;
      const Vector x = lu.solve(b);
      if ((rows.g * x - rows.c).minCoeff() < -tol) return;
      for (const Vector& v : found) {
        if ((v - x).cwiseAbs().maxCoeff() < 1e-7) return;
      }
      found.push_back(x);
      return;
    }
    for (Eigen::Index j = start; j < m; ++j) {
      idx.push_back(j);
      rec(j + 1);
      idx.pop_back();
    }
  };
  rec(0);
  return found;
}

inline double brute_max_norm(const Polytope& p) {
  double best = -1.0;
  for (const Vector& v : brute_vertices(p)) best = std::max(best, v.squaredNorm());
  return best;
}

inline Matrix random_nonneg(std::size_t r, std::size_t n, std::uint64_t seed, double zero_prob = 0.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Matrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(n));
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, j) = u(rng) < zero_prob ? 0.0 : u(rng);
    if (m.col(j).sum() == 0.0) m(static_cast<Eigen::Index>(rng() % r), j) = 1.0;
  }
  return m;
}

inline bool contains_point(const std::vector<Vector>& set, const Vector& x, double tol) {
  return std::any_of(set.begin(), set.end(), [&](const Vector& v) { return (v - x).cwiseAbs().maxCoeff() <= tol; });
}

}  // namespace testing
