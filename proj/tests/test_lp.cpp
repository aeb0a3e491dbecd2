#include "sscheck/lp.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <chrono>
#include <random>

using namespace sscheck;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

double max_over(const std::vector<Vector>& vs, const Vector& c) {
  double best = -kInf;
  for (const Vector& v : vs) best = std::max(best, c.dot(v));
  return best;
}

}  // namespace

TEST_CASE("cone_member: identity") {
  const FactorMatrix h(identity_matrix(3));
  const Vector v = vec({0, 1, 1});
  const LpResult res = cone_member(h, v);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK((res.point - v).norm() < 1e-12);
  CHECK(verify_cone_witness(h, v, res.point, 1e-9));
}

TEST_CASE("cone_member: single all-ones column") {
  const FactorMatrix h(Matrix::Ones(3, 1));
  const Vector v = vec({0, 1, 1});
  const LpResult res = cone_member(h, v);
  REQUIRE(res.status == LpStatus::Infeasible);
  const Vector& p = res.certificate;
  CHECK(verify_separator(h, v, p, 1e-9));
  CHECK(p.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
  // The hand-made separator e_1 - e_2 is also accepted.
  CHECK(verify_separator(h, v, vec({1, -1, 0}), 1e-9));
}

TEST_CASE("cone_member: all-pairs matrix, v is a column") {
  const FactorMatrix h(all_pairs_matrix(3));
  const Vector v = vec({0, 1, 1});
  const LpResult res = cone_member(h, v);
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(verify_cone_witness(h, v, res.point, 1e-9));
  const Vector w = h.to_source_weights(res.point);
  CHECK((w - vec({1, 0, 0})).norm() < 1e-12);
}

TEST_CASE("cone_member: dimension mismatch") {
  const FactorMatrix h(identity_matrix(3));
  CHECK_THROWS_AS(cone_member(h, Vector::Ones(4)), DimensionError);
}

TEST_CASE("witness / separator exclusivity on random inputs") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  int members = 0, separated = 0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t r = 2 + static_cast<std::size_t>(t % 5);
    const std::size_t n = 1 + static_cast<std::size_t>(rng() % 12);
    const FactorMatrix h(testing::random_nonneg(r, n, 100 + static_cast<std::uint64_t>(t), 0.4));
    Vector v(static_cast<Eigen::Index>(r));
    if (t % 3 == 0) {
      // Inside the cone by construction.
      Vector y(static_cast<Eigen::Index>(h.cols()));
      for (Eigen::Index j = 0; j < y.size(); ++j) y(j) = std::abs(g(rng));
      v = h.entries() * y;
    } else {
      for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = g(rng);
    }
    const LpResult res = cone_member(h, v);
    const bool witness = res.status == LpStatus::Optimal && verify_cone_witness(h, v, res.point, 1e-8);
    const bool sep = res.status == LpStatus::Infeasible && verify_separator(h, v, res.certificate, 1e-12);
    CHECK(witness != sep);
    if (t % 3 == 0) CHECK(witness);
    members += witness;
    separated += sep;
  }
  CHECK(members > 0);
  CHECK(separated > 0);
}

TEST_CASE("maximize_linear examples") {
  const Polytope id = build_polytope(FactorMatrix(identity_matrix(3)), true);
  LpResult res = maximize_linear(id, vec({1, 0, 0}));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK((res.point - vec({1, 0, 0})).norm() < 1e-12);

  // Every simplex point is optimal for c = e; the answer must be a vertex.
  res = maximize_linear(id, Vector::Ones(3));
  REQUIRE(res.status == LpStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(testing::contains_point(testing::brute_vertices(id), res.point, 1e-9));

  const Polytope ap = build_polytope(FactorMatrix(all_pairs_matrix(3)), true);
  const Vector c = vec({-1, 0, 0});
  res = maximize_linear(ap, c);
  REQUIRE(res.status == LpStatus::Optimal);
  const auto verts = testing::brute_vertices(ap);
  CHECK(res.objective == doctest::Approx(max_over(verts, c)));
  CHECK(res.objective == doctest::Approx(1.0));
  CHECK(res.point(0) == doctest::Approx(-1.0));
  CHECK(testing::contains_point(verts, vec({-1, 1, 1}), 1e-9));
}

TEST_CASE("maximize_linear: unbounded box is rejected") {
  Polytope p = build_polytope(FactorMatrix(identity_matrix(3)), true);
  p.upper(0) = kInf;
  CHECK_THROWS_AS(maximize_linear(p, Vector::Ones(3)), LpError);
}

TEST_CASE("infeasible systems carry Farkas certificates") {
  // Box [0.6, 1]^3 cannot meet e^T x = 1.
  Polytope p = build_polytope(FactorMatrix(identity_matrix(3)), true);
  p = p.with_box(Vector::Constant(3, 0.6), Vector::Ones(3));
  const LpResult res = maximize_linear(p, Vector::Ones(3));
  REQUIRE(res.status == LpStatus::Infeasible);
  CHECK(verify_farkas(to_linear_system(p), res.certificate, 1e-9));

  // Rows x_1 - x_2 >= 0.5 and x_2 - x_1 >= 0.5 contradict each other.
  LinearSystem s;
  s.rows = Matrix(2, 3);
  s.rows << 1, -1, 0, -1, 1, 0;
  s.rhs = vec({0.5, 0.5});
  s.lower = Vector::Constant(3, -1.0);
  s.upper = Vector::Ones(3);
  const LpResult r2 = maximize(s, Vector::Ones(3));
  REQUIRE(r2.status == LpStatus::Infeasible);
  CHECK(verify_farkas(s, r2.certificate, 1e-9));
  // A zero vector is not a certificate.
  CHECK_FALSE(verify_farkas(s, Vector::Zero(static_cast<Eigen::Index>(s.certificate_size())), 1e-9));
}

TEST_CASE("random systems: feasible point or Farkas certificate, never both") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  int feasible = 0, infeasible = 0;
  for (int t = 0; t < 400; ++t) {
    const Eigen::Index d = 2 + static_cast<Eigen::Index>(t % 4);
    const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng() % 10);
    LinearSystem s;
    s.rows = Matrix(m, d);
    for (Eigen::Index i = 0; i < s.rows.size(); ++i) s.rows.data()[i] = g(rng);
    s.rhs = Vector(m);
    for (Eigen::Index i = 0; i < m; ++i) s.rhs(i) = 0.7 * g(rng);
    if (t % 2 == 0) s.sum_rhs = g(rng);
    s.lower = Vector::Constant(d, -1.0);
    s.upper = Vector::Ones(d);
    Vector c(d);
    for (Eigen::Index i = 0; i < d; ++i) c(i) = g(rng);
    const LpResult res = maximize(s, c);
    if (res.status == LpStatus::Optimal) {
      ++feasible;
      const Vector& x = res.point;
      CHECK((s.rows * x - s.rhs).minCoeff() >= -1e-9);
      CHECK((x - s.lower).minCoeff() >= -1e-9);
      CHECK((s.upper - x).minCoeff() >= -1e-9);
      if (s.sum_rhs) CHECK(std::abs(x.sum() - *s.sum_rhs) <= 1e-9);
      CHECK_FALSE(res.certificate.size() > 0);
    } else {
      REQUIRE(res.status == LpStatus::Infeasible);
      ++infeasible;
      CHECK(verify_farkas(s, res.certificate, 1e-9));
    }
  }
  CHECK(feasible > 50);
  CHECK(infeasible > 20);
}

TEST_CASE("LP optimum matches vertex enumeration and is a vertex") {
  std::mt19937_64 rng(23);
  std::normal_distribution<double> g;
  for (int t = 0; t < 60; ++t) {
    const std::size_t r = 3 + static_cast<std::size_t>(t % 2);
    const FactorMatrix h(testing::random_nonneg(r, 6, 500 + static_cast<std::uint64_t>(t), 0.5));
    const Polytope p = build_polytope(h, t % 3 != 0);
    const auto verts = testing::brute_vertices(p);
    REQUIRE(!verts.empty());
    Vector c(static_cast<Eigen::Index>(r));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = g(rng);
    const LpResult res = maximize_linear(p, c);
    REQUIRE(res.status == LpStatus::Optimal);
    CHECK(res.objective == doctest::Approx(max_over(verts, c)).epsilon(1e-9));
    CHECK(testing::contains_point(verts, res.point, 1e-7));

    // With ||d||_inf = 1 the optimal value moves by at most eps ||x||_1.
    const double eps = 1e-7;
    Vector d(static_cast<Eigen::Index>(r));
    for (Eigen::Index i = 0; i < d.size(); ++i) d(i) = g(rng);
    d /= d.cwiseAbs().maxCoeff();
    const LpResult pert = maximize_linear(p, c + eps * d);
    REQUIRE(pert.status == LpStatus::Optimal);
    CHECK(std::abs(pert.objective - res.objective) <= eps * std::max(res.point.lpNorm<1>(), pert.point.lpNorm<1>()) + 1e-12);
  }
}

TEST_CASE("coordinate ranges") {
  const Polytope id = build_polytope(FactorMatrix(identity_matrix(3)), true);
  auto [lo, hi] = coordinate_range(id, 0);
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(1.0));

  const Polytope ap5 = build_polytope(FactorMatrix(all_pairs_matrix(5)), false);
  std::tie(lo, hi) = coordinate_range(ap5, 0);
  CHECK(lo == doctest::Approx(-3.0));
  CHECK(hi == doctest::Approx(1.0));

  const Polytope ap3 = build_polytope(FactorMatrix(all_pairs_matrix(3)), true);
  const auto verts = testing::brute_vertices(ap3);
  std::tie(lo, hi) = coordinate_range(ap3, 0);
  CHECK(lo == doctest::Approx(-max_over(verts, vec({-1, 0, 0}))));
  CHECK(hi == doctest::Approx(max_over(verts, vec({1, 0, 0}))));
  CHECK(lo == doctest::Approx(-1.0));
  CHECK(hi == doctest::Approx(1.0));

  CHECK_THROWS_AS(coordinate_range(id, 3), DimensionError);
  const Polytope empty = id.with_box(Vector::Constant(3, 0.6), Vector::Ones(3));
  CHECK_THROWS_AS(coordinate_range(empty, 0), LpError);
}

TEST_CASE("performance: n = 200, r = 10") {
  const FactorMatrix h(testing::random_nonneg(10, 200, 99, 0.5));
  const Polytope p = build_polytope(h, true);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  double worst = 0.0;
  for (int t = 0; t < 5; ++t) {
    Vector c(10);
    for (Eigen::Index i = 0; i < 10; ++i) c(i) = g(rng);
    const auto t0 = std::chrono::steady_clock::now();
    const LpResult res = maximize_linear(p, c);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(res.status == LpStatus::Optimal);
    worst = std::max(worst, sec);
  }
  MESSAGE("slowest solve: " << worst * 1e3 << " ms");
  CHECK(worst <= 0.050);
}
