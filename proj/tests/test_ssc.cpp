#include "sscheck/ssc.hpp"

#include "sscheck/synth.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

using namespace sscheck;

namespace {

SscOptions with_method(MethodChoice m) {
  SscOptions o;
  o.method = m;
  o.deadline = std::chrono::duration<double>(60.0);
  return o;
}

Matrix permuted(const Matrix& m, std::mt19937_64& rng) {
  std::vector<Eigen::Index> rows(static_cast<std::size_t>(m.rows())), cols(static_cast<std::size_t>(m.cols()));
  std::iota(rows.begin(), rows.end(), 0);
  std::iota(cols.begin(), cols.end(), 0);
  std::shuffle(rows.begin(), rows.end(), rng);
  std::shuffle(cols.begin(), cols.end(), rng);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(rows[static_cast<std::size_t>(i)], cols[static_cast<std::size_t>(j)]);
  }
  return out;
}

}  // namespace

TEST_CASE("NC-SSC examples") {
  const FactorMatrix id(identity_matrix(3));
  NcsscReport rep = check_ncssc(id);
  CHECK(rep.holds);
  REQUIRE(rep.witnesses.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const Vector v = Vector::Ones(3) - UnitVector(i, 3).dense();
    CHECK((rep.witnesses[i] - v).norm() < 1e-12);
  }

  for (std::size_t r = 3; r <= 6; ++r) {
    const FactorMatrix ap(all_pairs_matrix(r));
    rep = check_ncssc(ap);
    CHECK(rep.holds);
    for (std::size_t i = 0; i < r; ++i) {
      // e - e_i is column i.
      const Vector w = ap.to_source_weights(rep.witnesses[i]);
      CHECK((w - UnitVector(i, r).dense()).norm() < 1e-9);
    }
  }

  const FactorMatrix ones(Matrix::Ones(3, 1));
  rep = check_ncssc(ones);
  CHECK_FALSE(rep.holds);
  CHECK(rep.failing_index == 0);
  CHECK(verify_separator(ones, Vector::Ones(3) - UnitVector(0, 3).dense(), rep.separator, 1e-9));
}

TEST_CASE("sparsity screen examples") {
  CHECK(sparsity_screen(FactorMatrix(identity_matrix(3))));
  CHECK_FALSE(sparsity_screen(FactorMatrix(testing::random_nonneg(3, 9, 4))));
  CHECK_FALSE(sparsity_screen(FactorMatrix(all_pairs_matrix(4))));
}

TEST_CASE("identity holds") {
  for (std::size_t r = 3; r <= 10; ++r) {
    const FactorMatrix h(identity_matrix(r));
    const SscReport rep = check_ssc(h);
    CHECK(rep.verdict == Verdict::Holds);
    CHECK(rep.reason == Reason::AllChecksPassed);
    CHECK(verify_report_certificate(h, rep));
  }
}

TEST_CASE("all-pairs fails with a norm certificate") {
  for (std::size_t r = 3; r <= 8; ++r) {
    const FactorMatrix h(all_pairs_matrix(r));
    for (MethodChoice m : {MethodChoice::Auto, MethodChoice::Bnb}) {
      const SscReport rep = check_ssc(h, with_method(m));
      CHECK(rep.verdict == Verdict::Fails);
      CHECK(rep.reason == Reason::NormExceedsOne);
      CHECK(rep.ncssc.holds);
      CHECK(verify_certificate(h, rep.certificate, rep.tol));
      CHECK(rep.certificate.squaredNorm() >= 1.0 + 1.0 / static_cast<double>(r - 1));
      CHECK(verify_report_certificate(h, rep));
    }
  }
}

TEST_CASE("all-pairs is rejected by the strict sparsity screen only in strict mode") {
  const FactorMatrix h(all_pairs_matrix(4));
  SscOptions strict;
  strict.strict_sparsity = true;
  const SscReport rep = check_ssc(h, strict);
  CHECK(rep.verdict == Verdict::Fails);
  CHECK(rep.reason == Reason::SparsityScreenFailed);
  CHECK(verify_report_certificate(h, rep));
  CHECK(check_ssc(h).reason == Reason::NormExceedsOne);
}

TEST_CASE("1-sparse matrix missing a unit vector fails") {
  Matrix m(3, 4);
  m << 1, 0, 2, 0,
       0, 0, 0, 0,
       0, 1, 0, 3;
  const FactorMatrix h(m);
  for (MethodChoice meth : {MethodChoice::Auto, MethodChoice::Bnb, MethodChoice::Oracle}) {
    const SscReport rep = check_ssc(h, with_method(meth));
    CHECK(rep.verdict == Verdict::Fails);
    CHECK(rep.reason == Reason::NcsscFailed);
    CHECK(verify_report_certificate(h, rep));
  }
}

TEST_CASE("oracle method refuses over-budget instances") {
  const FactorMatrix h(identity_matrix(9));
  CHECK_THROWS_AS(check_ssc(h, with_method(MethodChoice::Oracle)), BudgetExceeded);
  // Auto switches to the pool search instead.
  const SscReport rep = check_ssc(h, with_method(MethodChoice::Auto));
  CHECK(rep.verdict == Verdict::Holds);
  REQUIRE(rep.method.has_value());
  CHECK(*rep.method == Method::BnbPool);
}

TEST_CASE("an extra maximizer is reported") {
  // Facet normals of cone(e_1, e_2, e_3, x*) with x* = (2/3, 2/3, -1/3):
  // the polytope is conv{e_1, e_2, e_3, x*}, every vertex has norm 1.
  Matrix m(3, 4);
  m << 1, 0, 0, 1,
       0, 1, 1, 0,
       0, 0, 2, 2;
  const FactorMatrix h(m);
  Vector xstar(3);
  xstar << 2.0 / 3, 2.0 / 3, -1.0 / 3;
  for (MethodChoice meth : {MethodChoice::Oracle, MethodChoice::Bnb}) {
    const SscReport rep = check_ssc(h, with_method(meth));
    CHECK(rep.ncssc.holds);
    CHECK(rep.verdict == Verdict::Fails);
    CHECK(rep.reason == Reason::ExtraMaximizer);
    CHECK((rep.certificate - xstar).cwiseAbs().maxCoeff() < 1e-6);
    CHECK(verify_report_certificate(h, rep));
  }
}

TEST_CASE("bnb and oracle agree on random instances") {
  for (std::size_t r = 3; r <= 5; ++r) {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
      const std::size_t k = 1 + seed % (r - 1);
      const FactorMatrix h(generate({r, 3 * r, k, seed}));
      const SscReport a = check_ssc(h, with_method(MethodChoice::Oracle));
      const SscReport b = check_ssc(h, with_method(MethodChoice::Bnb));
      CHECK(a.verdict == b.verdict);
      CHECK(verify_report_certificate(h, a));
      CHECK(verify_report_certificate(h, b));
      if (a.verdict == Verdict::Holds) CHECK(std::abs(a.q_lower - b.q_lower) <= 1e-5);
    }
  }
}

TEST_CASE("invariance under permutation, column scaling and appended columns") {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> scale(0.1, 10.0);
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::size_t r = 3 + seed % 3;
    const Matrix m = generate({r, 3 * r, 1 + seed % (r - 1), seed + 100});
    const Verdict base = check_ssc(FactorMatrix(m)).verdict;
    REQUIRE(base != Verdict::Unknown);

    CHECK(check_ssc(FactorMatrix(permuted(m, rng))).verdict == base);

    Matrix scaled = m;
    for (Eigen::Index j = 0; j < scaled.cols(); ++j) scaled.col(j) *= scale(rng);
    CHECK(check_ssc(FactorMatrix(scaled)).verdict == base);

    Matrix grown(m.rows(), m.cols() + 3);
    grown << m, generate({r, 3, 1 + seed % (r - 1), seed + 5000});
    const Verdict after = check_ssc(FactorMatrix(grown)).verdict;
    if (base == Verdict::Holds) CHECK(after == Verdict::Holds);
  }
}

TEST_CASE("zero deadline yields unknown after NC-SSC") {
  const FactorMatrix h(generate({6, 30, 3, 1}));
  SscOptions o = with_method(MethodChoice::Bnb);
  o.deadline = std::chrono::duration<double>(0.0);
  const SscReport rep = check_ssc(h, o);
  if (rep.ncssc.holds && rep.verdict == Verdict::Unknown) {
    CHECK(rep.reason == Reason::DeadlineReached);
    CHECK(!rep.note.empty());
    CHECK(rep.q_lower <= rep.q_upper);
    CHECK(verify_report_certificate(h, rep));
  }
}

TEST_CASE("single-worker reports repeat exactly; multi-worker verdicts match") {
  const FactorMatrix h(generate({6, 30, 3, 4}));
  SscOptions o = with_method(MethodChoice::Bnb);
  const SscReport a = check_ssc(h, o);
  const SscReport b = check_ssc(h, o);
  CHECK(a.verdict == b.verdict);
  CHECK(a.reason == b.reason);
  CHECK(a.certificate == b.certificate);
  CHECK(a.q_lower == b.q_lower);
  CHECK(a.q_upper == b.q_upper);
  o.workers = 3;
  const SscReport c = check_ssc(h, o);
  CHECK(c.verdict == a.verdict);
  if (c.verdict == Verdict::Fails) CHECK(verify_report_certificate(h, c));
}

TEST_CASE("zero rows make NC-SSC fail") {
  Matrix m = identity_matrix(3);
  m(2, 2) = 0.0;
  m(0, 2) = 1.0;
  const SscReport rep = check_ssc(FactorMatrix(m));
  CHECK(rep.reason == Reason::NcsscFailed);
}
