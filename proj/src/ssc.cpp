#include "sscheck/ssc.hpp"

#include <algorithm>
#include <cmath>

namespace sscheck {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "holds";
    case Verdict::Fails: return "fails";
    case Verdict::Unknown: return "unknown";
  }
  return "unknown";
}

const char* to_string(Reason r) {
  switch (r) {
    case Reason::NcsscFailed: return "NcsscFailed";
    case Reason::NormExceedsOne: return "NormExceedsOne";
    case Reason::ExtraMaximizer: return "ExtraMaximizer";
    case Reason::AllChecksPassed: return "AllChecksPassed";
    case Reason::DeadlineReached: return "DeadlineReached";
    case Reason::SparsityScreenFailed: return "SparsityScreenFailed";
  }
  return "unknown";
}

const char* to_string(Method m) {
  return m == Method::BnbPool ? "BnbPool" : "OracleExact";
}

const char* to_string(MethodChoice m) {
  switch (m) {
    case MethodChoice::Auto: return "auto";
    case MethodChoice::Bnb: return "bnb";
    case MethodChoice::Oracle: return "oracle";
  }
  return "auto";
}

NcsscReport check_ncssc(const FactorMatrix& h, const LpOptions& opts) {
  const auto r = h.rank();
  NcsscReport rep;
  rep.holds = true;
  for (std::size_t i = 0; i < r; ++i) {
    const Vector v = Vector::Ones(static_cast<Eigen::Index>(r)) - UnitVector(i, r).dense();
    const LpResult res = cone_member(h, v, opts);
    rep.lp_pivots += res.pivots;
    if (res.status != LpStatus::Optimal) {
      rep.holds = false;
      rep.failing_index = static_cast<int>(i);
      rep.separator = res.certificate;
      return rep;
    }
    rep.witnesses.push_back(res.point);
  }
  return rep;
}

bool sparsity_screen(const FactorMatrix& h, double eps) {
  const auto& m = h.entries();
  const auto need = static_cast<Eigen::Index>(h.rank()) - 1;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Eigen::Index zeros = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j) zeros += m(i, j) < eps ? 1 : 0;
    if (zeros < need) return false;
  }
  return true;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

constexpr const char* kUnknownNote =
    "time limit reached after NC-SSC passed: no explored branch-and-bound node produced a point with "
    "squared norm above the threshold, so a violation is unlikely but the SSC is not certified";

SearchPhase phase_of(const char* name, const GlobalResult& g) {
  SearchPhase ph;
  ph.name = name;
  ph.status = to_string(g.status);
  ph.best_value = g.best_value;
  ph.upper_bound = g.global_ub;
  ph.nodes = g.nodes_explored;
  ph.seconds = g.elapsed.count();
  return ph;
}

void fail_norm(SscReport& rep, const Polytope& p, const Vector& witness, const LpOptions& lp) {
  // Climb to the best vertex reachable from the witness; the value can only grow.
  Vector best = witness;
  for (const Vector& v : vertex_ascent(p, witness, lp, 64, &rep.lp_pivots)) {
    if (v.squaredNorm() > best.squaredNorm() && p.contains(v, rep.tol.eps_feas)) best = v;
  }
  rep.verdict = Verdict::Fails;
  rep.reason = Reason::NormExceedsOne;
  rep.certificate = best;
  const double value = best.squaredNorm();
  if (value >= rep.tol.stop_threshold) {
    rep.certificate_threshold = rep.tol.stop_threshold;
  } else {
    rep.certificate_threshold = 1.0 + rep.tol.eps_pool;
    rep.note = "optimum exceeds one by less than the stop threshold; certificate verified against 1 + eps_pool";
  }
  rep.q_lower = std::max(rep.q_lower, value);
  rep.q_upper = std::max(rep.q_upper, rep.q_lower);
}

// Decide from a complete list of maximizers of the bounded problem.
void decide(SscReport& rep, const Polytope& p, double value, const std::vector<Vector>& maximizers,
            const std::vector<double>& values, Method method, const LpOptions& lp) {
  rep.method = method;
  rep.pool = maximizers;
  rep.pool_values = values;
  if (value > 1.0 + rep.tol.eps_pool) {
    const auto top = std::max_element(values.begin(), values.end()) - values.begin();
    fail_norm(rep, p, maximizers[static_cast<std::size_t>(top)], lp);
    return;
  }
  for (const Vector& x : maximizers) {
    if (nearest_unit_vector(x, rep.tol.delta_unit) < 0) {
      rep.verdict = Verdict::Fails;
      rep.reason = Reason::ExtraMaximizer;
      rep.certificate = x;
      rep.certificate_threshold = 1.0;
      return;
    }
  }
  rep.verdict = Verdict::Holds;
  rep.reason = Reason::AllChecksPassed;
  rep.label = method == Method::OracleExact ? "holds (exact at tolerance eps_feas)" : "holds (numerical)";
}

}  // namespace

SscReport check_ssc(const FactorMatrix& h, const SscOptions& opts) {
  opts.tol.validate();
  const auto t0 = Clock::now();
  SscReport rep;
  rep.tol = opts.tol;
  LpOptions lp;
  lp.eps_feas = opts.tol.eps_feas;

  auto done = [&]() -> SscReport {
    rep.total_seconds = seconds_since(t0);
    if (rep.label.empty()) rep.label = to_string(rep.verdict);
    return rep;
  };

  rep.sparsity_ok = sparsity_screen(h, opts.tol.eps_feas);
  if (opts.strict_sparsity && !rep.sparsity_ok) {
    rep.verdict = Verdict::Fails;
    rep.reason = Reason::SparsityScreenFailed;
    return done();
  }

  rep.ncssc = check_ncssc(h, lp);
  rep.lp_pivots += rep.ncssc.lp_pivots;
  rep.ncssc_seconds = seconds_since(t0);
  if (!rep.ncssc.holds) {
    rep.verdict = Verdict::Fails;
    rep.reason = Reason::NcsscFailed;
    return done();
  }

  const Polytope p = build_polytope(h, true);
  const bool in_budget = within_budget(p, opts.oracle);
  if (opts.method == MethodChoice::Oracle && !in_budget) {
    throw BudgetExceeded("instance exceeds the vertex-enumeration budget; use --method bnb or auto");
  }
  rep.q_lower = 1.0;  // unit vectors are feasible
  rep.q_upper = static_cast<double>(h.rank());

  auto run_oracle = [&]() {
    const auto t = Clock::now();
    const ExactMax ex = exact_max_norm(p, opts.oracle, opts.tol.eps_feas, opts.tol.eps_pool, opts.tol.delta_unit);
    SearchPhase ph;
    ph.name = "oracle";
    ph.status = "exact";
    ph.best_value = ph.upper_bound = ex.value;
    ph.nodes = ex.vertex_count;
    ph.seconds = seconds_since(t);
    rep.phases.push_back(ph);
    rep.q_lower = rep.q_upper = ex.value;
    std::vector<double> values;
    for (const Vector& v : ex.maximizers) values.push_back(v.squaredNorm());
    decide(rep, p, ex.value, ex.maximizers, values, Method::OracleExact, lp);
  };

  if (opts.method == MethodChoice::Oracle) {
    run_oracle();
    return done();
  }

  BnbOptions bopts;
  bopts.tol = opts.tol;
  bopts.workers = opts.workers;
  bopts.tighten_stride = opts.tighten_stride;
  bopts.max_nodes = opts.max_nodes;
  bopts.lp = lp;
  bopts.deadline = opts.deadline - (Clock::now() - t0);

  auto unknown = [&](const GlobalResult& g) {
    rep.verdict = Verdict::Unknown;
    rep.reason = Reason::DeadlineReached;
    rep.note = kUnknownNote;
    rep.q_lower = std::max(1.0, g.best_value);
    rep.q_upper = g.global_ub;
    rep.pool = g.pool.points();
    rep.pool_values = g.pool.values();
  };

  // Threshold phase: stop at the first point above the threshold.
  bopts.pool_mode = false;
  const GlobalResult first = maximize_norm(p, bopts);
  rep.phases.push_back(phase_of("threshold", first));
  rep.lp_pivots += first.lp_pivots;
  if (first.status == BnbStatus::ThresholdExceeded) {
    rep.method = Method::BnbPool;
    rep.pool = first.pool.points();
    rep.pool_values = first.pool.values();
    rep.q_upper = first.global_ub;
    fail_norm(rep, p, first.best_point, lp);
    return done();
  }
  if (first.status == BnbStatus::Deadline) {
    unknown(first);
    return done();
  }
  rep.q_lower = first.best_value;
  rep.q_upper = first.global_ub;
  if (first.best_value > 1.0 + opts.tol.eps_pool) {
    rep.method = Method::BnbPool;
    rep.pool = first.pool.points();
    rep.pool_values = first.pool.values();
    fail_norm(rep, p, first.best_point, lp);
    return done();
  }

  // Maximizer-set phase.
  if (opts.method == MethodChoice::Auto && in_budget) {
    run_oracle();
    return done();
  }
  bopts.pool_mode = true;
  bopts.pool_capacity = h.rank() + 1;
  bopts.deadline = opts.deadline - (Clock::now() - t0);
  const GlobalResult second = maximize_norm(p, bopts);
  rep.phases.push_back(phase_of("pool", second));
  rep.lp_pivots += second.lp_pivots;
  if (second.status == BnbStatus::Deadline) {
    unknown(second);
    return done();
  }
  rep.q_lower = second.best_value;
  rep.q_upper = std::max(second.global_ub, second.best_value);
  decide(rep, p, second.best_value, second.pool.points(), second.pool.values(), Method::BnbPool, lp);
  return done();
}

bool verify_report_certificate(const FactorMatrix& h, const SscReport& rep) {
  const auto r = h.rank();
  const double eps = rep.tol.eps_feas;
  auto witnesses_ok = [&]() {
    if (rep.ncssc.witnesses.size() != r) return false;
    for (std::size_t i = 0; i < r; ++i) {
      const Vector v = Vector::Ones(static_cast<Eigen::Index>(r)) - UnitVector(i, r).dense();
      if (!verify_cone_witness(h, v, rep.ncssc.witnesses[i], eps)) return false;
    }
    return true;
  };

  switch (rep.reason) {
    case Reason::SparsityScreenFailed:
      return !sparsity_screen(h, eps);
    case Reason::NcsscFailed: {
      if (rep.ncssc.failing_index < 0) return false;
      const auto i = static_cast<std::size_t>(rep.ncssc.failing_index);
      const Vector v = Vector::Ones(static_cast<Eigen::Index>(r)) - UnitVector(i, r).dense();
      return verify_separator(h, v, rep.ncssc.separator, eps);
    }
    case Reason::NormExceedsOne: {
      Tolerances t = rep.tol;
      t.stop_threshold = rep.certificate_threshold;
      return witnesses_ok() && verify_certificate(h, rep.certificate, t);
    }
    case Reason::ExtraMaximizer: {
      const Vector& x = rep.certificate;
      if (x.size() != static_cast<Eigen::Index>(r)) return false;
      return witnesses_ok() && std::abs(x.sum() - 1.0) <= eps &&
             std::abs(x.norm() - 1.0) <= rep.tol.eps_pool &&
             (h.entries().transpose() * x).minCoeff() >= -eps &&
             nearest_unit_vector(x, rep.tol.delta_unit) < 0;
    }
    case Reason::AllChecksPassed:
      return witnesses_ok() && std::all_of(rep.pool.begin(), rep.pool.end(), [&](const Vector& x) {
               return nearest_unit_vector(x, rep.tol.delta_unit) >= 0;
             });
    case Reason::DeadlineReached:
      return witnesses_ok();
  }
  return false;
}

}  // namespace sscheck
