#include "sscheck/bnb.hpp"

#include "sscheck/relax.hpp"

#include <algorithm>
#include <cmath>
#include <condition_variable>
#include <mutex>
#include <queue>
#include <set>
#include <thread>

namespace sscheck {

const char* to_string(BnbStatus status) {
  switch (status) {
    case BnbStatus::ThresholdExceeded: return "threshold_exceeded";
    case BnbStatus::Converged: return "converged";
    case BnbStatus::Deadline: return "deadline";
  }
  return "unknown";
}

SolutionPool::SolutionPool(std::size_t capacity, double eps_pool, double delta_unit)
    : capacity_(std::max<std::size_t>(capacity, 1)), eps_pool_(eps_pool), delta_unit_(delta_unit) {}

bool SolutionPool::offer(const Vector& x, double value) {
  if (!values_.empty() && value < values_.front() - eps_pool_) return false;
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if ((points_[k] - x).cwiseAbs().maxCoeff() <= delta_unit_) {
      if (value <= values_[k]) return false;
      points_.erase(points_.begin() + static_cast<std::ptrdiff_t>(k));
      values_.erase(values_.begin() + static_cast<std::ptrdiff_t>(k));
      break;
    }
  }
  const auto pos = std::upper_bound(values_.begin(), values_.end(), value, std::greater<>());
  const auto idx = pos - values_.begin();
  values_.insert(pos, value);
  points_.insert(points_.begin() + idx, x);
  trim();
  return static_cast<std::size_t>(idx) < values_.size();
}

void SolutionPool::trim() {
  const double floor = values_.front() - eps_pool_;
  while (!values_.empty() && (values_.back() < floor || values_.size() > capacity_)) {
    values_.pop_back();
    points_.pop_back();
  }
}

bool verify_certificate(const FactorMatrix& h, const Vector& x, const Tolerances& tol) {
  if (x.size() != static_cast<Eigen::Index>(h.rank()) || !x.allFinite()) return false;
  if ((h.entries().transpose() * x).minCoeff() < -tol.eps_feas) return false;
  if (std::abs(x.sum() - 1.0) > tol.eps_feas) return false;
  return x.squaredNorm() >= tol.stop_threshold;
}

std::vector<Vector> vertex_ascent(const Polytope& p, const Vector& start, const LpOptions& opts,
                                  std::size_t max_steps, std::size_t* pivots) {
  std::vector<Vector> visited;
  Vector x = start;
  for (std::size_t step = 0; step < max_steps; ++step) {
    const LpResult lp = maximize_linear(p, x, opts);
    if (pivots) *pivots += lp.pivots;
    if (lp.status != LpStatus::Optimal) break;
    // y maximizes x^T y over P, so ||y||^2 >= ||x||^2 + 2 x^T (y - x) >= ||x||^2.
    const bool improving = lp.objective > x.squaredNorm() + 1e-12 * (1.0 + x.squaredNorm());
    visited.push_back(lp.point);
    if (!improving) break;
    x = lp.point;
  }
  return visited;
}

namespace {

// Distance from e_i to the nearest constraint of P that is slack there,
// measured inside the affine hull of P. Within that distance only
// constraints active at e_i can be active, so e_i is the only vertex.
// Returns 0 when e_i is not in P.
double vertex_radius(const Polytope& p, Eigen::Index i) {
  const auto r = static_cast<Eigen::Index>(p.dim());
  const Vector e = UnitVector(static_cast<std::size_t>(i), static_cast<std::size_t>(r)).dense();
  if (p.violation(e) > 0.0) return 0.0;
  auto norm_in_hull = [&](const Vector& a) {
    return p.sum_constraint ? (a.array() - a.mean()).matrix().norm() : a.norm();
  };
  double rho = kInf;
  auto consider = [&](const Vector& a, double slack) {
    if (slack <= 0.0) return;
    const double na = norm_in_hull(a);
    if (na > 0.0) rho = std::min(rho, slack / na);
  };
  for (Eigen::Index j = 0; j < p.normals.rows(); ++j) consider(p.normals.row(j).transpose(), p.normals(j, i));
  for (Eigen::Index k = 0; k < r; ++k) {
    const Vector a = UnitVector(static_cast<std::size_t>(k), static_cast<std::size_t>(r)).dense();
    consider(a, e(k) - p.lower(k));
    consider(-a, p.upper(k) - e(k));
  }
  return std::isfinite(rho) ? rho : 0.0;
}

// Cap for coordinate i: a tau > 0 such that P ∩ {x_i >= 1 - tau} is
// e_i + tau C for the bounded slice C of the tangent cone at e_i, lies in the
// vertex-free ball, and has ||x||^2 <= 1 - tau off e_i. 0 when no cap applies
// (e_i not in P, or the cone slice is unbounded).
double unit_cap(const Polytope& p, Eigen::Index i, double rho, const LpOptions& opts) {
  if (rho <= 0.0) return 0.0;
  const auto r = static_cast<Eigen::Index>(p.dim());
  const Vector e = UnitVector(static_cast<std::size_t>(i), static_cast<std::size_t>(r)).dense();
  std::vector<Vector> active;
  for (Eigen::Index j = 0; j < p.normals.rows(); ++j) {
    if (p.normals(j, i) == 0.0) active.push_back(p.normals.row(j).transpose());
  }
  for (Eigen::Index k = 0; k < r; ++k) {
    const Vector a = UnitVector(static_cast<std::size_t>(k), static_cast<std::size_t>(r)).dense();
    if (e(k) == p.lower(k)) active.push_back(a);
    if (e(k) == p.upper(k)) active.push_back(-a);
  }
  constexpr double kWide = 1e6;
  LinearSystem cone;
  cone.rows = Matrix(static_cast<Eigen::Index>(active.size()), r);
  for (std::size_t q = 0; q < active.size(); ++q) cone.rows.row(static_cast<Eigen::Index>(q)) = active[q].transpose();
  cone.rhs = Vector::Zero(cone.rows.rows());
  if (p.sum_constraint) cone.sum_rhs = 0.0;
  cone.lower = Vector::Constant(r, -kWide);
  cone.upper = Vector::Constant(r, kWide);
  cone.lower(i) = -1.0;
  double radius2 = 0.0;
  for (Eigen::Index k = 0; k < r; ++k) {
    double reach = 0.0;
    for (double sign : {1.0, -1.0}) {
      Vector c = Vector::Zero(r);
      c(k) = sign;
      const LpResult lp = maximize(cone, c, opts);
      if (lp.status != LpStatus::Optimal || lp.objective > 0.5 * kWide) return 0.0;
      reach = std::max(reach, lp.objective);
    }
    radius2 += reach * reach;
  }
  const double radius = std::sqrt(radius2);
  if (radius <= 0.0) return 0.0;
  // Half the admissible value leaves room for LP rounding.
  return 0.5 * std::min({rho / radius, 1.0 / radius2, 1.0});
}

struct NodeOrder {
  bool operator()(const BnbNode& a, const BnbNode& b) const {
    if (a.ub != b.ub) return a.ub < b.ub;
    return a.id > b.id;
  }
};

struct Candidate {
  Vector x;
  double value;
  bool vertex;  // vertex of P (only these enter the pool in pool mode)
};

struct Expansion {
  std::vector<BnbNode> children;
  std::vector<Candidate> candidates;
  std::vector<double> fathomed_ubs;
  std::size_t pivots = 0;
};

class Search {
 public:
  Search(const Polytope& p, const BnbOptions& opts)
      : p_(p),
        opts_(opts),
        r_(static_cast<Eigen::Index>(p.dim())),
        start_(std::chrono::steady_clock::now()) {
    result_.pool = SolutionPool(opts.pool_capacity ? opts.pool_capacity : p.dim() + 1, opts.tol.eps_pool,
                                opts.tol.delta_unit);
    {
      radius_.resize(static_cast<std::size_t>(r_));
      cap_.resize(static_cast<std::size_t>(r_));
      for (Eigen::Index i = 0; i < r_; ++i) {
        radius_[static_cast<std::size_t>(i)] = vertex_radius(p, i);
        cap_[static_cast<std::size_t>(i)] = unit_cap(p, i, radius_[static_cast<std::size_t>(i)], opts.lp);
      }
    }
  }

  GlobalResult run() {
    seed();
    if (!stopped_) {
      const std::size_t workers = std::max<std::size_t>(opts_.workers, 1);
      if (workers == 1) {
        work();
      } else {
        std::vector<std::thread> threads;
        for (std::size_t w = 0; w < workers; ++w) threads.emplace_back([this] { work(); });
        for (auto& t : threads) t.join();
      }
    }
    finish();
    return std::move(result_);
  }

 private:
  bool prunable(double ub) const {
    if (opts_.pool_mode) return ub < best_ - opts_.tol.eps_pool;
    return ub <= best_ + opts_.tol.eps_gap * std::max(1.0, std::abs(best_));
  }

  bool deadline_passed() const {
    return std::chrono::steady_clock::now() - start_ >= opts_.deadline;
  }

  // Caller holds the lock (or runs single-threaded).
  void commit(const std::vector<Candidate>& cands) {
    for (const auto& c : cands) {
      if (!p_.contains(c.x, opts_.tol.eps_feas)) continue;
      if (c.value > best_) {
        best_ = c.value;
        result_.best_point = c.x;
      }
      if (c.vertex || !opts_.pool_mode) result_.pool.offer(c.x, c.value);
    }
    if (best_ >= opts_.tol.stop_threshold && !stopped_) {
      status_ = BnbStatus::ThresholdExceeded;
      stopped_ = true;
    }
  }

  void push(BnbNode node) {
    if (prunable(node.ub)) {
      pruned_ub_ = std::max(pruned_ub_, node.ub);
      return;
    }
    node.id = next_id_++;
    frontier_.push(std::move(node));
    if (frontier_.size() > opts_.max_nodes && !stopped_) {
      result_.node_limit_hit = true;
      status_ = BnbStatus::Deadline;
      stopped_ = true;
    }
  }

  static void add_scored(std::vector<Candidate>& out, const Vector& x, bool vertex) {
    out.push_back({x, x.squaredNorm(), vertex});
  }

  void seed() {
    const bool tighten = opts_.tighten_stride > 0;
    NodeBound root = node_upper_bound(p_, p_.lower, p_.upper, tighten, opts_.lp);
    result_.lp_pivots += root.lp_pivots;
    if (!root.feasible()) throw InfeasiblePolytope("branch-and-bound: polytope is empty");
    result_.nodes_explored = 1;

    std::vector<Candidate> cands;
    add_scored(cands, root.relax_point, false);
    for (const Vector& v : vertex_ascent(p_, root.relax_point, opts_.lp, 64, &result_.lp_pivots)) {
      add_scored(cands, v, true);
    }
    for (Eigen::Index i = 0; i < r_; ++i) {
      const Vector e = UnitVector(static_cast<std::size_t>(i), static_cast<std::size_t>(r_)).dense();
      if (!p_.contains(e, opts_.tol.eps_feas)) continue;
      add_scored(cands, e, true);
      for (const Vector& v : vertex_ascent(p_, e, opts_.lp, 64, &result_.lp_pivots)) add_scored(cands, v, true);
    }
    commit(cands);
    if (stopped_) return;

    {
      // Cut the caps around the unit vectors off the root box; the only
      // vertex inside cap i is e_i, already offered above, and the norm
      // there is at most 1.
      Vector hi = root.upper;
      bool cut = false;
      for (Eigen::Index i = 0; i < r_; ++i) {
        const double cap = cap_[static_cast<std::size_t>(i)];
        if (cap > 0.0 && p_.contains(UnitVector(static_cast<std::size_t>(i), static_cast<std::size_t>(r_)).dense(),
                                     opts_.tol.eps_feas)) {
          hi(i) = std::max(root.lower(i), std::min(hi(i), 1.0 - cap));
          cut = true;
        }
      }
      if (cut) {
        root = node_upper_bound(p_, root.lower, hi, tighten, opts_.lp);
        result_.lp_pivots += root.lp_pivots;
        if (!root.feasible()) return;
      }
    }

    BnbNode node;
    node.lower = root.lower;
    node.upper = root.upper;
    node.ub = root.ub;
    node.relax_point = root.relax_point;
    node.depth = 0;
    push(std::move(node));
  }

  Expansion expand(const BnbNode& node, double best_snapshot) const {
    Expansion ex;
    const Vector width = node.upper - node.lower;
    const double diam = width.maxCoeff();
    if (opts_.pool_mode && (diam <= opts_.tol.delta_unit || near_unit_vertex(node))) {
      ex.fathomed_ubs.push_back(node.ub);
      return ex;
    }

    const Vector gaps = secant_gaps(node.lower, node.upper, node.relax_point);
    Eigen::Index axis = 0;
    const double max_gap = gaps.maxCoeff(&axis);
    double split;
    if (max_gap <= 1e-13 * (1.0 + std::abs(node.ub))) {
      // The secant is exact at the relaxation vertex: the node maximum is
      // attained there. Pool mode keeps looking for ties elsewhere in the box.
      if (!opts_.pool_mode) {
        ex.fathomed_ubs.push_back(node.ub);
        return ex;
      }
      width.maxCoeff(&axis);
      split = node.lower(axis) + 0.5 * width(axis);
    } else {
      const double lo = node.lower(axis) + 0.1 * width(axis);
      const double hi = node.upper(axis) - 0.1 * width(axis);
      split = std::clamp(node.relax_point(axis), lo, hi);
    }

    const std::size_t depth = node.depth + 1;
    const bool tighten = opts_.tighten_stride > 0 && depth % opts_.tighten_stride == 0;
    for (int side = 0; side < 2; ++side) {
      Vector lo = node.lower;
      Vector hi = node.upper;
      if (side == 0) {
        hi(axis) = split;
      } else {
        lo(axis) = split;
      }
      NodeBound b = node_upper_bound(p_, lo, hi, tighten, opts_.lp);
      ex.pivots += b.lp_pivots;
      if (!b.feasible()) continue;
      const double value = b.relax_point.squaredNorm();
      add_scored(ex.candidates, b.relax_point, false);
      // In pool mode band points are polished to vertices; a non-vertex
      // point can sit in the band without being a maximizer.
      const double bar = opts_.pool_mode ? best_snapshot - opts_.tol.eps_pool : best_snapshot;
      if (value > bar) {
        std::size_t piv = 0;
        for (const Vector& v : vertex_ascent(p_, b.relax_point, opts_.lp, 64, &piv)) {
          add_scored(ex.candidates, v, true);
        }
        ex.pivots += piv;
      }
      BnbNode child;
      child.lower = std::move(b.lower);
      child.upper = std::move(b.upper);
      child.ub = std::min(b.ub, node.ub);
      child.relax_point = std::move(b.relax_point);
      child.depth = depth;
      ex.children.push_back(std::move(child));
    }
    return ex;
  }

  // Box lies strictly inside the vertex-free ball around some e_i (which the
  // seed already offered to the pool).
  bool near_unit_vertex(const BnbNode& node) const {
    for (Eigen::Index i = 0; i < r_; ++i) {
      const double rho = radius_[static_cast<std::size_t>(i)];
      if (rho <= 0.0) continue;
      double far = 0.0;
      for (Eigen::Index k = 0; k < r_; ++k) {
        const double ek = k == i ? 1.0 : 0.0;
        far += std::max(std::abs(node.lower(k) - ek), std::abs(node.upper(k) - ek)) *
               std::max(std::abs(node.lower(k) - ek), std::abs(node.upper(k) - ek));
      }
      if (std::sqrt(far) < rho * (1.0 - 1e-9)) return true;
    }
    return false;
  }

  void work() {
    std::unique_lock<std::mutex> lock(mu_);
    for (;;) {
      if (stopped_) break;
      if (deadline_passed()) {
        status_ = BnbStatus::Deadline;
        stopped_ = true;
        break;
      }
      if (frontier_.empty()) {
        if (in_flight_.empty()) {
          status_ = BnbStatus::Converged;
          stopped_ = true;
          break;
        }
        cv_.wait(lock);
        continue;
      }
      BnbNode node = frontier_.top();
      frontier_.pop();
      if (prunable(node.ub)) {
        pruned_ub_ = std::max(pruned_ub_, node.ub);
        continue;
      }
      const auto flight = in_flight_.insert(node.ub);
      const double snapshot = best_;
      lock.unlock();
      Expansion ex = expand(node, snapshot);
      lock.lock();
      in_flight_.erase(flight);
      result_.nodes_explored += ex.children.size();
      result_.lp_pivots += ex.pivots;
      for (double ub : ex.fathomed_ubs) pruned_ub_ = std::max(pruned_ub_, ub);
      commit(ex.candidates);
      for (auto& child : ex.children) push(std::move(child));
      cv_.notify_all();
    }
    cv_.notify_all();
  }

  void finish() {
    result_.status = status_;
    result_.best_value = best_;
    double ub = std::max(best_, pruned_ub_);
    if (status_ != BnbStatus::Converged) {
      if (!frontier_.empty()) ub = std::max(ub, frontier_.top().ub);
      for (double v : in_flight_) ub = std::max(ub, v);
    }
    result_.global_ub = ub;
    result_.elapsed = std::chrono::steady_clock::now() - start_;
  }

  const Polytope& p_;
  const BnbOptions& opts_;
  const Eigen::Index r_;
  const std::chrono::steady_clock::time_point start_;

  std::vector<double> radius_;
  std::vector<double> cap_;

  std::mutex mu_;
  std::condition_variable cv_;
  std::priority_queue<BnbNode, std::vector<BnbNode>, NodeOrder> frontier_;
  std::multiset<double> in_flight_;
  double best_ = -kInf;
  double pruned_ub_ = -kInf;
  std::size_t next_id_ = 0;
  bool stopped_ = false;
  BnbStatus status_ = BnbStatus::Deadline;
  GlobalResult result_;
};

}  // namespace

GlobalResult maximize_norm(const Polytope& p, const BnbOptions& opts) {
  opts.tol.validate();
  if (!p.is_bounded()) throw Error("maximize_norm needs a box-bounded polytope");
  Search search(p, opts);
  return search.run();
}

}  // namespace sscheck
