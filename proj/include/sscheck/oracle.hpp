// Brute-force vertex enumeration for small polytopes. Used as an
// independent check of the LP and branch-and-bound code, and as the exact
// maximizer-set path when the instance is small enough.

#pragma once

#include "sscheck/core.hpp"

#include <string>
#include <vector>

namespace sscheck {

class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

struct OracleLimits {
  std::size_t max_rank = 8;
  std::size_t max_constraints = 60;   // n + 2r + 1
  std::size_t max_subsets = 3000000;  // active-set candidates examined
};

struct VertexList {
  std::vector<Vector> vertices;  // sorted lexicographically
  std::string source;
};

/// Number of candidate active sets enumerate_vertices would examine.
double enumeration_cost(const Polytope& p);
bool within_budget(const Polytope& p, const OracleLimits& limits);

VertexList enumerate_vertices(const Polytope& p, const OracleLimits& limits = {}, double eps_feas = 1e-9,
                              double delta_unit = 1e-6);

struct ExactMax {
  double value = -kInf;
  std::vector<Vector> maximizers;
  std::size_t vertex_count = 0;
};

ExactMax exact_max_norm(const Polytope& p, const OracleLimits& limits = {}, double eps_feas = 1e-9,
                        double eps_pool = 1e-6, double delta_unit = 1e-6);

}  // namespace sscheck
