// End-to-end SSC decision.
//
//   1. NC-SSC: e - e_i in cone(H) for every i (one LP each).
//   2. Maximize ||x||^2 over { e^T x = 1, H^T x >= 0, -1 <= x <= 1 }. A
//      point above 1 is a violation certificate.
//   3. If the optimum is 1, every maximizer must be a unit vector. The
//      maximizer set comes from the vertex oracle when the instance is small,
//      otherwise from a pool-mode branch-and-bound run.

#pragma once

#include "sscheck/bnb.hpp"
#include "sscheck/core.hpp"
#include "sscheck/lp.hpp"
#include "sscheck/oracle.hpp"

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace sscheck {

enum class Verdict { Holds, Fails, Unknown };

enum class Reason {
  NcsscFailed,
  NormExceedsOne,
  ExtraMaximizer,
  AllChecksPassed,
  DeadlineReached,
  SparsityScreenFailed,  // strict mode only
};

enum class Method { BnbPool, OracleExact };

enum class MethodChoice { Auto, Bnb, Oracle };

const char* to_string(Verdict v);
const char* to_string(Reason r);
const char* to_string(Method m);
const char* to_string(MethodChoice m);

struct NcsscReport {
  bool holds = false;
  std::vector<Vector> witnesses;  // y_i >= 0 with H y_i = e - e_i, stored columns
  int failing_index = -1;         // 0-based
  Vector separator;               // p with p^T H >= 0, p^T (e - e_i) < 0
  std::size_t lp_pivots = 0;
};

NcsscReport check_ncssc(const FactorMatrix& h, const LpOptions& opts = {});

/// True iff every row of H has at least r - 1 entries below eps.
bool sparsity_screen(const FactorMatrix& h, double eps = 1e-9);

struct SscOptions {
  Tolerances tol;
  std::chrono::duration<double> deadline{300.0};
  MethodChoice method = MethodChoice::Auto;
  bool strict_sparsity = false;
  std::size_t workers = 1;
  std::size_t tighten_stride = 4;
  std::size_t max_nodes = 1000000;
  OracleLimits oracle;
};

struct SearchPhase {
  std::string name;  // "threshold", "pool" or "oracle"
  std::string status;
  double best_value = 0.0;
  double upper_bound = 0.0;
  std::size_t nodes = 0;
  double seconds = 0.0;
};

struct SscReport {
  Verdict verdict = Verdict::Unknown;
  Reason reason = Reason::DeadlineReached;
  std::string label;
  std::string note;
  bool sparsity_ok = false;
  NcsscReport ncssc;

  /// Violating x for Fails (NormExceedsOne / ExtraMaximizer); empty otherwise.
  Vector certificate;
  /// Squared-norm threshold the certificate is verified against.
  double certificate_threshold = 0.0;
  std::vector<Vector> pool;
  std::vector<double> pool_values;

  double q_lower = 0.0;  // bounds on the squared optimum of the bounded problem
  double q_upper = 0.0;
  std::optional<Method> method;

  std::vector<SearchPhase> phases;
  std::size_t lp_pivots = 0;
  double ncssc_seconds = 0.0;
  double total_seconds = 0.0;

  Tolerances tol;
};

/// Runs the full check. Throws BudgetExceeded when method is Oracle and the
/// instance is too large for vertex enumeration.
SscReport check_ssc(const FactorMatrix& h, const SscOptions& opts = {});

/// Re-checks the certificate carried by a report against H.
bool verify_report_certificate(const FactorMatrix& h, const SscReport& report);

}  // namespace sscheck
