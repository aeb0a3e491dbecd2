// Random k-sparse factor matrices and the phase-transition experiment grid.
//
// Reproducibility: every column draws from its own SplitMix64 counter
// stream keyed by (seed, r, n, k, column). Integers use Lemire's unbiased
// bounded method and exponentials use -log(u), so matrices do not depend on
// the standard library's distribution implementations.

#pragma once

#include "sscheck/core.hpp"
#include "sscheck/ssc.hpp"

#include <chrono>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace sscheck {

struct GenSpec {
  std::size_t r = 0;
  std::size_t n = 0;
  std::size_t k = 0;
  std::uint64_t seed = 0;

  void validate() const;
};

class CounterRng {
 public:
  CounterRng(std::uint64_t key, std::uint64_t stream);

  std::uint64_t next();
  /// Uniform on the open interval (0, 1).
  double uniform();
  /// Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  /// Unit-rate exponential.
  double exponential();

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// r x n matrix whose columns have exactly k nonzeros at a uniformly random
/// support, with Dirichlet(1, ..., 1) values (each column sums to one).
Matrix generate(const GenSpec& spec);

struct ExperimentRecord {
  GenSpec spec;  // seed holds the seed base; trial t uses seed + t
  std::size_t trials = 0;
  std::size_t ssc_count = 0;
  std::size_t fails_count = 0;
  std::size_t ncssc_not_ssc_count = 0;
  std::size_t timeout_count = 0;
  double mean_time = 0.0;  // seconds
};

struct GridOptions {
  std::vector<std::size_t> r_list;
  std::vector<std::size_t> k_list;  // entries with k > r - 1 are skipped per r
  std::size_t n_multiplier = 5;
  std::size_t trials = 20;
  std::uint64_t seed_base = 1;
  std::size_t workers = 1;  // trials checked concurrently
  SscOptions check;         // deadline etc. per trial
};

using RecordCallback = std::function<void(const ExperimentRecord&)>;

/// One record per valid (r, k) pair, in grid order. `on_record` fires as each
/// record completes.
std::vector<ExperimentRecord> run_grid(const GridOptions& opts, const RecordCallback& on_record = {});

std::string csv_header();
std::string to_csv_row(const ExperimentRecord& rec);
std::string to_csv(const std::vector<ExperimentRecord>& records);

/// Success-count grid: one line per r, one column per k ("/" where k is out of range).
std::string success_table(const std::vector<ExperimentRecord>& records);

}  // namespace sscheck
