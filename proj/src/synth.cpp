#include "sscheck/synth.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

namespace sscheck {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t spec_key(const GenSpec& s) {
  std::uint64_t k = mix64(s.seed + kGolden);
  k = mix64(k ^ (static_cast<std::uint64_t>(s.r) * kGolden));
  k = mix64(k ^ (static_cast<std::uint64_t>(s.n) * 0xD1B54A32D192ED03ULL));
  k = mix64(k ^ (static_cast<std::uint64_t>(s.k) * 0x8CB92BA72F3D8DD7ULL));
  return k;
}

}  // namespace

void GenSpec::validate() const {
  if (r < 2) throw Error("generator: r must be at least 2");
  if (n < 1) throw Error("generator: n must be at least 1");
  if (k < 1 || k > r - 1) throw Error("generator: k must satisfy 1 <= k <= r - 1");
}

CounterRng::CounterRng(std::uint64_t key, std::uint64_t stream) : key_(mix64(key ^ mix64(stream + kGolden))) {}

std::uint64_t CounterRng::next() {
  ++counter_;
  return mix64(key_ + counter_ * kGolden);
}

double CounterRng::uniform() {
  return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

std::uint64_t CounterRng::below(std::uint64_t bound) {
  if (bound == 0) return 0;
  unsigned __int128 m = static_cast<unsigned __int128>(next()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>(next()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double CounterRng::exponential() {
  return -std::log(uniform());
}

Matrix generate(const GenSpec& spec) {
  spec.validate();
  const std::uint64_t key = spec_key(spec);
  Matrix h = Matrix::Zero(static_cast<Eigen::Index>(spec.r), static_cast<Eigen::Index>(spec.n));
  std::vector<std::size_t> rows(spec.r);
  std::vector<double> w(spec.k);
  for (std::size_t j = 0; j < spec.n; ++j) {
    CounterRng rng(key, j);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    for (std::size_t t = 0; t < spec.k; ++t) {
      const std::size_t pick = t + static_cast<std::size_t>(rng.below(spec.r - t));
      std::swap(rows[t], rows[pick]);
    }
    double total = 0.0;
    for (std::size_t t = 0; t < spec.k; ++t) {
      w[t] = rng.exponential();
      total += w[t];
    }
    for (std::size_t t = 0; t < spec.k; ++t) {
      h(static_cast<Eigen::Index>(rows[t]), static_cast<Eigen::Index>(j)) = w[t] / total;
    }
  }
  return h;
}

std::vector<ExperimentRecord> run_grid(const GridOptions& opts, const RecordCallback& on_record) {
  if (opts.trials == 0) throw Error("experiment: trials must be positive");
  if (opts.n_multiplier == 0) throw Error("experiment: n multiplier must be positive");

  struct Outcome {
    Verdict verdict = Verdict::Unknown;
    bool ncssc = false;
    double seconds = 0.0;
  };

  std::vector<ExperimentRecord> records;
  for (std::size_t r : opts.r_list) {
    for (std::size_t k : opts.k_list) {
      if (r < 2 || k < 1 || k > r - 1) continue;
      ExperimentRecord rec;
      rec.spec = GenSpec{r, opts.n_multiplier * r, k, opts.seed_base};
      rec.trials = opts.trials;

      std::vector<Outcome> out(opts.trials);
      std::atomic<std::size_t> next{0};
      auto worker = [&]() {
        for (std::size_t t = next++; t < opts.trials; t = next++) {
          GenSpec s = rec.spec;
          s.seed = opts.seed_base + t;
          const auto t0 = std::chrono::steady_clock::now();
          try {
            const FactorMatrix h(generate(s));
            const SscReport rep = check_ssc(h, opts.check);
            out[t] = {rep.verdict, rep.ncssc.holds, rep.total_seconds};
          } catch (const Error&) {
            // Numerical failure inside a trial counts as inconclusive.
            out[t] = {Verdict::Unknown, false,
                      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()};
          }
        }
      };
      const std::size_t workers = std::clamp<std::size_t>(opts.workers, 1, opts.trials);
      if (workers == 1) {
        worker();
      } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
      }

      double total = 0.0;
      for (const Outcome& o : out) {
        total += o.seconds;
        switch (o.verdict) {
          case Verdict::Holds: ++rec.ssc_count; break;
          case Verdict::Fails:
            ++rec.fails_count;
            if (o.ncssc) ++rec.ncssc_not_ssc_count;
            break;
          case Verdict::Unknown: ++rec.timeout_count; break;
        }
      }
      rec.mean_time = total / static_cast<double>(opts.trials);
      if (on_record) on_record(rec);
      records.push_back(rec);
    }
  }
  return records;
}

std::string csv_header() {
  return "r,k,n,trials,ssc_count,ncssc_not_ssc_count,timeout_count,mean_time_s";
}

std::string to_csv_row(const ExperimentRecord& rec) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", rec.mean_time);
  std::ostringstream os;
  os << rec.spec.r << ',' << rec.spec.k << ',' << rec.spec.n << ',' << rec.trials << ',' << rec.ssc_count << ','
     << rec.ncssc_not_ssc_count << ',' << rec.timeout_count << ',' << buf;
  return os.str();
}

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::string out = csv_header() + "\n";
  for (const auto& rec : records) out += to_csv_row(rec) + "\n";
  return out;
}

std::string success_table(const std::vector<ExperimentRecord>& records) {
  std::map<std::size_t, std::map<std::size_t, const ExperimentRecord*>> grid;
  std::vector<std::size_t> ks;
  for (const auto& rec : records) {
    grid[rec.spec.r][rec.spec.k] = &rec;
    if (std::find(ks.begin(), ks.end(), rec.spec.k) == ks.end()) ks.push_back(rec.spec.k);
  }
  std::sort(ks.begin(), ks.end());
  std::ostringstream os;
  char cell[32];
  os << "  r/k";
  for (std::size_t k : ks) {
    std::snprintf(cell, sizeof cell, "%5zu", k);
    os << cell;
  }
  os << '\n';
  for (const auto& [r, row] : grid) {
    std::snprintf(cell, sizeof cell, "%5zu", r);
    os << cell;
    for (std::size_t k : ks) {
      const auto it = row.find(k);
      if (it == row.end()) {
        os << "    /";
      } else {
        std::snprintf(cell, sizeof cell, "%5zu", it->second->ssc_count);
        os << cell;
      }
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace sscheck
