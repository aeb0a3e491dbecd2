// sscheck: command-line front end.
//
//   sscheck check --input H.csv [--transpose] [--method auto|bnb|oracle] [--json out.json]
//   sscheck gen --r 5 --n 25 --k 2 --seed 7 --out H.csv
//   sscheck experiment --r 3..6 --k 1..5 --nmult 5 --trials 20 --csv grid.csv
//
// Exit codes for check: 0 holds, 1 fails, 2 unknown (deadline), 3 usage
// error, 4 input/output or numerical error.

#include "sscheck/matrix_io.hpp"
#include "sscheck/report.hpp"
#include "sscheck/ssc.hpp"
#include "sscheck/synth.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitUsage = 3;
constexpr int kExitError = 4;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t worker_count(std::size_t requested) {
  std::size_t n = std::max<std::size_t>(requested, 1);
  if (const char* env = std::getenv("SSC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

// "3..6", "3,5,8" or "4".
std::vector<std::size_t> parse_list(const std::string& text, const char* flag) {
  std::vector<std::size_t> out;
  auto num = [&](const std::string& s) -> std::size_t {
    std::size_t pos = 0;
    long v = -1;
    try {
      v = std::stol(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != s.size() || v < 0) throw UsageError(std::string("bad value '") + s + "' for " + flag);
    return static_cast<std::size_t>(v);
  };
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    if (dots == std::string::npos) {
      out.push_back(num(part));
    } else {
      const std::size_t a = num(part.substr(0, dots));
      const std::size_t b = num(part.substr(dots + 2));
      if (b < a) throw UsageError(std::string("empty range '") + part + "' for " + flag);
      for (std::size_t v = a; v <= b; ++v) out.push_back(v);
    }
  }
  if (out.empty()) throw UsageError(std::string("no values given for ") + flag);
  return out;
}

sscheck::MethodChoice parse_method(const std::string& m) {
  if (m == "auto") return sscheck::MethodChoice::Auto;
  if (m == "bnb") return sscheck::MethodChoice::Bnb;
  if (m == "oracle") return sscheck::MethodChoice::Oracle;
  throw UsageError("--method must be auto, bnb or oracle");
}

struct CheckArgs {
  std::string input;
  std::string format;
  bool transpose = false;
  double deadline = 300.0;
  std::string method = "auto";
  std::string json_path;
  bool strict_sparsity = false;
  std::size_t threads = 1;
  sscheck::Tolerances tol;
};

int run_check(const CheckArgs& a) {
  sscheck::SscOptions opts;
  opts.tol = a.tol;
  opts.deadline = std::chrono::duration<double>(a.deadline);
  opts.method = parse_method(a.method);
  opts.strict_sparsity = a.strict_sparsity;
  opts.workers = worker_count(a.threads);
  try {
    opts.tol.validate();
  } catch (const sscheck::Error& e) {
    throw UsageError(e.what());
  }

  const auto format = a.format.empty() ? sscheck::format_from_path(a.input) : sscheck::format_from_name(a.format);
  sscheck::Matrix m = sscheck::read_matrix(a.input, format);
  if (a.transpose) m.transposeInPlace();
  const sscheck::FactorMatrix h(m);
  for (std::size_t c : h.dropped_columns()) {
    std::cerr << "warning: column " << c + 1 << " is all zero and was dropped\n";
  }

  sscheck::SscReport rep;
  try {
    rep = sscheck::check_ssc(h, opts);
  } catch (const sscheck::BudgetExceeded& e) {
    throw UsageError(e.what());
  }
  nlohmann::json j = sscheck::to_json(rep, h);
  j["input"]["path"] = a.input;
  j["input"]["transposed"] = a.transpose;
  j["certificate_verified"] = sscheck::verify_report_certificate(h, rep);

  if (a.json_path.empty()) {
    std::cout << j.dump(2) << '\n';
  } else {
    std::ofstream out(a.json_path);
    if (!out) throw sscheck::Error("cannot open '" + a.json_path + "' for writing");
    out << j.dump(2) << '\n';
    std::cout << rep.label << " (" << sscheck::to_string(rep.reason) << ")\n";
  }
  switch (rep.verdict) {
    case sscheck::Verdict::Holds: return 0;
    case sscheck::Verdict::Fails: return 1;
    case sscheck::Verdict::Unknown: return 2;
  }
  return kExitError;
}

struct GenArgs {
  std::size_t r = 0, n = 0, k = 0;
  std::uint64_t seed = 1;
  std::string out;
  std::string format = "csv";
};

int run_gen(const GenArgs& a) {
  const sscheck::GenSpec spec{a.r, a.n, a.k, a.seed};
  try {
    spec.validate();
  } catch (const sscheck::Error& e) {
    throw UsageError(e.what());
  }
  const sscheck::Matrix m = sscheck::generate(spec);
  const auto format = sscheck::format_from_name(a.format);
  std::ostream& echo = a.out.empty() ? std::cerr : std::cout;
  echo << "# sscheck gen r=" << a.r << " n=" << a.n << " k=" << a.k << " seed=" << a.seed << '\n';
  if (a.out.empty()) {
    format == sscheck::MatrixFormat::Csv ? sscheck::write_csv(std::cout, m) : sscheck::write_matrix_market(std::cout, m);
  } else {
    sscheck::write_matrix(a.out, m, format);
  }
  return 0;
}

struct ExperimentArgs {
  std::string r_list = "3..10";
  std::string k_list = "1..9";
  std::size_t nmult = 5;
  std::size_t trials = 20;
  std::uint64_t seed = 1;
  double deadline = 300.0;
  std::string method = "auto";
  std::string csv_path;
  std::size_t threads = 1;
  bool large = false;
};

int run_experiment(const ExperimentArgs& a) {
  if (a.trials == 0) throw UsageError("--trials must be positive");
  if (a.nmult == 0) throw UsageError("--nmult must be positive");
  sscheck::GridOptions g;
  g.r_list = parse_list(a.r_list, "--r");
  g.k_list = parse_list(a.k_list, "--k");
  for (std::size_t r : g.r_list) {
    if (r < 2) throw UsageError("--r values must be at least 2");
    if (r > 10 && !a.large) throw UsageError("r > 10 runs are slow; pass --large to allow them");
  }
  g.n_multiplier = a.nmult;
  g.trials = a.trials;
  g.seed_base = a.seed;
  g.workers = worker_count(a.threads);
  g.check.deadline = std::chrono::duration<double>(a.deadline);
  g.check.method = parse_method(a.method);

  std::ofstream csv;
  if (!a.csv_path.empty()) {
    csv.open(a.csv_path);
    if (!csv) throw sscheck::Error("cannot open '" + a.csv_path + "' for writing");
    csv << sscheck::csv_header() << '\n' << std::flush;
  } else {
    std::cout << sscheck::csv_header() << '\n';
  }
  const auto records = sscheck::run_grid(g, [&](const sscheck::ExperimentRecord& rec) {
    // Rows are flushed as they complete so an interrupted grid keeps its results.
    if (csv.is_open()) {
      csv << sscheck::to_csv_row(rec) << '\n' << std::flush;
    } else {
      std::cout << sscheck::to_csv_row(rec) << '\n' << std::flush;
    }
  });
  std::cout << "\nSSC successes out of " << a.trials << " trials (n = " << a.nmult << "r)\n"
            << sscheck::success_table(records);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks the sufficiently scattered condition of nonnegative matrices"};
  app.require_subcommand(1);

  CheckArgs check;
  auto* c = app.add_subcommand("check", "Decide whether a matrix satisfies the SSC");
  c->add_option("--input", check.input, "Matrix file (rows are rows of H)")->required();
  c->add_option("--format", check.format, "csv or matrixmarket (default: from extension)");
  c->add_flag("--transpose", check.transpose, "Check the transpose of the file's matrix");
  c->add_option("--deadline", check.deadline, "Time limit in seconds")->capture_default_str();
  c->add_option("--method", check.method, "auto, bnb or oracle")->capture_default_str();
  c->add_option("--stop-threshold", check.tol.stop_threshold, "Squared-norm early stop")->capture_default_str();
  c->add_option("--eps-feas", check.tol.eps_feas, "Feasibility tolerance")->capture_default_str();
  c->add_option("--eps-gap", check.tol.eps_gap, "Bound gap for convergence")->capture_default_str();
  c->add_option("--eps-pool", check.tol.eps_pool, "Pool admission band")->capture_default_str();
  c->add_option("--delta-unit", check.tol.delta_unit, "Unit-vector identification radius")->capture_default_str();
  c->add_option("--json", check.json_path, "Write the JSON report here instead of stdout");
  c->add_flag("--strict-sparsity", check.strict_sparsity, "Fail matrices with fewer than r-1 zeros in a row");
  c->add_option("--threads", check.threads, "Branch-and-bound workers (capped by SSC_THREADS)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a random k-sparse matrix");
  g->add_option("--r", gen.r, "Rank (rows)")->required();
  g->add_option("--n", gen.n, "Columns")->required();
  g->add_option("--k", gen.k, "Nonzeros per column, 1 <= k <= r-1")->required();
  g->add_option("--seed", gen.seed, "Seed")->capture_default_str();
  g->add_option("--out", gen.out, "Output path (default stdout)");
  g->add_option("--format", gen.format, "csv or matrixmarket")->capture_default_str();

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "Run the k-sparse phase-transition grid");
  e->add_option("--r", ex.r_list, "Ranks, e.g. 3..8 or 4,6")->capture_default_str();
  e->add_option("--k", ex.k_list, "Sparsity levels, e.g. 1..5")->capture_default_str();
  e->add_option("--nmult", ex.nmult, "n = nmult * r")->capture_default_str();
  e->add_option("--trials", ex.trials, "Trials per cell")->capture_default_str();
  e->add_option("--seed", ex.seed, "Seed base; trial t uses seed + t")->capture_default_str();
  e->add_option("--deadline", ex.deadline, "Per-trial time limit in seconds")->capture_default_str();
  e->add_option("--method", ex.method, "auto, bnb or oracle")->capture_default_str();
  e->add_option("--csv", ex.csv_path, "CSV output path (default stdout)");
  e->add_option("--threads", ex.threads, "Concurrent trials (capped by SSC_THREADS)");
  e->add_flag("--large", ex.large, "Allow r > 10");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& err) {
    return app.exit(err);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return kExitUsage;
  }

  try {
    if (*c) return run_check(check);
    if (*g) return run_gen(gen);
    if (*e) return run_experiment(ex);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitError;
  }
  return kExitUsage;
}
