#include "sscheck/report.hpp"

#include <cmath>

namespace sscheck {

namespace {

nlohmann::json vec(const Vector& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

nlohmann::json num(double v) {
  return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr);
}

}  // namespace

Vector vector_from_json(const nlohmann::json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j.at(i).get<double>();
  return v;
}

nlohmann::json to_json(const SscReport& rep, const FactorMatrix& h) {
  nlohmann::json j;
  j["schema"] = kReportSchemaId;
  j["verdict"] = to_string(rep.verdict);
  j["label"] = rep.label;
  j["reason"] = to_string(rep.reason);
  j["note"] = rep.note;
  j["method"] = rep.method ? nlohmann::json(to_string(*rep.method)) : nlohmann::json(nullptr);

  nlohmann::json dropped = nlohmann::json::array();
  for (std::size_t c : h.dropped_columns()) dropped.push_back(c);
  j["input"] = {{"rank", h.rank()}, {"columns", h.source_cols()}, {"columns_used", h.cols()},
                {"dropped_zero_columns", dropped}};

  j["sparsity_screen"] = {{"passed", rep.sparsity_ok}};

  nlohmann::json nc;
  nc["holds"] = rep.ncssc.holds;
  nlohmann::json wit = nlohmann::json::array();
  for (const Vector& y : rep.ncssc.witnesses) wit.push_back(vec(h.to_source_weights(y)));
  nc["witnesses"] = wit;
  if (rep.ncssc.failing_index >= 0) {
    nc["failing_index"] = rep.ncssc.failing_index + 1;
    nc["separator"] = vec(rep.ncssc.separator);
  } else {
    nc["failing_index"] = nullptr;
    nc["separator"] = nullptr;
  }
  j["ncssc"] = nc;

  if (rep.certificate.size() > 0) {
    j["certificate"] = {{"x", vec(rep.certificate)},
                        {"squared_norm", rep.certificate.squaredNorm()},
                        {"threshold", rep.certificate_threshold}};
  } else {
    j["certificate"] = nullptr;
  }

  nlohmann::json pool = nlohmann::json::array();
  for (std::size_t k = 0; k < rep.pool.size(); ++k) {
    pool.push_back({{"x", vec(rep.pool[k])}, {"squared_norm", rep.pool_values[k]}});
  }
  j["pool"] = pool;
  if (rep.method) {
    j["q_star_bounds"] = {{"lower", num(rep.q_lower)}, {"upper", num(rep.q_upper)}};
  } else {
    // No search ran.
    j["q_star_bounds"] = {{"lower", nullptr}, {"upper", nullptr}};
  }

  j["tolerances"] = {{"eps_feas", rep.tol.eps_feas},
                     {"eps_gap", rep.tol.eps_gap},
                     {"stop_threshold", rep.tol.stop_threshold},
                     {"eps_pool", rep.tol.eps_pool},
                     {"delta_unit", rep.tol.delta_unit}};

  nlohmann::json phases = nlohmann::json::array();
  for (const SearchPhase& ph : rep.phases) {
    phases.push_back({{"name", ph.name},
                      {"status", ph.status},
                      {"best_value", num(ph.best_value)},
                      {"upper_bound", num(ph.upper_bound)},
                      {"nodes", ph.nodes},
                      {"seconds", ph.seconds}});
  }
  j["stats"] = {{"total_seconds", rep.total_seconds},
                {"ncssc_seconds", rep.ncssc_seconds},
                {"lp_pivots", rep.lp_pivots},
                {"search_protocol", "threshold search, then maximizer-set search (oracle or pool)"},
                {"phases", phases}};
  return j;
}

}  // namespace sscheck
