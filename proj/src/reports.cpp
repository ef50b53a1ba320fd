#include "bioinv/reports.hpp"

#include <sstream>

#include "json_util.hpp"

namespace bioinv {

using detail::json;

namespace {

std::string csv_number(double v) {
  std::ostringstream s;
  s.precision(17);
  s << v;
  return s.str();
}

json scenario_json(const DemandScenario& d) { return {{"walkin", d.walkin}, {"online", d.online}}; }

json allocation_json(const Allocation& a) {
  json j;
  j["x"] = a.x;
  if (a.x_repo) j["x_repo"] = *a.x_repo;
  if (a.s_plus) j["s_plus"] = *a.s_plus;
  if (a.d_plus) j["d_plus"] = *a.d_plus;
  if (a.y_plus) j["y_plus"] = *a.y_plus;
  if (a.d_plus_online) j["d_plus_online"] = *a.d_plus_online;
  return j;
}

json stats_json(const ProfitStats& s) {
  return {{"count", s.count}, {"min", s.min},       {"p5", s.p5},   {"p10", s.p10},
          {"median", s.median}, {"mean", s.mean}, {"max", s.max}};
}

json kpi_json(const KpiReport& k) {
  json j;
  const auto v = kpi_values(k);
  for (std::size_t i = 0; i < v.size(); ++i) j[kpi_fields()[i]] = v[i];
  return j;
}

}  // namespace

std::string dump_allocation(const Allocation& a) { return allocation_json(a).dump(2) + "\n"; }

Allocation parse_allocation(const std::string& text, const std::string& source) {
  const auto doc = detail::parse_document(text, source);
  detail::ObjectReader r(doc, source);
  Allocation a;
  a.x = r.matrix("x");
  if (r.has("x_repo")) {
    std::vector<Matrix> repo;
    const auto& arr = r.at("x_repo");
    if (!arr.is_array()) detail::fail(r.path("x_repo"), "expected an array");
    for (std::size_t t = 0; t < arr.size(); ++t) {
      repo.push_back(detail::as_matrix(arr[t], r.path("x_repo") + "[" + std::to_string(t) + "]"));
    }
    a.x_repo = std::move(repo);
  }
  if (r.has("s_plus")) a.s_plus = r.matrix("s_plus");
  if (r.has("d_plus")) a.d_plus = r.matrix("d_plus");
  if (r.has("y_plus")) a.y_plus = r.matrix("y_plus");
  if (r.has("d_plus_online")) a.d_plus_online = r.matrix("d_plus_online");
  r.finish();
  for (const auto& row : a.x) {
    for (double v : row) {
      if (v < 0.0) detail::fail(source + ".x", "allocation entries must be nonnegative");
    }
  }
  return a;
}

Allocation load_allocation(const std::string& path) { return parse_allocation(detail::read_file(path), path); }

std::string dump_scenario(const DemandScenario& d) { return scenario_json(d).dump(2) + "\n"; }

std::string dump_solve_report(const SolveReport& r) {
  json j;
  j["objective"] = r.objective;
  j["upper_bound"] = r.upper_bound;
  j["gap"] = r.gap();
  j["termination"] = to_string(r.termination);
  j["exact"] = r.exact;
  j["stalled"] = r.stalled;
  j["iterations"] = r.iterations;
  j["seconds"] = r.seconds;
  j["allocation"] = allocation_json(r.allocation);
  j["worst_scenario"] = scenario_json(r.worst_scenario);
  j["robust_worst_scenario"] = scenario_json(r.robust_worst_scenario);
  j["worst_case_profit"] = r.worst_case_profit;
  j["worst_case_exact"] = r.worst_case_exact;
  j["lower_trace"] = r.lower_trace;
  j["upper_trace"] = r.upper_trace;
  j["subproblem_trace"] = r.subproblem_trace;
  json pool = json::array();
  for (const auto& d : r.pool) pool.push_back(scenario_json(d));
  j["pool"] = pool;
  return j.dump(2) + "\n";
}

std::string trace_csv(const SolveReport& r) {
  std::ostringstream s;
  s << "iteration,lower_bound,upper_bound,subproblem\n";
  for (std::size_t i = 0; i < r.lower_trace.size(); ++i) {
    s << i + 1 << ',' << csv_number(r.lower_trace[i]) << ',' << csv_number(r.upper_trace[i]) << ','
      << csv_number(r.subproblem_trace[i]) << '\n';
  }
  return s.str();
}

std::string dump_profit_stats(const ProfitStats& s) { return stats_json(s).dump(2) + "\n"; }

std::string profits_csv(const ProfitStats& s) {
  std::ostringstream o;
  o << "scenario,profit\n";
  for (std::size_t i = 0; i < s.profits.size(); ++i) o << i << ',' << csv_number(s.profits[i]) << '\n';
  return o.str();
}

std::string dump_tune_result(const TuneResult& r, const ScoringObjective& objective) {
  json j;
  j["lambda"] = r.lambda;
  j["score"] = r.score;
  j["objective"] = describe(objective);
  j["solves"] = r.solves;
  j["allocation"] = allocation_json(r.allocation);
  json curve = json::array();
  for (const auto& p : r.curve) curve.push_back({{"lambda", p.lambda}, {"score", p.score}, {"estimate", p.estimate}});
  j["curve"] = curve;
  return j.dump(2) + "\n";
}

std::string lambda_curve_csv(const TuneResult& r) {
  std::ostringstream s;
  s << "lambda,score,estimate\n";
  for (const auto& p : r.curve) s << csv_number(p.lambda) << ',' << csv_number(p.score) << ',' << csv_number(p.estimate) << '\n';
  return s.str();
}

std::string dump_superposition(const SuperpositionReport& r) {
  json j{{"lambda", r.lambda},
         {"z0", r.z0},
         {"z1", r.z1},
         {"z_lambda", r.z_lambda},
         {"residual", r.residual},
         {"superposed_value", r.superposed_value},
         {"superposed_gap", r.superposed_gap},
         {"converged", r.converged},
         {"x0", allocation_json(r.x0)},
         {"x1", allocation_json(r.x1)},
         {"x_lambda", allocation_json(r.x_lambda)}};
  return j.dump(2) + "\n";
}

std::string kpi_ledger_csv(const std::vector<SimulationSummary>& runs) {
  std::ostringstream s;
  s << "policy,row";
  for (const auto& f : kpi_fields()) s << ',' << f;
  s << '\n';
  auto row = [&](const std::string& policy, const std::string& tag, const KpiReport& k) {
    s << policy << ',' << tag;
    for (double v : kpi_values(k)) s << ',' << csv_number(v);
    s << '\n';
  };
  for (const auto& run : runs) {
    for (std::size_t r = 0; r < run.replications.size(); ++r) row(run.policy, std::to_string(r), run.replications[r].kpi);
    row(run.policy, "mean", run.mean);
    row(run.policy, "stderr", run.std_error);
  }
  return s.str();
}

std::string dump_kpi_summary(const std::vector<SimulationSummary>& runs) {
  json arr = json::array();
  for (const auto& run : runs) {
    std::size_t failures = 0;
    for (const auto& r : run.replications) failures += r.failures.size();
    arr.push_back({{"policy", run.policy},
                   {"replications", run.replications.size()},
                   {"solve_failures", failures},
                   {"mean", kpi_json(run.mean)},
                   {"stderr", kpi_json(run.std_error)}});
  }
  return arr.dump(2) + "\n";
}

}  // namespace bioinv
