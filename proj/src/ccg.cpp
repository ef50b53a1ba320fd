#include "bioinv/ccg.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace bioinv {

const char* to_string(SubproblemMode mode) {
  switch (mode) {
    case SubproblemMode::exact_mip: return "exact_mip";
    case SubproblemMode::alternating_heuristic: return "alternating_heuristic";
    case SubproblemMode::ah_then_mip: return "ah_then_mip";
  }
  return "?";
}

SubproblemMode parse_subproblem_mode(const std::string& name) {
  if (name == "exact_mip") return SubproblemMode::exact_mip;
  if (name == "alternating_heuristic") return SubproblemMode::alternating_heuristic;
  if (name == "ah_then_mip") return SubproblemMode::ah_then_mip;
  throw std::invalid_argument("unknown subproblem mode \"" + name + "\"");
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::iteration_limit: return "iteration_limit";
    case Termination::time_limit: return "time_limit";
  }
  return "?";
}

void check_options(const CcgOptions& o) {
  if (!(o.epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(o.delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (o.max_iterations < 1) throw std::invalid_argument("max_iterations must be at least 1");
  if (!(o.max_seconds > 0.0)) throw std::invalid_argument("max_seconds must be positive");
  if (o.heuristic_rounds < 1) throw std::invalid_argument("heuristic_rounds must be at least 1");
}

double SolveReport::gap(double delta) const {
  return (upper_bound - objective) / (std::abs(objective) + delta);
}

namespace {

using Clock = std::chrono::steady_clock;

struct SubproblemOutcome {
  DemandScenario scenario;
  double value = 0.0;
  bool exact = false;
};

lp::SolveLimits remaining(lp::SolveLimits limits, double left) {
  limits.seconds = std::min(limits.seconds, std::max(left, 0.0));
  return limits;
}

SubproblemOutcome solve_subproblem(const Instance& inst, const UncertaintySet& set, const Allocation& a,
                                   const BioConfig& config, const CcgOptions& o, double seconds_left) {
  SubproblemOutcome out;
  std::optional<HeuristicResult> warm;
  if (o.subproblem_mode != SubproblemMode::exact_mip) {
    warm = alternating_heuristic_subproblem(inst, set, a, config, o.heuristic_rounds);
    out.scenario = warm->scenario;
    out.value = warm->value;
    if (o.subproblem_mode == SubproblemMode::alternating_heuristic) return out;
  }
  const auto sp = build_subproblem(inst, set, a, config);
  lp::SolveOptions so;
  so.limits = remaining(o.subproblem_limits, seconds_left);
  if (warm) so.mip_start = selection_start(sp, warm->scenario);
  const auto sol = lp::solve(sp.model, so);
  if (sol.status == lp::SolveStatus::optimal) {
    out.scenario = extract_worst_scenario(sp, sol.values);
    out.value = sol.objective;
    out.exact = true;
    return out;
  }
  if (sol.status == lp::SolveStatus::limit) {
    if (sol.has_values() && (!warm || sol.objective < out.value)) {
      out.scenario = extract_worst_scenario(sp, sol.values);
      out.value = sol.objective;
    } else if (!warm) {
      throw std::runtime_error("subproblem hit its limit without a feasible demand");
    }
    return out;
  }
  throw std::runtime_error(std::string("subproblem solve failed: ") + lp::to_string(sol.status));
}

}  // namespace

WorstCase robust_worst_case(const Instance& inst, const UncertaintySet& set, const Allocation& a,
                            const lp::SolveLimits& limits) {
  Allocation bare;
  bare.x = a.x;
  bare.x_repo = a.x_repo;
  BioConfig pure;
  const auto sp = build_subproblem(inst, set, bare, pure);
  lp::SolveOptions so;
  so.limits = limits;
  const auto sol = lp::solve(sp.model, so);
  if (sol.status != lp::SolveStatus::optimal) {
    throw std::runtime_error(std::string("worst-case subproblem failed: ") + lp::to_string(sol.status));
  }
  WorstCase out;
  out.scenario = extract_worst_scenario(sp, sol.values);
  out.profit = sol.objective - stage_one_cost(inst, bare);
  return out;
}

SolveReport solve_two_stage(const Instance& inst, const UncertaintySet& set, const BioConfig& config,
                            const CcgOptions& o) {
  check_options(o);
  check_config(config);
  check_set_matches(set, inst);
  const auto problems = check_set(set);
  if (!problems.empty()) throw std::invalid_argument("invalid uncertainty set: " + problems.front());

  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };

  SolveReport rep;
  rep.allocation = zero_allocation(inst);
  rep.objective = -std::numeric_limits<double>::infinity();
  rep.upper_bound = std::numeric_limits<double>::infinity();
  rep.pool.push_back(lowest_feasible_scenario(set));
  rep.worst_scenario = rep.pool.front();
  const Allocation* fixed = o.fixed_allocation ? &*o.fixed_allocation : nullptr;

  auto finish = [&](Termination t) {
    rep.termination = t;
    if (std::isfinite(rep.objective)) {
      if (config.lambda > 0.0) {
        // same subproblem mode and leftover budget as the main loop
        Allocation bare;
        bare.x = rep.allocation.x;
        bare.x_repo = rep.allocation.x_repo;
        SubproblemOutcome wc;
        try {
          wc = solve_subproblem(inst, set, bare, BioConfig{}, o, o.max_seconds - elapsed());
        } catch (const std::runtime_error&) {
          const auto h = alternating_heuristic_subproblem(inst, set, bare, BioConfig{}, o.heuristic_rounds);
          wc.scenario = h.scenario;
          wc.value = h.value;
        }
        rep.robust_worst_scenario = std::move(wc.scenario);
        rep.worst_case_profit = wc.value - stage_one_cost(inst, bare);
        rep.worst_case_exact = wc.exact;
      } else {
        rep.robust_worst_scenario = rep.worst_scenario;
        rep.worst_case_profit = evaluate_allocation(inst, rep.allocation, rep.worst_scenario).profit;
        rep.worst_case_exact = rep.exact;
      }
    }
    rep.seconds = elapsed();
    return rep;
  };

  while (true) {
    if (rep.iterations >= o.max_iterations) return finish(Termination::iteration_limit);
    if (elapsed() >= o.max_seconds) return finish(Termination::time_limit);
    ++rep.iterations;

    const auto mp = build_master(inst, set, rep.pool, config, fixed);
    lp::SolveOptions mo;
    mo.limits = remaining(o.master_limits, o.max_seconds - elapsed());
    const auto ms = lp::solve(mp.model, mo);
    if (ms.status == lp::SolveStatus::limit) {
      --rep.iterations;
      return finish(Termination::time_limit);
    }
    if (ms.status != lp::SolveStatus::optimal) {
      rep.seconds = elapsed();
      throw SolveFailure(std::string("master problem is ") + lp::to_string(ms.status), rep);
    }
    const double z_mp = ms.objective;
    const double eta = ms.values.at(mp.index.eta);
    rep.upper_bound = std::min(rep.upper_bound, z_mp);
    const auto alloc = read_master_allocation(mp, ms.values);

    SubproblemOutcome sp;
    try {
      sp = solve_subproblem(inst, set, alloc, config, o, o.max_seconds - elapsed());
    } catch (const std::runtime_error& e) {
      rep.seconds = elapsed();
      throw SolveFailure(e.what(), rep);
    }
    rep.subproblem_trace.push_back(sp.value);
    const double candidate = sp.value + z_mp - eta;
    if (candidate >= rep.objective) {
      rep.objective = candidate;
      rep.allocation = alloc;
      rep.worst_scenario = sp.scenario;
      rep.exact = sp.exact;
    }
    rep.lower_trace.push_back(rep.objective);
    rep.upper_trace.push_back(rep.upper_bound);

    const bool duplicate = std::find(rep.pool.begin(), rep.pool.end(), sp.scenario) != rep.pool.end();
    if (rep.gap(o.delta) <= o.epsilon) {
      return finish(rep.exact ? Termination::converged : Termination::iteration_limit);
    }
    if (duplicate) {
      rep.stalled = true;
      return finish(Termination::iteration_limit);
    }
    rep.pool.push_back(sp.scenario);
  }
}

}  // namespace bioinv
