#pragma once

#include <string>
#include <vector>

#include "bioinv/ccg.hpp"
#include "bioinv/simulator.hpp"
#include "bioinv/tuning.hpp"

namespace bioinv {

// Machine-readable outputs.  Numbers are written with round-trip precision.

std::string dump_allocation(const Allocation& allocation);
Allocation parse_allocation(const std::string& text, const std::string& source = "<string>");
Allocation load_allocation(const std::string& path);

std::string dump_scenario(const DemandScenario& scenario);

std::string dump_solve_report(const SolveReport& report);
/// iteration,lower_bound,upper_bound,subproblem
std::string trace_csv(const SolveReport& report);

std::string dump_profit_stats(const ProfitStats& stats);
/// scenario,profit
std::string profits_csv(const ProfitStats& stats);

std::string dump_tune_result(const TuneResult& result, const ScoringObjective& objective);
/// lambda,score,estimate
std::string lambda_curve_csv(const TuneResult& result);

std::string dump_superposition(const SuperpositionReport& report);

/// policy,row then the KPI fields; one row per replication plus `mean` and
/// `stderr` aggregate rows per policy.
std::string kpi_ledger_csv(const std::vector<SimulationSummary>& runs);
std::string dump_kpi_summary(const std::vector<SimulationSummary>& runs);

}  // namespace bioinv
