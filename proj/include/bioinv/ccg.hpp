#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bioinv/formulations.hpp"

namespace bioinv {

enum class SubproblemMode { exact_mip, alternating_heuristic, ah_then_mip };

const char* to_string(SubproblemMode mode);
SubproblemMode parse_subproblem_mode(const std::string& name);

struct CcgOptions {
  double epsilon = 1e-4;
  double delta = 1e-5;
  std::size_t max_iterations = 20;
  double max_seconds = 300.0;
  SubproblemMode subproblem_mode = SubproblemMode::exact_mip;
  std::size_t heuristic_rounds = 50;
  lp::SolveLimits master_limits;
  lp::SolveLimits subproblem_limits;
  /// Re-score this allocation instead of optimising x.
  std::optional<Allocation> fixed_allocation;
};

void check_options(const CcgOptions& options);

enum class Termination { converged, iteration_limit, time_limit };

const char* to_string(Termination t);

struct SolveReport {
  Allocation allocation;  // best lower-bound allocation
  double objective = 0.0;  // lower bound attained by `allocation`
  double upper_bound = 0.0;
  std::vector<double> lower_trace;
  std::vector<double> upper_trace;
  std::vector<double> subproblem_trace;  // SP objective per iteration
  std::vector<DemandScenario> pool;
  DemandScenario worst_scenario;  // subproblem demand at `allocation`
  DemandScenario robust_worst_scenario;  // pure worst case of `allocation` over the set
  double worst_case_profit = 0.0;  // realised profit under robust_worst_scenario
  bool worst_case_exact = false;   // false when the estimate comes from a heuristic or a limit
  std::size_t iterations = 0;
  double seconds = 0.0;
  Termination termination = Termination::iteration_limit;
  bool stalled = false;  // subproblem returned a scenario already in the pool
  bool exact = false;    // the reported bound came from an exactly solved subproblem

  [[nodiscard]] double gap(double delta = 1e-5) const;
};

/// Thrown when a master or subproblem solve fails; carries the partial report.
class SolveFailure : public std::runtime_error {
 public:
  SolveFailure(const std::string& what, SolveReport partial)
      : std::runtime_error(what), report(std::move(partial)) {}
  SolveReport report;
};

SolveReport solve_two_stage(const Instance& instance, const UncertaintySet& set, const BioConfig& config,
                            const CcgOptions& options = {});

struct WorstCase {
  DemandScenario scenario;
  double profit = 0.0;
};

/// Lowest realised profit of the stage-one quantities over the set
/// (optimistic commitments dropped, exact subproblem).
WorstCase robust_worst_case(const Instance& instance, const UncertaintySet& set, const Allocation& allocation,
                            const lp::SolveLimits& limits = {});

struct HeuristicResult {
  DemandScenario scenario;
  double value = 0.0;  // subproblem objective at `scenario` (≥ the exact minimum)
  std::size_t rounds = 0;
};

/// Alternates between the dual LP at fixed demand and the demand LP at fixed
/// duals.  Starts from `start` or from the set's upper corner.
HeuristicResult alternating_heuristic_subproblem(const Instance& instance, const UncertaintySet& set,
                                                 const Allocation& allocation, const BioConfig& config,
                                                 std::size_t rounds,
                                                 const std::optional<DemandScenario>& start = std::nullopt);

}  // namespace bioinv
