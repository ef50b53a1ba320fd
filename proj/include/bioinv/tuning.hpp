#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bioinv/ccg.hpp"

namespace bioinv {

/// Element-wise λ·x1 + (1−λ)·x0 on x (and on repositioning flows when both have them).
Allocation superpose(const Allocation& x0, const Allocation& x1, double lambda);

struct ClosedForm {
  double x_bio0 = 0.0;
  double z_bio0 = 0.0;
  double x_bio1 = 0.0;
  double z_bio1 = 0.0;
};

/// Single location, one period, no lead time, nothing on hand.
ClosedForm closed_form_single_location(double p, double b, double h, double c, double d_min, double d_max);

enum class ScoreKind { mean, worst_case, best_case, cvar, mixture };

struct ScoringObjective {
  ScoreKind kind = ScoreKind::mean;
  double level = 1.0;  // cvar tail fraction
  std::vector<std::pair<double, ScoringObjective>> parts;  // mixture components

  static ScoringObjective mean() { return {}; }
  static ScoringObjective worst() { return {ScoreKind::worst_case, 1.0, {}}; }
  static ScoringObjective best() { return {ScoreKind::best_case, 1.0, {}}; }
  static ScoringObjective cvar(double eta) { return {ScoreKind::cvar, eta, {}}; }
};

void check_objective(const ScoringObjective& objective);
std::string describe(const ScoringObjective& objective);
/// "mean", "worst", "best", "cvar:0.1", "mix:0.5*mean+0.5*worst".
ScoringObjective parse_objective(const std::string& text);

/// Realised profit of the allocation under every scenario, in order.
std::vector<double> scenario_profits(const Instance& instance, const Allocation& allocation,
                                     const std::vector<DemandScenario>& scenarios, std::size_t threads = 1);

double score_profits(const std::vector<double>& profits, const ScoringObjective& objective);

double score_allocation(const Instance& instance, const Allocation& allocation,
                        const std::vector<DemandScenario>& scenarios, const ScoringObjective& objective,
                        std::size_t threads = 1);

enum class TuneMethod { grid, bisection };

struct TuneOptions {
  TuneMethod method = TuneMethod::grid;
  std::vector<double> grid{0.05, 0.10, 0.25, 0.50, 0.75};
  double tolerance = 1e-3;  // bisection width on λ
  BioConfig base;           // λ overwritten per run
  CcgOptions ccg;
  std::size_t threads = 1;
};

struct LambdaPoint {
  double lambda = 0.0;
  double score = 0.0;
  double estimate = 0.0;  // BIO objective at λ (solved or superposed)
};

struct TuneResult {
  double lambda = 0.0;
  Allocation allocation;
  double score = 0.0;
  std::vector<LambdaPoint> curve;  // in evaluation order
  std::size_t solves = 0;
};

TuneResult tune_lambda(const Instance& instance, const UncertaintySet& set,
                       const std::vector<DemandScenario>& scenarios, const ScoringObjective& objective,
                       const TuneOptions& options);

struct ScenarioSplit {
  std::vector<DemandScenario> validation;
  std::vector<DemandScenario> holdout;
};

/// First `fraction` of the list for validation, the rest held out.
ScenarioSplit split_scenarios(const std::vector<DemandScenario>& scenarios, double fraction = 0.8);

struct SuperpositionReport {
  double lambda = 0.0;
  double z0 = 0.0;
  double z1 = 0.0;
  double z_lambda = 0.0;
  double residual = 0.0;           // |Z_λ − λZ_1 − (1−λ)Z_0|
  double superposed_value = 0.0;   // BIO-λ value of superpose(x0, x1, λ)
  double superposed_gap = 0.0;     // |superposed_value − Z_λ|
  bool converged = false;          // all four solves converged
  Allocation x0, x1, x_lambda;
};

SuperpositionReport verify_superposition(const Instance& instance, const UncertaintySet& set, double lambda,
                                         const CcgOptions& options = {}, const BioConfig& base = {});

/// True when nothing is on hand or in the pipeline.
bool zero_initial_inventory(const Instance& instance);

}  // namespace bioinv
