#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bioinv/instance.hpp"
#include "bioinv/lp/model.hpp"
#include "bioinv/lp/solver.hpp"
#include "bioinv/uncertainty.hpp"

namespace bioinv {

enum class AlliedChannels { walkin_only, both };

struct BioConfig {
  double lambda = 0.0;
  AlliedChannels allied = AlliedChannels::walkin_only;
  bool integer_allocations = false;
  bool repositioning = false;

  /// Weight of the adversarial walk-in demand, 1 - lambda.
  [[nodiscard]] double walkin_weight() const { return 1.0 - lambda; }
  /// Weight of the adversarial online demand: 1 unless both channels are allied.
  [[nodiscard]] double online_weight() const { return allied == AlliedChannels::both ? 1.0 - lambda : 1.0; }
};

void check_config(const BioConfig& config);

/// Stage-one decisions committed before demand is revealed.
struct Allocation {
  Matrix x;  // [t][l]
  std::optional<std::vector<Matrix>> x_repo;  // [t][from][to]
  std::optional<Matrix> s_plus;               // [t][l], optimistic walk-in sales
  std::optional<Matrix> d_plus;               // [t][l], allied walk-in demand
  std::optional<Matrix> y_plus;               // [t][edge], optimistic online fulfilment (both mode)
  std::optional<Matrix> d_plus_online;        // [t][z]
};

Allocation zero_allocation(const Instance& instance);

/// Purchase cost plus repositioning cost of the allocation.
double stage_one_cost(const Instance& instance, const Allocation& allocation);

struct FulfillmentPlan {
  Matrix s;  // [t][l] walk-in sales
  Matrix y;  // [t][edge], edges as in Instance::fulfillment_edges()
  Matrix inventory;  // [t][l], end of period t
  double profit = 0.0;
};

/// Linear expression `constant + sum(coef * var)`.
struct LinExpr {
  double constant = 0.0;
  std::vector<lp::Term> terms;

  LinExpr& operator+=(const LinExpr& o);
  LinExpr& operator+=(double c) { constant += c; return *this; }
  void add(std::size_t var, double coef) { terms.push_back({var, coef}); }
  [[nodiscard]] double value(const std::vector<double>& values) const;
};

/// Stage-one quantities seen by one copy of the recourse: all affine in the
/// master's variables, constants elsewhere.
struct StageOneTerms {
  std::vector<std::vector<LinExpr>> supply;       // [t][l] right-hand side of the balance row
  std::vector<std::vector<LinExpr>> cap_offset;   // [t][l] fulfilment capacity left for recourse
  std::vector<LinExpr> window_offset;             // [t] Σ_A y+ − ρ Σ y+
};

/// Stage-one terms for a fixed allocation.
StageOneTerms fixed_stage_one(const Instance& instance, const Allocation& allocation);

/// Indices of one recourse copy inside a model.
struct RecourseBlock {
  std::vector<std::vector<std::size_t>> s;          // [t][l]
  std::vector<std::vector<std::size_t>> y;          // [t][edge]
  std::vector<std::vector<std::size_t>> inventory;  // [t][l]
  LinExpr value;  // Σ(p+b)s + Σ(p^o+b^o−c)y − Σ h I, demand constants excluded
};

/// Appends the fulfilment variables and rows for one demand realisation.
/// `walkin_cap` and `online_cap` are the already weighted demand caps.
RecourseBlock add_recourse(lp::LinearModel& model, const Instance& instance, const StageOneTerms& stage_one,
                           const Matrix& walkin_cap, const Matrix& online_cap, const std::string& tag);

/// −Σ b κ_b D^b − Σ b^o κ_o D^o: penalty on the weighted adversarial demand.
double demand_penalty(const Instance& instance, const DemandScenario& scenario, double walkin_weight,
                      double online_weight);

struct FulfillmentModel {
  lp::LinearModel model;
  RecourseBlock block;
};

/// Recourse LP with x fixed, full demand, objective = realised profit.
FulfillmentModel build_fulfillment_model(const Instance& instance, const Allocation& allocation,
                                         const DemandScenario& scenario);

/// Realised profit of an allocation under one scenario, stage-one costs included.
/// Optimistic commitments are ignored: realised demand is served by the recourse alone.
FulfillmentPlan evaluate_allocation(const Instance& instance, const Allocation& allocation,
                                    const DemandScenario& scenario, const lp::SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Adversarial subproblem

struct DualIndex {
  std::vector<std::vector<std::size_t>> alpha;  // [t][l]
  std::vector<std::vector<std::size_t>> beta;   // [t][z]
  std::vector<std::vector<std::size_t>> gamma;  // [t][l]
  std::vector<std::vector<std::size_t>> mu;     // [t][l], empty without fulfilment capacity
  std::vector<std::size_t> nu;                  // [t], empty without service window
};

struct Selection {
  double value = 0.0;
  std::size_t w = 0;       // binary selector (unused when fixed)
  std::size_t star = 0;    // linearised dual × selector
  bool fixed = false;      // single admissible value, no binary needed
};

struct SubproblemModel {
  lp::LinearModel model;
  DualIndex dual;
  std::vector<std::vector<std::vector<Selection>>> walkin;  // [t][l][k], empty when κ_b = 0
  std::vector<std::vector<std::vector<Selection>>> online;  // [t][z][k], empty when κ_o = 0
  DemandScenario fallback;  // used for channels the adversary does not control
};

/// Exact mixed-binary reformulation of the adversarial subproblem (minimisation).
/// Its optimum is the worst-case recourse value minus the weighted demand penalty.
SubproblemModel build_subproblem(const Instance& instance, const UncertaintySet& set,
                                 const Allocation& allocation, const BioConfig& config,
                                 double enumeration_cap = 1e7);

/// Reads the selected demand of each cell.  Throws std::logic_error on a
/// non-binary selector.
DemandScenario extract_worst_scenario(const SubproblemModel& sp, const std::vector<double>& values);

/// Binary assignment selecting `scenario` (for warm starts); throws when the
/// scenario is not representable.
std::vector<double> selection_start(const SubproblemModel& sp, const DemandScenario& scenario);

struct DualModel {
  lp::LinearModel model;
  DualIndex dual;
};

/// Dual of the recourse LP at a fixed demand; optimum equals the subproblem
/// objective restricted to that demand.
DualModel build_dual_lp(const Instance& instance, const Allocation& allocation, const DemandScenario& scenario,
                        const BioConfig& config);

/// Subproblem objective at a fixed demand, computed from the primal recourse LP.
double subproblem_value_at(const Instance& instance, const Allocation& allocation,
                           const DemandScenario& scenario, const BioConfig& config,
                           const lp::SolveOptions& options = {});

// ---------------------------------------------------------------------------
// Master problem

struct MasterIndex {
  std::size_t eta = 0;
  std::vector<std::vector<std::size_t>> x;       // [t][l]
  std::vector<std::vector<std::vector<std::size_t>>> x_bits;  // [t][l][k], integer mode
  std::vector<std::vector<std::vector<std::size_t>>> repo;    // [t][from][to], npos on the diagonal
  std::vector<std::vector<std::size_t>> s_plus;  // [t][l]
  std::vector<std::vector<std::size_t>> d_plus;  // [t][l]
  std::vector<std::vector<std::size_t>> y_plus;  // [t][edge]
  std::vector<std::vector<std::size_t>> d_plus_online;  // [t][z]
  std::vector<RecourseBlock> blocks;             // one per scenario
};

struct MasterModel {
  lp::LinearModel model;
  MasterIndex index;
};

inline constexpr std::size_t kNoVar = static_cast<std::size_t>(-1);

/// Upper bound used for x in integer mode (and as a safe bound otherwise).
double allocation_cap(const Instance& instance, const UncertaintySet& set, std::size_t t, std::size_t l);

/// Master over a finite scenario pool.  With an empty pool η is dropped.
/// `fixed_x` pins x (and repositioning) to the given allocation.
MasterModel build_master(const Instance& instance, const UncertaintySet& set,
                         const std::vector<DemandScenario>& scenarios, const BioConfig& config,
                         const Allocation* fixed_x = nullptr);

Allocation read_master_allocation(const MasterModel& master, const std::vector<double>& values);

/// Stage-one objective part of the master, excluding η, at the given solution.
double master_stage_one_value(const MasterModel& master, const std::vector<double>& values);

// ---------------------------------------------------------------------------
// Sample average approximation

struct SaaModel {
  lp::LinearModel model;
  std::vector<std::vector<std::size_t>> x;  // [t][l]
};

/// Maximises the mean realised profit over the samples.  When `segment` is
/// given, x is restricted to λ·x1 + (1−λ)·x0 with λ ∈ [0,1] as the only
/// stage-one variable (index returned in `lambda_var`).
struct SaaSegment {
  Matrix x0;
  Matrix x1;
};
SaaModel build_saa_model(const Instance& instance, const std::vector<DemandScenario>& samples,
                         const SaaSegment* segment = nullptr, std::size_t* lambda_var = nullptr);

}  // namespace bioinv
