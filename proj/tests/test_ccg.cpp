#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>

#include "bioinv/ccg.hpp"
#include "bioinv/io.hpp"
#include "oracles.hpp"

using namespace bioinv;

namespace {

std::string data(const std::string& f) { return (std::filesystem::path(BIOINV_DATA_DIR) / f).string(); }

// Per-location profit of the three-location example, T = 1, h = 0.
double three_profit(double p, double b, const std::vector<double>& x, const std::vector<double>& d) {
  double v = 0;
  for (std::size_t l = 0; l < 3; ++l) v += p * std::min(x[l], d[l]) - b * std::max(0.0, d[l] - x[l]) - 40 * x[l];
  return v;
}

// Robust optimum over a quarter-unit grid and exact best-case optimum.
std::pair<double, double> three_location_reference(double p, double b) {
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  const auto scen = oracle::all_scenarios(set);
  double z0 = -1e300;
  for (int i = 0; i <= 12; ++i)
    for (int j = 0; j <= 12; ++j)
      for (int k = 0; k <= 12; ++k) {
        const std::vector<double> x{i / 4.0, j / 4.0, k / 4.0};
        double w = 1e300;
        for (const auto& d : scen) w = std::min(w, three_profit(p, b, x, d.walkin[0]));
        z0 = std::max(z0, w);
      }
  double z1 = -1e300;
  for (const auto& d : scen) {
    double v = 0;
    for (double q : d.walkin[0]) v += std::max((p - 40) * q, -b * q);
    z1 = std::max(z1, v);
  }
  return {z0, z1};
}

void expect_monotone(const SolveReport& r) {
  for (std::size_t i = 1; i < r.lower_trace.size(); ++i) {
    EXPECT_GE(r.lower_trace[i], r.lower_trace[i - 1] - 1e-9);
    EXPECT_LE(r.upper_trace[i], r.upper_trace[i - 1] + 1e-9);
  }
}

}  // namespace

class ThreeLocation : public ::testing::TestWithParam<std::pair<double, double>> {};

TEST_P(ThreeLocation, SuperposedObjectivesMatchReference) {
  const auto [p, b] = GetParam();
  const auto inst = load_instance(data("three_location/p" + std::to_string(int(p)) + "_b" + std::to_string(int(b)) + ".json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  const auto [z0, z1] = three_location_reference(p, b);
  for (double lambda : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    BioConfig cfg;
    cfg.lambda = lambda;
    const auto r = solve_two_stage(inst, set, cfg);
    EXPECT_EQ(r.termination, Termination::converged);
    EXPECT_NEAR(r.objective, lambda * z1 + (1 - lambda) * z0, 1e-6) << "lambda " << lambda;
    EXPECT_LE(r.gap(), 1e-4);
    expect_monotone(r);
  }
}

INSTANTIATE_TEST_SUITE_P(Settings, ThreeLocation,
                         ::testing::Values(std::make_pair(0.0, 160.0), std::make_pair(160.0, 0.0),
                                           std::make_pair(80.0, 80.0)));

TEST(Ccg, IntegerExampleMatchesHandValues) {
  const auto inst = load_instance(data("three_location/p0_b160.json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  BioConfig cfg;
  cfg.integer_allocations = true;
  auto r = solve_two_stage(inst, set, cfg);
  EXPECT_NEAR(r.objective, -360, 1e-6);
  EXPECT_EQ(r.allocation.x[0], (std::vector<double>{3, 3, 3}));
  cfg.lambda = 0.5;
  r = solve_two_stage(inst, set, cfg);
  EXPECT_NEAR(r.objective, -240, 1e-6);
  EXPECT_EQ(r.allocation.x[0], (std::vector<double>{2, 2, 2}));
  // worst case of [2,2,2]: demand (3,3,0) leaves 2 short at 160 on top of 240 spent
  EXPECT_NEAR(r.worst_case_profit, -560, 1e-6);
  EXPECT_TRUE(r.worst_case_exact);
  EXPECT_NEAR(robust_worst_case(inst, set, r.allocation).profit, -560, 1e-6);
}

TEST(Ccg, MatchesExhaustiveSearchOnSmallInstances) {
  std::mt19937_64 rng(71);
  oracle::RandomShape shape;
  shape.max_stores = 2;
  shape.max_warehouses = 0;
  shape.max_zones = 1;
  int done = 0;
  while (done < 8) {
    const auto inst = oracle::random_instance(rng, shape);
    const auto set = oracle::random_set(rng, inst, 3);
    if (inst.num_nodes() * inst.periods() > 3) continue;
    ++done;
    const auto scen = oracle::all_scenarios(set);
    double best = -1e300;
    for (const auto& x : oracle::allocation_grid(inst.periods(), inst.num_nodes(), 6)) {
      double w = 1e300;
      for (const auto& d : scen) w = std::min(w, oracle::realized_profit(inst, x, d));
      best = std::max(best, w);
    }
    BioConfig cfg;
    cfg.integer_allocations = true;
    const auto r = solve_two_stage(inst, set, cfg);
    EXPECT_EQ(r.termination, Termination::converged);
    EXPECT_NEAR(r.objective, best, 1e-6 * (1 + std::abs(best)));
    expect_monotone(r);
  }
}

TEST(Ccg, FixedAllocationIsRescored) {
  const auto inst = load_instance(data("three_location/p0_b160.json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  CcgOptions o;
  Allocation a;
  a.x = {{2, 2, 2}};
  o.fixed_allocation = a;
  const auto r = solve_two_stage(inst, set, BioConfig{}, o);
  EXPECT_NEAR(r.objective, -560, 1e-6);
  EXPECT_EQ(r.allocation.x, a.x);
}

TEST(Ccg, LimitsAreReported) {
  const auto inst = load_instance(data("three_location/p80_b80.json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  CcgOptions o;
  o.max_iterations = 1;
  auto r = solve_two_stage(inst, set, BioConfig{}, o);
  EXPECT_EQ(r.termination, Termination::iteration_limit);
  EXPECT_EQ(r.iterations, 1u);
  EXPECT_GE(r.upper_bound, r.objective);
  o.max_iterations = 20;
  o.max_seconds = 1e-9;
  r = solve_two_stage(inst, set, BioConfig{}, o);
  EXPECT_EQ(r.termination, Termination::time_limit);
}

TEST(Ccg, HeuristicModeNeverClaimsConvergence) {
  const auto inst = load_instance(data("three_location/p80_b80.json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  CcgOptions o;
  o.subproblem_mode = SubproblemMode::alternating_heuristic;
  const auto r = solve_two_stage(inst, set, BioConfig{}, o);
  EXPECT_NE(r.termination, Termination::converged);
  EXPECT_FALSE(r.exact);
  o.subproblem_mode = SubproblemMode::ah_then_mip;
  const auto r2 = solve_two_stage(inst, set, BioConfig{}, o);
  EXPECT_EQ(r2.termination, Termination::converged);
  EXPECT_NEAR(r2.objective, three_location_reference(80, 80).first, 1e-6);
}

TEST(Ccg, RejectsBadOptionsAndConfig) {
  const auto inst = load_instance(data("three_location/p80_b80.json"));
  const auto set = load_uncertainty_set(data("three_location/set.json"));
  CcgOptions o;
  o.epsilon = -1;
  EXPECT_THROW(solve_two_stage(inst, set, BioConfig{}, o), std::invalid_argument);
  BioConfig c;
  c.lambda = 1.5;
  EXPECT_THROW(solve_two_stage(inst, set, c), std::invalid_argument);
  auto bad = set;
  bad.walkin.lower[0].pop_back();
  EXPECT_THROW(solve_two_stage(inst, bad, BioConfig{}), std::invalid_argument);
  EXPECT_EQ(parse_subproblem_mode("ah_then_mip"), SubproblemMode::ah_then_mip);
  EXPECT_THROW(parse_subproblem_mode("fast"), std::invalid_argument);
}
