#include <gtest/gtest.h>

#include <algorithm>

#include "bioinv/ccg.hpp"
#include "bioinv/formulations.hpp"
#include "oracles.hpp"

using namespace bioinv;

namespace {

struct Case {
  Instance inst;
  UncertaintySet set;
  Allocation alloc;
};

Case random_case(std::mt19937_64& rng, bool zero_inventory = true) {
  oracle::RandomShape shape;
  shape.zero_inventory = zero_inventory;
  Case c;
  c.inst = oracle::random_instance(rng, shape);
  c.set = oracle::random_set(rng, c.inst, 4);
  c.alloc = zero_allocation(c.inst);
  for (auto& row : c.alloc.x) {
    for (auto& v : row) v = static_cast<double>(std::uniform_int_distribution<int>(0, 4)(rng));
  }
  return c;
}

double brute_subproblem(const Case& c, const Matrix* committed, double lambda) {
  double best = 1e300;
  for (const auto& d : oracle::all_scenarios(c.set)) {
    best = std::min(best, oracle::subproblem_value(c.inst, c.alloc.x, committed, d, lambda));
  }
  return best;
}

}  // namespace

TEST(Fulfillment, RealisedProfitMatchesMinCostFlow) {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 60; ++k) {
    const auto c = random_case(rng, k % 2 == 0);
    for (const auto& d : sample_scenarios(lowest_feasible_scenario(c.set), 5, 1 + k, SampleFamily::uniform, &c.set)) {
      EXPECT_NEAR(evaluate_allocation(c.inst, c.alloc, d).profit, oracle::realized_profit(c.inst, c.alloc.x, d), 1e-7)
          << "case " << k;
    }
  }
}

TEST(Fulfillment, SingleStoreNewsvendorByHand) {
  const auto inst = single_store_instance(10, 4, 6, 1);
  Allocation a;
  a.x = {{5}};
  DemandScenario d{{{3}}, {{}}};
  // sell 3 for 30, hold 2 at 1, buy 5 at 6
  EXPECT_NEAR(evaluate_allocation(inst, a, d).profit, 30 - 2 - 30, 1e-9);
  d.walkin = {{8}};
  // sell 5 for 50, lose 3 at 4
  EXPECT_NEAR(evaluate_allocation(inst, a, d).profit, 50 - 12 - 30, 1e-9);
}

TEST(Fulfillment, OptimisticCommitmentsDoNotChangeRealisedProfit) {
  const auto inst = single_store_instance(10, 4, 6);
  Allocation a;
  a.x = {{5}};
  a.s_plus = Matrix{{2}};
  a.d_plus = Matrix{{2}};
  DemandScenario d{{{4}}, {{}}};
  Allocation bare;
  bare.x = a.x;
  EXPECT_NEAR(evaluate_allocation(inst, a, d).profit, evaluate_allocation(inst, bare, d).profit, 1e-12);
}

TEST(Subproblem, MipMatchesBruteForce) {
  std::mt19937_64 rng(41);
  for (int k = 0; k < 40; ++k) {
    const auto c = random_case(rng);
    for (double lambda : {0.0, 0.5}) {
      BioConfig cfg;
      cfg.lambda = lambda;
      const auto sp = build_subproblem(c.inst, c.set, c.alloc, cfg);
      const auto sol = lp::solve(sp.model);
      ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
      const double ref = brute_subproblem(c, nullptr, lambda);
      EXPECT_NEAR(sol.objective, ref, 1e-6 * (1 + std::abs(ref))) << "case " << k << " lambda " << lambda;
      const auto worst = extract_worst_scenario(sp, sol.values);
      EXPECT_TRUE(contains(c.set, worst));
      EXPECT_NEAR(oracle::subproblem_value(c.inst, c.alloc.x, nullptr, worst, lambda), ref, 1e-6 * (1 + std::abs(ref)));
    }
  }
}

TEST(Subproblem, CommittedSalesReduceSupply) {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 20; ++k) {
    auto c = random_case(rng);
    Matrix committed = c.alloc.x;
    for (auto& row : committed) {
      for (auto& v : row) v = std::floor(v / 2);
    }
    c.alloc.s_plus = committed;
    BioConfig cfg;
    cfg.lambda = 0.5;
    const auto sp = build_subproblem(c.inst, c.set, c.alloc, cfg);
    const auto sol = lp::solve(sp.model);
    ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
    const double ref = brute_subproblem(c, &committed, 0.5);
    EXPECT_NEAR(sol.objective, ref, 1e-6 * (1 + std::abs(ref))) << "case " << k;
  }
}

TEST(Subproblem, DualLpAndPrimalAgreeAtFixedDemand) {
  std::mt19937_64 rng(47);
  for (int k = 0; k < 30; ++k) {
    const auto c = random_case(rng, false);
    BioConfig cfg;
    cfg.lambda = 0.25;
    const auto d = highest_feasible_scenario(c.set);
    const double primal = subproblem_value_at(c.inst, c.alloc, d, cfg);
    const auto dual = build_dual_lp(c.inst, c.alloc, d, cfg);
    const auto sol = lp::solve(dual.model);
    ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
    EXPECT_NEAR(sol.objective, primal, 1e-6 * (1 + std::abs(primal)));
    EXPECT_NEAR(primal, oracle::subproblem_value(c.inst, c.alloc.x, nullptr, d, 0.25), 1e-6 * (1 + std::abs(primal)));
  }
}

TEST(Subproblem, SelectionStartRoundTrips) {
  std::mt19937_64 rng(53);
  const auto c = random_case(rng);
  const auto sp = build_subproblem(c.inst, c.set, c.alloc, BioConfig{});
  const auto d = lowest_feasible_scenario(c.set);
  const auto start = selection_start(sp, d);
  EXPECT_EQ(extract_worst_scenario(sp, start), d);
}

TEST(Subproblem, AlternatingHeuristicIsAnUpperBound) {
  std::mt19937_64 rng(59);
  for (int k = 0; k < 30; ++k) {
    const auto c = random_case(rng);
    BioConfig cfg;
    cfg.lambda = 0.25;
    const auto h = alternating_heuristic_subproblem(c.inst, c.set, c.alloc, cfg, 20);
    EXPECT_TRUE(contains(c.set, h.scenario));
    const double at = oracle::subproblem_value(c.inst, c.alloc.x, nullptr, h.scenario, 0.25);
    EXPECT_NEAR(h.value, at, 1e-6 * (1 + std::abs(at)));
    EXPECT_GE(h.value, brute_subproblem(c, nullptr, 0.25) - 1e-6);
  }
}

TEST(Master, SingleScenarioPoolIsPerfectInformation) {
  // with one scenario the robust master is the deterministic problem
  std::mt19937_64 rng(61);
  for (int k = 0; k < 15; ++k) {
    auto c = random_case(rng);
    if (c.inst.num_nodes() * c.inst.periods() > 4) continue;
    const auto d = highest_feasible_scenario(c.set);
    BioConfig cfg;
    cfg.integer_allocations = true;
    const auto mp = build_master(c.inst, c.set, {d}, cfg);
    const auto sol = lp::solve(mp.model);
    ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
    double best = -1e300;
    for (const auto& x : oracle::allocation_grid(c.inst.periods(), c.inst.num_nodes(), 8)) {
      best = std::max(best, oracle::realized_profit(c.inst, x, d));
    }
    EXPECT_NEAR(sol.objective, best, 1e-6 * (1 + std::abs(best))) << "case " << k;
  }
}

TEST(Master, RepositioningMovesIdleStock) {
  Instance inst;
  inst.name = "repo";
  inst.horizon = 1;
  inst.network.nodes = {"a", "b"};
  inst.network.kinds = {NodeKind::store, NodeKind::store};
  inst.econ.walkin_price = {{10, 10}};
  inst.econ.walkin_penalty = {{50, 50}};
  inst.econ.online_price = {0};
  inst.econ.online_penalty = {0};
  inst.econ.holding = {0, 0};
  inst.econ.fulfill_cost = {{}, {}};
  inst.econ.purchase_cost = {100, 100};
  inst.econ.reposition_cost = Matrix{{0, 1}, {1, 0}};
  inst.inventory.lead_time = {0, 0};
  inst.inventory.pipeline = {{3}, {0}};
  inst.inventory.reposition_lead = std::vector<std::vector<int>>{{0, 0}, {0, 0}};
  UncertaintySet u;
  u.walkin = {{{0, 3}}, {{0, 3}}, {3}, {3}};
  u.online = {{{}}, {{}}, {0}, {0}};
  BioConfig plain;
  const auto r0 = solve_two_stage(inst, u, plain);
  // buying at 100 loses to the 50 penalty: lose 3 units
  EXPECT_NEAR(r0.objective, -150, 1e-6);
  BioConfig repo;
  repo.repositioning = true;
  const auto r1 = solve_two_stage(inst, u, repo);
  // move 3 units at 1 each and sell them at 10
  EXPECT_NEAR(r1.objective, 27, 1e-6);
  ASSERT_TRUE(r1.allocation.x_repo.has_value());
  EXPECT_NEAR((*r1.allocation.x_repo)[0][0][1], 3, 1e-6);
}

TEST(Saa, SingleStoreMatchesEnumeration) {
  const auto inst = single_store_instance(10, 5, 7, 1);
  DemandMeans m{{{3}}, {{}}};
  const auto samples = sample_scenarios(m, 200, 3, SampleFamily::poisson);
  const auto saa = build_saa_model(inst, samples);
  const auto sol = lp::solve(saa.model);
  ASSERT_EQ(sol.status, lp::SolveStatus::optimal);
  double best = -1e300;
  for (int x = 0; x <= 15; ++x) {
    double s = 0;
    for (const auto& d : samples) s += oracle::realized_profit(inst, {{double(x)}}, d);
    best = std::max(best, s / samples.size());
  }
  EXPECT_NEAR(sol.objective, best, 1e-7);
}

TEST(Saa, SegmentRestrictionIsBoundedByFullModel) {
  std::mt19937_64 rng(67);
  for (int k = 0; k < 10; ++k) {
    const auto c = random_case(rng);
    const auto samples = sample_scenarios(lowest_feasible_scenario(c.set), 40, k, SampleFamily::uniform, &c.set);
    const auto full = lp::solve(build_saa_model(c.inst, samples).model);
    SaaSegment seg{zeros(c.inst.periods(), c.inst.num_nodes()), c.alloc.x};
    std::size_t lv = 0;
    const auto restricted = build_saa_model(c.inst, samples, &seg, &lv);
    const auto rs = lp::solve(restricted.model);
    ASSERT_EQ(full.status, lp::SolveStatus::optimal);
    ASSERT_EQ(rs.status, lp::SolveStatus::optimal);
    EXPECT_LE(rs.objective, full.objective + 1e-7);
    const double lam = rs.values[lv];
    EXPECT_GE(lam, -1e-9);
    EXPECT_LE(lam, 1 + 1e-9);
    Matrix x = c.alloc.x;
    for (auto& row : x) {
      for (auto& v : row) v *= lam;
    }
    double mean = 0;
    for (const auto& d : samples) mean += oracle::realized_profit(c.inst, x, d);
    EXPECT_NEAR(rs.objective, mean / samples.size(), 1e-6 * (1 + std::abs(rs.objective)));
  }
}
