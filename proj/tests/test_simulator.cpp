#include <gtest/gtest.h>

#include <filesystem>
#include <algorithm>

#include "bioinv/io.hpp"
#include "bioinv/simulator.hpp"
#include "oracles.hpp"

using namespace bioinv;

namespace {

std::string data(const std::string& f) { return (std::filesystem::path(BIOINV_DATA_DIR) / f).string(); }

struct Fixture {
  Instance inst = load_instance(data("simulation/instance.json"));
  DemandMeans means = load_means(data("simulation/means.json"));
};

void check_invariants(const Instance& inst, const ReplicationResult& r, bool credit_excess) {
  const auto& k = r.kpi;
  const std::size_t L = inst.num_nodes();
  std::vector<const LedgerRow*> last(L, nullptr);
  double sold = 0, shipped = 0, arrived = 0, first = 0, final_stock = 0;
  for (const auto& row : r.ledger) {
    EXPECT_NEAR(row.end, row.start + row.arrivals - row.walkin_sales - row.shipments, 1e-9);
    EXPECT_GE(row.end, -1e-9);
    EXPECT_GE(row.start, -1e-9);
    if (last[row.node]) {
      EXPECT_NEAR(row.start, last[row.node]->end, 1e-9);
    } else {
      first += row.start;
    }
    last[row.node] = &row;
    sold += row.walkin_sales;
    shipped += row.shipments;
    arrived += row.arrivals;
  }
  for (const auto* row : last) {
    ASSERT_NE(row, nullptr);
    final_stock += row->end;
  }
  EXPECT_NEAR(first + arrived - sold - shipped, final_stock, 1e-9);
  EXPECT_NEAR(sold, k.walkin_sales_qty, 1e-9);
  EXPECT_NEAR(sold + shipped, k.total_sales_qty, 1e-9);
  EXPECT_LE(k.sfs_qty, shipped + 1e-9);
  EXPECT_LE(k.dc_replenish_qty, k.replenish_qty + 1e-9);
  double excess = 0;
  for (std::size_t l = 0; l < L; ++l) excess += inst.econ.purchase_cost[l] * last[l]->end;
  EXPECT_NEAR(k.excess_inventory_at_cost, excess, 1e-6);
  const double base = k.satisfied_revenue - k.shipping_cost - k.purchase_cost;
  EXPECT_NEAR(k.realized_profit, credit_excess ? base + excess : base, 1e-6);
  EXPECT_NEAR(k.penalized_profit, k.realized_profit - r.lost_penalty, 1e-6);
  for (double s : {k.walkin_service_level, k.ecom_service_level, k.total_service_level}) {
    EXPECT_GE(s, 0);
    EXPECT_LE(s, 1);
  }
  EXPECT_NEAR(k.walkin_service_level, k.walkin_sales_qty / (k.walkin_sales_qty + r.walkin_lost), 1e-12);
}

}  // namespace

TEST(Stats, LowerQuantileAndSummary) {
  EXPECT_EQ(lower_quantile({5, 1, 4, 2, 3}, 0.5), 3);
  EXPECT_EQ(lower_quantile({5, 1, 4, 2, 3}, 0.2), 1);
  EXPECT_EQ(lower_quantile({5, 1, 4, 2, 3}, 0.21), 2);
  EXPECT_EQ(lower_quantile({5, 1, 4, 2, 3}, 1.0), 5);
  EXPECT_THROW(lower_quantile({}, 0.5), std::invalid_argument);
  EXPECT_THROW(lower_quantile({1}, 0.0), std::invalid_argument);
  std::vector<double> v;
  for (int i = 1; i <= 20; ++i) v.push_back(21 - i);
  const auto s = summarize_profits(v);
  EXPECT_EQ(s.count, 20u);
  EXPECT_EQ(s.min, 1);
  EXPECT_EQ(s.p5, 1);
  EXPECT_EQ(s.p10, 2);
  EXPECT_EQ(s.median, 10);
  EXPECT_DOUBLE_EQ(s.mean, 10.5);
  EXPECT_EQ(s.max, 20);
  EXPECT_EQ(s.profits, v);
}

TEST(Stats, BatchEvaluateMatchesOracle) {
  std::mt19937_64 rng(91);
  const auto inst = oracle::random_instance(rng, {});
  const auto set = oracle::random_set(rng, inst, 4);
  auto a = zero_allocation(inst);
  for (auto& row : a.x) {
    for (auto& v : row) v = 2;
  }
  const auto sc = sample_scenarios(lowest_feasible_scenario(set), 50, 4, SampleFamily::uniform, &set);
  const auto st = batch_evaluate(inst, a, sc, 2);
  ASSERT_EQ(st.profits.size(), sc.size());
  for (std::size_t i = 0; i < sc.size(); ++i) EXPECT_NEAR(st.profits[i], oracle::realized_profit(inst, a.x, sc[i]), 1e-7);
}

TEST(Orders, SpreadDownKeepsTotalsAndIsSeeded) {
  const std::vector<double> weekly{3, 0, 11};
  const auto a = spread_down(weekly, Channel::walkin, 7, std::uint64_t{5});
  const auto b = spread_down(weekly, Channel::walkin, 7, std::uint64_t{5});
  ASSERT_EQ(a.size(), 7u);
  std::vector<double> count(3, 0);
  for (std::size_t d = 0; d < 7; ++d) {
    ASSERT_EQ(a[d].size(), b[d].size());
    for (std::size_t i = 0; i < a[d].size(); ++i) {
      EXPECT_EQ(a[d][i].cell, b[d][i].cell);
      EXPECT_EQ(a[d][i].rank, b[d][i].rank);
      EXPECT_EQ(a[d][i].day, d);
      count[a[d][i].cell] += 1;
    }
  }
  EXPECT_EQ(count, weekly);
  EXPECT_THROW(spread_down(weekly, Channel::walkin, 0, std::uint64_t{1}), std::invalid_argument);
}

TEST(Orders, InterleaveSortsByRank) {
  const auto a = spread_down({4, 4}, Channel::walkin, 3, std::uint64_t{1});
  const auto b = spread_down({6}, Channel::online, 3, std::uint64_t{2});
  const auto m = interleave(a, b);
  std::size_t total = 0;
  for (const auto& day : m) {
    total += day.size();
    for (std::size_t i = 1; i < day.size(); ++i) EXPECT_LE(day[i - 1].rank, day[i].rank);
  }
  EXPECT_EQ(total, 14u);
}

TEST(Orders, OnlineOrdersPreferStockAboveReserveThenCost) {
  const Fixture f;
  const auto& inst = f.inst;
  const auto edges = inst.fulfillment_edges();
  ASSERT_FALSE(edges.empty());
  const std::size_t z = edges[0].zone;
  std::vector<std::size_t> nodes;
  for (const auto& e : edges) {
    if (e.zone == z) nodes.push_back(e.node);
  }
  ASSERT_GE(nodes.size(), 2u);
  std::sort(nodes.begin(), nodes.end(),
            [&](auto a, auto b) { return inst.econ.fulfill_cost[a][z] < inst.econ.fulfill_cost[b][z]; });
  const auto cheap = nodes.front(), dear = nodes.back();
  std::vector<double> on_hand(inst.num_nodes(), 0), reserve(inst.num_nodes(), 5);
  on_hand[cheap] = 3;  // below reserve
  on_hand[dear] = 9;   // above reserve
  std::vector<Order> orders{{Channel::online, z, 0, 0.1}};
  auto ev = fulfill_order_stream(inst, orders, on_hand, reserve);
  ASSERT_TRUE(ev[0].served);
  EXPECT_EQ(ev[0].node, dear);
  EXPECT_EQ(ev[0].tier, 1);
  EXPECT_EQ(on_hand[dear], 8);
  reserve.assign(inst.num_nodes(), 0);
  ev = fulfill_order_stream(inst, orders, on_hand, reserve);
  EXPECT_EQ(ev[0].node, cheap);
  EXPECT_DOUBLE_EQ(ev[0].cost, inst.econ.fulfill_cost[cheap][z]);
  // walk-in takes local stock only
  std::vector<double> empty(inst.num_nodes(), 0);
  const std::vector<Order> walk{{Channel::walkin, 0, 0, 0.5}};
  ev = fulfill_order_stream(inst, walk, empty, reserve);
  EXPECT_FALSE(ev[0].served);
  EXPECT_EQ(ev[0].tier, 0);
}

TEST(Planning, WindowAndPipeline) {
  const Fixture f;
  const auto m = window_means(f.means, 1, 3);
  ASSERT_EQ(m.walkin.size(), 3u);
  EXPECT_EQ(m.walkin[0], f.means.walkin[std::min<std::size_t>(1, f.means.walkin.size() - 1)]);
  EXPECT_EQ(m.walkin[2], f.means.walkin.back());
  std::vector<double> on_hand(f.inst.num_nodes(), 2);
  Matrix transit(f.inst.num_nodes());
  for (std::size_t l = 0; l < f.inst.num_nodes(); ++l) transit[l].assign(f.inst.inventory.lead_time[l] + 1, 0);
  const auto p = planning_instance(f.inst, 2, 0, on_hand, transit);
  EXPECT_EQ(p.periods(), 2u);
  EXPECT_TRUE(validate_instance(p).empty());
  for (std::size_t l = 0; l < p.num_nodes(); ++l) EXPECT_DOUBLE_EQ(p.scheduled_supply(0, l), 2);
}

TEST(Simulation, InvariantsHoldForEveryPolicy) {
  const Fixture f;
  SimulationOptions o;
  o.replications = 3;
  o.keep_ledger = true;
  for (const auto kind : {PolicyKind::basestock, PolicyKind::pwl, PolicyKind::bio}) {
    PolicySpec p;
    p.kind = kind;
    p.lambda = 0.1;
    for (bool credit : {false, true}) {
      o.credit_excess = credit;
      const auto s = run_rolling_horizon(f.inst, f.means, p, o);
      ASSERT_EQ(s.replications.size(), 3u);
      for (const auto& r : s.replications) {
        EXPECT_TRUE(r.failures.empty());
        EXPECT_EQ(r.ledger.size(), o.weeks * o.days * f.inst.num_nodes());
        check_invariants(f.inst, r, credit);
      }
    }
  }
}

TEST(Simulation, SeedDeterminesEverything) {
  const Fixture f;
  SimulationOptions o;
  o.replications = 4;
  PolicySpec p;
  p.kind = PolicyKind::bio;
  const auto a = run_rolling_horizon(f.inst, f.means, p, o);
  o.threads = 2;
  const auto b = run_rolling_horizon(f.inst, f.means, p, o);
  for (std::size_t r = 0; r < 4; ++r) EXPECT_EQ(kpi_values(a.replications[r].kpi), kpi_values(b.replications[r].kpi));
  o.seed = 2;
  const auto c = run_rolling_horizon(f.inst, f.means, p, o);
  EXPECT_NE(kpi_values(a.mean), kpi_values(c.mean));
  EXPECT_EQ(a.policy, "pure_ro");
}

TEST(Simulation, KpiValuesRoundTrip) {
  KpiReport k;
  k.realized_profit = 3;
  k.sfs_qty = 2;
  EXPECT_EQ(kpi_values(kpi_from_values(kpi_values(k))), kpi_values(k));
  EXPECT_EQ(kpi_values(k).size(), kpi_fields().size());
}

TEST(Simulation, RejectsBadOptions) {
  const Fixture f;
  SimulationOptions o;
  o.replications = 0;
  EXPECT_THROW(run_rolling_horizon(f.inst, f.means, PolicySpec{}, o), std::invalid_argument);
  o.replications = 1;
  o.days = 0;
  EXPECT_THROW(run_rolling_horizon(f.inst, f.means, PolicySpec{}, o), std::invalid_argument);
  o.days = 7;
  PolicySpec p;
  p.lambda = 2;
  EXPECT_THROW(run_rolling_horizon(f.inst, f.means, p, o), std::invalid_argument);
}
