#include <gtest/gtest.h>

#include <filesystem>

#include "bioinv/baselines.hpp"
#include "bioinv/io.hpp"
#include "oracles.hpp"

using namespace bioinv;

namespace {

int smallest_k_with_cdf(double mean, double q) {
  int k = 0;
  while (oracle::poisson_cdf(mean, k) < q) ++k;
  return k;
}

}  // namespace

TEST(Baselines, CriticalRatio) {
  EXPECT_DOUBLE_EQ(critical_ratio(100, 40), 0.6);
  EXPECT_DOUBLE_EQ(critical_ratio(0, 40), 0.0);
  EXPECT_DOUBLE_EQ(critical_ratio(30, 40), 0.0);
  EXPECT_DOUBLE_EQ(critical_ratio(100, -5), 1.0);
}

TEST(Baselines, CriticalQuantileDemand) {
  const auto inst = load_instance((std::filesystem::path(BIOINV_DATA_DIR) / "simulation/instance.json").string());
  const auto means = load_means((std::filesystem::path(BIOINV_DATA_DIR) / "simulation/means.json").string());
  const auto q = critical_quantile_demand(inst, means);
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t l = 0; l < inst.num_nodes(); ++l) {
      const double cr = critical_ratio(inst.econ.walkin_price[t][l], inst.econ.purchase_cost[l]);
      const double mu = means.walkin[t][l];
      EXPECT_EQ(q.walkin[t][l], std::max(mu, double(smallest_k_with_cdf(mu, cr))));
    }
    for (std::size_t z = 0; z < inst.num_zones(); ++z) EXPECT_GE(q.online[t][z], means.online[t][z]);
  }
}

TEST(Baselines, NearestWarehousePicksCheapestEdge) {
  const auto inst = load_instance((std::filesystem::path(BIOINV_DATA_DIR) / "simulation/instance.json").string());
  const auto near = nearest_warehouse(inst);
  ASSERT_EQ(near.size(), inst.num_zones());
  for (std::size_t z = 0; z < inst.num_zones(); ++z) {
    double best = 1e300;
    std::size_t arg = static_cast<std::size_t>(-1);
    for (const auto& e : inst.fulfillment_edges()) {
      if (e.zone != z || inst.network.kinds[e.node] != NodeKind::warehouse) continue;
      const double c = inst.econ.fulfill_cost[e.node][z];
      if (c < best || (c == best && e.node < arg)) best = c, arg = e.node;
    }
    EXPECT_EQ(near[z], arg);
  }
}

TEST(Baselines, BasestockSingleStoreOrdersUpToTarget) {
  auto inst = single_store_instance(100, 20, 40);
  DemandMeans m{{{4}}, {{}}};
  // critical ratio 0.6 on mean 4
  const double target = smallest_k_with_cdf(4, 0.6);
  EXPECT_DOUBLE_EQ(basestock_policy(inst, m).x[0][0], target);
  inst.inventory.pipeline = {{2}};
  EXPECT_DOUBLE_EQ(basestock_policy(inst, m).x[0][0], target - 2);
  inst.inventory.pipeline = {{50}};
  EXPECT_DOUBLE_EQ(basestock_policy(inst, m).x[0][0], 0);
}

TEST(Baselines, BasestockCoversOnlineThroughWarehouses) {
  const auto inst = load_instance((std::filesystem::path(BIOINV_DATA_DIR) / "simulation/instance.json").string());
  const auto means = load_means((std::filesystem::path(BIOINV_DATA_DIR) / "simulation/means.json").string());
  const auto a = basestock_policy(inst, means);
  double wh = 0;
  for (std::size_t l = 0; l < inst.num_nodes(); ++l) {
    EXPECT_GE(a.x[0][l], 0);
    if (inst.network.kinds[l] == NodeKind::warehouse) wh += a.x[0][l];
    for (std::size_t t = 1; t < inst.periods(); ++t) EXPECT_EQ(a.x[t][l], 0);
  }
  EXPECT_GT(wh, 0);
}

TEST(Baselines, PwlSingleStoreBuysQuantileOnlyWhenDiscountedMarginPays) {
  DemandMeans m{{{3}}, {{}}};
  DemandScenario q{{{7}}, {{}}};
  // 0.5 * (p + b) = 60 > 40: stock the quantile
  EXPECT_NEAR(pwl_allocation(single_store_instance(100, 20, 40), m, q).x[0][0], 7, 1e-9);
  // 0.5 * (p + b) = 30 < 40 < 60: stock the mean
  EXPECT_NEAR(pwl_allocation(single_store_instance(50, 10, 40), m, q).x[0][0], 3, 1e-9);
  // p + b < c: nothing
  EXPECT_NEAR(pwl_allocation(single_store_instance(20, 10, 40), m, q).x[0][0], 0, 1e-9);
  DemandScenario low{{{1}}, {{}}};
  EXPECT_THROW(build_pwl_baseline(single_store_instance(100, 20, 40), m, low), std::invalid_argument);
  EXPECT_THROW(build_pwl_baseline(single_store_instance(100, 20, 40), m, q, 1.5), std::invalid_argument);
}
