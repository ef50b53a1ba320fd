#pragma once

#include <cstddef>
#include <vector>

#include "bioinv/formulations.hpp"

namespace bioinv {

struct PwlModel {
  lp::LinearModel model;
  std::vector<std::vector<std::size_t>> x;  // [t][l]
};

/// Deterministic network LP with two demand classes per cell: the mean, and the
/// excess up to `quantile`.  The excess class earns `discount` times the price
/// and penalty.
PwlModel build_pwl_baseline(const Instance& instance, const DemandMeans& mean, const DemandScenario& quantile,
                            double discount = 0.5);

Allocation pwl_allocation(const Instance& instance, const DemandMeans& mean, const DemandScenario& quantile,
                          double discount = 0.5, const lp::SolveOptions& options = {});

/// Poisson quantile of every cell at its critical ratio (p − C)/p.  Online
/// cells use the cheapest eligible node's purchase cost.
DemandScenario critical_quantile_demand(const Instance& instance, const DemandMeans& means);

/// Critical ratio (p − C)/p clamped to [0,1]; 0 when the price is 0.
double critical_ratio(double price, double cost);

/// Zone → warehouse with the lowest fulfilment cost among eligible warehouses
/// (ties by node order); npos when the zone has no warehouse edge.
std::vector<std::size_t> nearest_warehouse(const Instance& instance);

/// Order-up-to policy: orders placed in period 0 only.  Stores cover walk-in
/// demand over lead time plus one period; warehouses jointly cover online
/// demand, crediting store stock above the store targets, and split the chain
/// order in proportion to their own order-up-to shortfalls.
Allocation basestock_policy(const Instance& instance, const DemandMeans& means);

}  // namespace bioinv
