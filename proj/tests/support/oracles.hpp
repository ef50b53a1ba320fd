#pragma once

// Reference computations that share no code with the library's model builders.

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "bioinv/instance.hpp"
#include "bioinv/uncertainty.hpp"

namespace oracle {

using bioinv::DemandScenario;
using bioinv::Instance;
using bioinv::Matrix;
using bioinv::UncertaintySet;

/// Units that become available at [t][l]: on-hand at t = 0, in-transit stock,
/// and x[t'][l] landing at t' + lead.
Matrix arrivals(const Instance& inst, const Matrix& x);

/// Best recourse value Σ(p+b)s + Σ(p^o+b^o−c)y − Σh·I as a min-cost flow.
/// Only valid without business rules.
double recourse_flow(const Instance& inst, const Matrix& supply, const Matrix& walkin_cap, const Matrix& online_cap);

/// Revenue minus penalties, holding, fulfilment and purchase cost.
double realized_profit(const Instance& inst, const Matrix& x, const DemandScenario& d);

/// Adversarial objective at a fixed demand: weighted caps, weighted penalty,
/// supply reduced by `committed` (optimistic sales already promised).
double subproblem_value(const Instance& inst, const Matrix& x, const Matrix* committed, const DemandScenario& d,
                        double lambda);

/// All integral points of the set, nested loops per channel-period.
std::vector<DemandScenario> all_scenarios(const UncertaintySet& set);

/// Poisson pmf and cdf by direct summation.
double poisson_pmf(double mean, long k);
double poisson_cdf(double mean, long k);

struct RandomShape {
  std::size_t max_stores = 3;
  std::size_t max_warehouses = 1;
  std::size_t max_zones = 2;
  std::size_t max_periods = 2;
  long max_bound = 5;
  bool zero_inventory = true;
};

Instance random_instance(std::mt19937_64& rng, const RandomShape& shape);
UncertaintySet random_set(std::mt19937_64& rng, const Instance& inst, long max_bound);

/// Integer points of [0, cap]^(T·L), row-major.
std::vector<Matrix> allocation_grid(std::size_t periods, std::size_t nodes, long cap);

}  // namespace oracle
