#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bioinv/ccg.hpp"

namespace bioinv {

struct ProfitStats {
  std::size_t count = 0;
  double min = 0.0;
  double p5 = 0.0;
  double p10 = 0.0;
  double median = 0.0;
  double mean = 0.0;
  double max = 0.0;
  std::vector<double> profits;  // per scenario, input order
};

/// Smallest sample value v with empirical CDF(v) >= q.
double lower_quantile(std::vector<double> values, double q);

ProfitStats summarize_profits(std::vector<double> profits);

ProfitStats batch_evaluate(const Instance& instance, const Allocation& allocation,
                           const std::vector<DemandScenario>& scenarios, std::size_t threads = 1);

struct Order {
  Channel channel = Channel::walkin;
  std::size_t cell = 0;  // node for walk-in, zone for online
  std::size_t day = 0;
  double rank = 0.0;  // arrival position within the day
};

/// Multinomial split of each cell's weekly units over `days` equally likely
/// days; one single-unit order per unit.  Result is indexed by day, orders in
/// generation order.
std::vector<std::vector<Order>> spread_down(const std::vector<double>& weekly, Channel channel, std::size_t days,
                                            std::mt19937_64& rng);
std::vector<std::vector<Order>> spread_down(const std::vector<double>& weekly, Channel channel, std::size_t days,
                                            std::uint64_t seed);

/// Merges per-day order lists and sorts each day by arrival rank.
std::vector<std::vector<Order>> interleave(const std::vector<std::vector<Order>>& a,
                                           const std::vector<std::vector<Order>>& b);

struct FulfillmentEvent {
  Order order;
  bool served = false;
  std::size_t node = 0;  // shipping or selling node when served
  double cost = 0.0;     // fulfilment cost for online orders
  int tier = 0;          // 1 above reserve, 2 at or below reserve, 0 for walk-in or lost
};

/// Serves one day's orders in sequence.  Walk-in orders take local stock.
/// Online orders ship from the cheapest eligible node of the best non-empty
/// tier: tier 1 holds nodes whose stock exceeds their reserve, tier 2 the
/// rest with stock left.  `on_hand` is updated in place.
std::vector<FulfillmentEvent> fulfill_order_stream(const Instance& instance, const std::vector<Order>& orders,
                                                   std::vector<double>& on_hand, const std::vector<double>& reserve);

enum class PolicyKind { basestock, pwl, bio };

/// CCG settings for weekly re-planning: alternating heuristic subproblem under
/// the usual iteration and time safeguards.
inline CcgOptions policy_ccg_defaults() {
  CcgOptions o;
  o.subproblem_mode = SubproblemMode::alternating_heuristic;
  return o;
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::bio;
  double lambda = 0.0;
  std::size_t horizon = 2;  // look-ahead periods (weeks)
  double pwl_discount = 0.5;
  BioConfig config;   // λ taken from `lambda`
  CcgOptions ccg = policy_ccg_defaults();
  std::string label;  // report name; derived from kind and λ when empty
};

std::string policy_label(const PolicySpec& policy);

struct KpiReport {
  double replenish_qty = 0.0;
  double dc_replenish_qty = 0.0;
  double walkin_sales_qty = 0.0;
  double total_sales_qty = 0.0;
  double sfs_qty = 0.0;
  double satisfied_revenue = 0.0;
  double missed_revenue = 0.0;
  double shipping_cost = 0.0;
  double purchase_cost = 0.0;
  double excess_inventory_at_cost = 0.0;
  double walkin_service_level = 1.0;
  double ecom_service_level = 1.0;
  double total_service_level = 1.0;
  double inventory_turnover = 0.0;
  double penalized_profit = 0.0;
  double realized_profit = 0.0;
};

/// Field names in ledger column order.
const std::vector<std::string>& kpi_fields();
std::vector<double> kpi_values(const KpiReport& k);
KpiReport kpi_from_values(const std::vector<double>& v);

/// One node-day of the inventory ledger.
struct LedgerRow {
  std::size_t week = 0;
  std::size_t day = 0;
  std::size_t node = 0;
  double start = 0.0;
  double arrivals = 0.0;
  double walkin_sales = 0.0;
  double shipments = 0.0;
  double end = 0.0;
};

struct ReplicationResult {
  KpiReport kpi;
  double walkin_lost = 0.0;
  double ecom_lost = 0.0;
  double lost_penalty = 0.0;  // Σ b · lost units
  std::vector<LedgerRow> ledger;
  std::vector<std::string> failures;  // policy solve failures, "week N: reason"
};

struct SimulationOptions {
  std::size_t weeks = 3;
  std::size_t replications = 30;
  std::uint64_t seed = 1;
  std::size_t days = 7;
  bool credit_excess = false;  // add leftover stock at cost to realized profit
  bool keep_ledger = false;
  std::size_t threads = 1;
};

struct SimulationSummary {
  std::string policy;
  KpiReport mean;
  KpiReport std_error;  // standard error of the mean
  std::vector<ReplicationResult> replications;
};

/// Weekly planning instance: horizon `periods`, on-hand and in-transit stock as pipeline.
Instance planning_instance(const Instance& base, std::size_t periods, std::size_t first_period,
                           const std::vector<double>& on_hand, const Matrix& in_transit);

/// Demand means for `periods` periods starting at `first`, repeating the last one.
DemandMeans window_means(const DemandMeans& means, std::size_t first, std::size_t periods);

/// Stage-one decisions of one policy solve.
Allocation plan_policy(const Instance& planning, const DemandMeans& means, const PolicySpec& policy);

/// One seeded replication.  `means` are weekly means per base period.
ReplicationResult simulate_replication(const Instance& base, const DemandMeans& means, const PolicySpec& policy,
                                       const SimulationOptions& options, std::uint64_t seed);

SimulationSummary run_rolling_horizon(const Instance& base, const DemandMeans& means, const PolicySpec& policy,
                                      const SimulationOptions& options);

}  // namespace bioinv
