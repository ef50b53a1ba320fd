#include "bioinv/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "bioinv/baselines.hpp"
#include "bioinv/tuning.hpp"

namespace bioinv {

double lower_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of an empty sample");
  if (!(q > 0.0 && q <= 1.0)) throw std::invalid_argument("quantile level must lie in (0,1]");
  const auto n = values.size();
  auto k = static_cast<std::size_t>(std::ceil(q * static_cast<double>(n) - 1e-9));
  k = std::clamp<std::size_t>(k, 1, n) - 1;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(k), values.end());
  return values[k];
}

ProfitStats summarize_profits(std::vector<double> profits) {
  if (profits.empty()) throw std::invalid_argument("profit statistics need at least one scenario");
  ProfitStats s;
  s.count = profits.size();
  s.min = *std::min_element(profits.begin(), profits.end());
  s.max = *std::max_element(profits.begin(), profits.end());
  double sum = 0.0;
  for (double v : profits) sum += v;
  s.mean = sum / static_cast<double>(profits.size());
  s.p5 = lower_quantile(profits, 0.05);
  s.p10 = lower_quantile(profits, 0.10);
  s.median = lower_quantile(profits, 0.5);
  s.profits = std::move(profits);
  return s;
}

ProfitStats batch_evaluate(const Instance& inst, const Allocation& a, const std::vector<DemandScenario>& scenarios,
                           std::size_t threads) {
  if (scenarios.empty()) throw std::invalid_argument("batch evaluation needs at least one scenario");
  return summarize_profits(scenario_profits(inst, a, scenarios, threads));
}

std::vector<std::vector<Order>> spread_down(const std::vector<double>& weekly, Channel channel, std::size_t days,
                                            std::mt19937_64& rng) {
  if (days < 1) throw std::invalid_argument("spread-down needs at least one day");
  std::vector<std::vector<Order>> out(days);
  std::uniform_int_distribution<std::size_t> pick(0, days - 1);
  std::uniform_real_distribution<double> rank(0.0, 1.0);
  for (std::size_t cell = 0; cell < weekly.size(); ++cell) {
    if (weekly[cell] < 0.0) throw std::invalid_argument("weekly demand must be nonnegative");
    const auto units = static_cast<long long>(std::llround(weekly[cell]));
    for (long long u = 0; u < units; ++u) {
      Order o;
      o.channel = channel;
      o.cell = cell;
      o.day = pick(rng);
      o.rank = rank(rng);
      out[o.day].push_back(o);
    }
  }
  return out;
}

std::vector<std::vector<Order>> spread_down(const std::vector<double>& weekly, Channel channel, std::size_t days,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return spread_down(weekly, channel, days, rng);
}

std::vector<std::vector<Order>> interleave(const std::vector<std::vector<Order>>& a,
                                           const std::vector<std::vector<Order>>& b) {
  std::vector<std::vector<Order>> out(std::max(a.size(), b.size()));
  for (std::size_t d = 0; d < out.size(); ++d) {
    if (d < a.size()) out[d].insert(out[d].end(), a[d].begin(), a[d].end());
    if (d < b.size()) out[d].insert(out[d].end(), b[d].begin(), b[d].end());
    std::stable_sort(out[d].begin(), out[d].end(), [](const Order& x, const Order& y) { return x.rank < y.rank; });
  }
  return out;
}

std::vector<FulfillmentEvent> fulfill_order_stream(const Instance& inst, const std::vector<Order>& orders,
                                                   std::vector<double>& on_hand, const std::vector<double>& reserve) {
  if (on_hand.size() != inst.num_nodes() || reserve.size() != inst.num_nodes()) {
    throw std::invalid_argument("inventory state does not match the network");
  }
  const auto edges = inst.fulfillment_edges();
  std::vector<FulfillmentEvent> out;
  out.reserve(orders.size());
  for (const auto& o : orders) {
    FulfillmentEvent ev;
    ev.order = o;
    if (o.channel == Channel::walkin) {
      if (on_hand.at(o.cell) >= 1.0) {
        on_hand[o.cell] -= 1.0;
        ev.served = true;
        ev.node = o.cell;
      }
    } else {
      int best_tier = 3;
      double best_cost = 0.0;
      std::size_t best_node = 0;
      for (const auto& e : edges) {
        if (e.zone != o.cell || on_hand[e.node] < 1.0) continue;
        const int tier = on_hand[e.node] > reserve[e.node] ? 1 : 2;
        const double c = inst.econ.fulfill_cost[e.node][e.zone];
        if (tier < best_tier || (tier == best_tier && (c < best_cost || (c == best_cost && e.node < best_node)))) {
          best_tier = tier;
          best_cost = c;
          best_node = e.node;
        }
      }
      if (best_tier < 3) {
        on_hand[best_node] -= 1.0;
        ev.served = true;
        ev.node = best_node;
        ev.cost = best_cost;
        ev.tier = best_tier;
      }
    }
    out.push_back(ev);
  }
  return out;
}

std::string policy_label(const PolicySpec& p) {
  if (!p.label.empty()) return p.label;
  switch (p.kind) {
    case PolicyKind::basestock: return "basestock";
    case PolicyKind::pwl: return "pwl";
    case PolicyKind::bio: {
      if (p.lambda == 0.0) return "pure_ro";
      std::ostringstream s;
      s << "bio_" << p.lambda * 100.0;
      return s.str();
    }
  }
  return "?";
}

const std::vector<std::string>& kpi_fields() {
  static const std::vector<std::string> names{
      "replenish_qty",      "dc_replenish_qty",     "walkin_sales_qty",   "total_sales_qty",
      "sfs_qty",            "satisfied_revenue",    "missed_revenue",     "shipping_cost",
      "purchase_cost",      "excess_inventory_at_cost", "walkin_service_level", "ecom_service_level",
      "total_service_level", "inventory_turnover",  "penalized_profit",   "realized_profit"};
  return names;
}

std::vector<double> kpi_values(const KpiReport& k) {
  return {k.replenish_qty,        k.dc_replenish_qty,   k.walkin_sales_qty,   k.total_sales_qty,
          k.sfs_qty,              k.satisfied_revenue,  k.missed_revenue,     k.shipping_cost,
          k.purchase_cost,        k.excess_inventory_at_cost, k.walkin_service_level, k.ecom_service_level,
          k.total_service_level,  k.inventory_turnover, k.penalized_profit,   k.realized_profit};
}

KpiReport kpi_from_values(const std::vector<double>& v) {
  if (v.size() != kpi_fields().size()) throw std::invalid_argument("KPI vector has the wrong length");
  KpiReport k;
  double* f[] = {&k.replenish_qty,        &k.dc_replenish_qty,   &k.walkin_sales_qty,   &k.total_sales_qty,
                 &k.sfs_qty,              &k.satisfied_revenue,  &k.missed_revenue,     &k.shipping_cost,
                 &k.purchase_cost,        &k.excess_inventory_at_cost, &k.walkin_service_level, &k.ecom_service_level,
                 &k.total_service_level,  &k.inventory_turnover, &k.penalized_profit,   &k.realized_profit};
  for (std::size_t i = 0; i < v.size(); ++i) *f[i] = v[i];
  return k;
}

namespace {

template <class Row>
std::vector<Row> window_rows(const std::vector<Row>& rows, std::size_t first, std::size_t periods) {
  if (rows.empty()) throw std::invalid_argument("per-period data is empty");
  std::vector<Row> out;
  for (std::size_t k = 0; k < periods; ++k) out.push_back(rows[std::min(first + k, rows.size() - 1)]);
  return out;
}

}  // namespace

Instance planning_instance(const Instance& base, std::size_t periods, std::size_t first, const std::vector<double>& on_hand,
                           const Matrix& in_transit) {
  if (periods < 1) throw std::invalid_argument("planning horizon must be at least one period");
  const std::size_t L = base.num_nodes();
  if (on_hand.size() != L || in_transit.size() != L) throw std::invalid_argument("inventory state does not match the network");
  Instance p = base;
  p.horizon = static_cast<int>(periods);
  p.econ.walkin_price = window_rows(base.econ.walkin_price, first, periods);
  p.econ.walkin_penalty = window_rows(base.econ.walkin_penalty, first, periods);
  p.econ.online_price = window_rows(base.econ.online_price, first, periods);
  p.econ.online_penalty = window_rows(base.econ.online_penalty, first, periods);
  if (base.rules.transport_capacity) p.rules.transport_capacity = window_rows(*base.rules.transport_capacity, first, periods);
  if (base.rules.fulfillment_capacity) {
    p.rules.fulfillment_capacity = window_rows(*base.rules.fulfillment_capacity, first, periods);
  }
  for (std::size_t l = 0; l < L; ++l) {
    const auto lt = static_cast<std::size_t>(base.inventory.lead_time[l]);
    std::vector<double> row(lt + 1, 0.0);
    row[0] = on_hand[l];
    for (std::size_t k = 1; k < in_transit[l].size(); ++k) {
      // arrives k periods ahead, i.e. in planning period k
      if (in_transit[l][k] == 0.0) continue;
      if (k + 1 > lt) throw std::invalid_argument("in-transit stock beyond the lead time");
      row[k + 1] = in_transit[l][k];
    }
    p.inventory.pipeline[l] = std::move(row);
  }
  return p;
}

DemandMeans window_means(const DemandMeans& means, std::size_t first, std::size_t periods) {
  DemandMeans out;
  out.walkin = window_rows(means.walkin, first, periods);
  out.online = window_rows(means.online, first, periods);
  return out;
}

Allocation plan_policy(const Instance& planning, const DemandMeans& means, const PolicySpec& policy) {
  switch (policy.kind) {
    case PolicyKind::basestock: return basestock_policy(planning, means);
    case PolicyKind::pwl:
      return pwl_allocation(planning, means, critical_quantile_demand(planning, means), policy.pwl_discount);
    case PolicyKind::bio: {
      BioConfig cfg = policy.config;
      cfg.lambda = policy.lambda;
      const auto set = quantile_bounds_from_means(means);
      return solve_two_stage(planning, set, cfg, policy.ccg).allocation;
    }
  }
  throw std::invalid_argument("unknown policy kind");
}

ReplicationResult simulate_replication(const Instance& base, const DemandMeans& means, const PolicySpec& policy,
                                       const SimulationOptions& o, std::uint64_t seed) {
  const std::size_t L = base.num_nodes(), Z = base.num_zones();
  std::size_t max_lead = 0;
  for (int lt : base.inventory.lead_time) max_lead = std::max(max_lead, static_cast<std::size_t>(lt));
  if (o.weeks < max_lead + 1) throw std::invalid_argument("simulation needs at least lead time + 1 weeks");
  if (o.days < 1) throw std::invalid_argument("a week needs at least one day");
  const auto& econ = base.econ;
  std::mt19937_64 rng(seed);

  ReplicationResult rr;
  KpiReport& k = rr.kpi;
  std::vector<double> on_hand(L);
  for (std::size_t l = 0; l < L; ++l) on_hand[l] = base.pipeline_at(l, 0);
  // arrivals[l][w]: units reaching node l at the start of week w
  Matrix arrivals(L, std::vector<double>(o.weeks + max_lead + 1, 0.0));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t j = 1; j < base.inventory.pipeline[l].size(); ++j) {
      if (j - 1 < arrivals[l].size()) arrivals[l][j - 1] += base.inventory.pipeline[l][j];
    }
  }
  double walkin_demand = 0.0, ecom_demand = 0.0, ecom_sales = 0.0, stock_days = 0.0;
  std::size_t day_count = 0;

  for (std::size_t w = 0; w < o.weeks; ++w) {
    const std::size_t per = std::min(w, econ.walkin_price.size() - 1);
    const std::size_t mper = std::min(w, means.walkin.size() - 1);
    std::vector<double> week_in(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) {
      week_in[l] = arrivals[l][w];
      on_hand[l] += arrivals[l][w];
    }

    Matrix in_transit(L);
    for (std::size_t l = 0; l < L; ++l) {
      const auto lt = static_cast<std::size_t>(base.inventory.lead_time[l]);
      in_transit[l].assign(lt + 1, 0.0);
      for (std::size_t kk = 1; kk < lt; ++kk) in_transit[l][kk] = arrivals[l][w + kk];
    }
    Allocation plan;
    bool planned = false;
    try {
      const auto planning = planning_instance(base, policy.horizon, w, on_hand, in_transit);
      plan = plan_policy(planning, window_means(means, w, policy.horizon), policy);
      planned = true;
    } catch (const std::exception& e) {
      rr.failures.push_back("week " + std::to_string(w) + ": " + e.what());
    }
    if (planned) {
      for (std::size_t l = 0; l < L; ++l) {
        const double q = std::floor(std::max(0.0, plan.x[0][l]) + 0.5);
        const std::size_t due = w + static_cast<std::size_t>(base.inventory.lead_time[l]);
        if (q <= 0.0 || due >= o.weeks) continue;  // stock landing after the run is never bought
        arrivals[l][due] += q;
        if (due == w) {
          on_hand[l] += q;
          week_in[l] += q;
        }
        k.replenish_qty += q;
        if (base.network.kinds[l] == NodeKind::warehouse) k.dc_replenish_qty += q;
        k.purchase_cost += econ.purchase_cost[l] * q;
      }
    }

    std::vector<double> walk(L), online(Z);
    for (std::size_t l = 0; l < L; ++l) {
      std::poisson_distribution<long long> d(means.walkin[mper][l]);
      walk[l] = means.walkin[mper][l] > 0.0 ? static_cast<double>(d(rng)) : 0.0;
    }
    for (std::size_t z = 0; z < Z; ++z) {
      std::poisson_distribution<long long> d(means.online[mper][z]);
      online[z] = means.online[mper][z] > 0.0 ? static_cast<double>(d(rng)) : 0.0;
    }
    const auto w_orders = spread_down(walk, Channel::walkin, o.days, rng);
    const auto o_orders = spread_down(online, Channel::online, o.days, rng);
    const auto days = interleave(w_orders, o_orders);

    for (std::size_t d = 0; d < o.days; ++d) {
      std::vector<double> reserve(L);
      const double left = static_cast<double>(o.days - d);
      for (std::size_t l = 0; l < L; ++l) reserve[l] = means.walkin[mper][l] / static_cast<double>(o.days) * left;
      const auto start = on_hand;
      const auto events = fulfill_order_stream(base, days[d], on_hand, reserve);
      std::vector<double> sold(L, 0.0), shipped(L, 0.0);
      for (const auto& ev : events) {
        if (ev.order.channel == Channel::walkin) {
          const auto l = ev.order.cell;
          walkin_demand += 1.0;
          if (ev.served) {
            sold[l] += 1.0;
            k.walkin_sales_qty += 1.0;
            k.satisfied_revenue += econ.walkin_price[per][l];
          } else {
            rr.walkin_lost += 1.0;
            k.missed_revenue += econ.walkin_price[per][l];
            rr.lost_penalty += econ.walkin_penalty[per][l];
          }
        } else {
          ecom_demand += 1.0;
          if (ev.served) {
            shipped[ev.node] += 1.0;
            ecom_sales += 1.0;
            k.satisfied_revenue += econ.online_price[per];
            k.shipping_cost += ev.cost;
            if (base.network.kinds[ev.node] == NodeKind::store) k.sfs_qty += 1.0;
          } else {
            rr.ecom_lost += 1.0;
            k.missed_revenue += econ.online_price[per];
            rr.lost_penalty += econ.online_penalty[per];
          }
        }
      }
      double total = 0.0;
      for (std::size_t l = 0; l < L; ++l) {
        total += on_hand[l];
        if (o.keep_ledger) {
          rr.ledger.push_back({w, d, l, start[l], d == 0 ? week_in[l] : 0.0, sold[l], shipped[l], on_hand[l]});
        }
      }
      if (o.keep_ledger && d == 0) {
        // arrivals were booked before the first order; restate the day's opening stock
        for (std::size_t l = 0; l < L; ++l) rr.ledger[rr.ledger.size() - L + l].start -= week_in[l];
      }
      stock_days += total;
      ++day_count;
    }
  }

  k.total_sales_qty = k.walkin_sales_qty + ecom_sales;
  k.walkin_service_level = walkin_demand > 0.0 ? k.walkin_sales_qty / walkin_demand : 1.0;
  k.ecom_service_level = ecom_demand > 0.0 ? ecom_sales / ecom_demand : 1.0;
  k.total_service_level = walkin_demand + ecom_demand > 0.0 ? k.total_sales_qty / (walkin_demand + ecom_demand) : 1.0;
  const double avg_stock = day_count ? stock_days / static_cast<double>(day_count) : 0.0;
  k.inventory_turnover = avg_stock > 0.0 ? k.total_sales_qty / avg_stock : 0.0;
  for (std::size_t l = 0; l < L; ++l) k.excess_inventory_at_cost += econ.purchase_cost[l] * on_hand[l];
  k.realized_profit = k.satisfied_revenue - k.shipping_cost - k.purchase_cost;
  if (o.credit_excess) k.realized_profit += k.excess_inventory_at_cost;
  k.penalized_profit = k.realized_profit - rr.lost_penalty;
  return rr;
}

SimulationSummary run_rolling_horizon(const Instance& base, const DemandMeans& means, const PolicySpec& policy,
                                      const SimulationOptions& o) {
  if (o.replications < 1) throw std::invalid_argument("simulation needs at least one replication");
  if (!(policy.lambda >= 0.0 && policy.lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0,1]");
  SimulationSummary s;
  s.policy = policy_label(policy);
  s.replications.resize(o.replications);
  auto seed_of = [&](std::size_t r) {
    std::seed_seq seq{static_cast<std::uint32_t>(o.seed), static_cast<std::uint32_t>(o.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    std::uint32_t parts[2];
    seq.generate(parts, parts + 2);
    return (static_cast<std::uint64_t>(parts[0]) << 32) | parts[1];
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(o.threads, o.replications));
  std::vector<std::exception_ptr> errors(threads);
  auto work = [&](std::size_t wkr) {
    try {
      for (std::size_t r = wkr; r < o.replications; r += threads) {
        s.replications[r] = simulate_replication(base, means, policy, o, seed_of(r));
      }
    } catch (...) {
      errors[wkr] = std::current_exception();
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(work, t);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  const std::size_t F = kpi_fields().size();
  const auto n = static_cast<double>(o.replications);
  std::vector<double> mean(F, 0.0), se(F, 0.0);
  for (const auto& r : s.replications) {
    const auto v = kpi_values(r.kpi);
    for (std::size_t i = 0; i < F; ++i) mean[i] += v[i] / n;
  }
  if (o.replications > 1) {
    for (const auto& r : s.replications) {
      const auto v = kpi_values(r.kpi);
      for (std::size_t i = 0; i < F; ++i) se[i] += (v[i] - mean[i]) * (v[i] - mean[i]);
    }
    for (auto& x : se) x = std::sqrt(x / (n - 1.0) / n);
  }
  s.mean = kpi_from_values(mean);
  s.std_error = kpi_from_values(se);
  return s;
}

}  // namespace bioinv
