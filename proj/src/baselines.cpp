#include "bioinv/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bioinv {

using lp::Sense;
using lp::Term;

namespace {

void check_demand_shape(const Instance& inst, const DemandScenario& d, const char* what) {
  if (d.walkin.size() != inst.periods() || d.online.size() != inst.periods()) {
    throw std::invalid_argument(std::string(what) + " does not cover the horizon");
  }
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    if (d.walkin[t].size() != inst.num_nodes() || d.online[t].size() != inst.num_zones()) {
      throw std::invalid_argument(std::string(what) + " does not match the network");
    }
  }
}

// Mean demand of one cell summed over periods 0..span-1, repeating the last period past the horizon.
double horizon_mean(const Matrix& m, std::size_t cell, std::size_t span) {
  double s = 0.0;
  for (std::size_t k = 0; k < span; ++k) s += m[std::min(k, m.size() - 1)][cell];
  return s;
}

double inventory_position(const Instance& inst, std::size_t l) {
  double s = 0.0;
  for (double v : inst.inventory.pipeline[l]) s += v;
  return s;
}

}  // namespace

PwlModel build_pwl_baseline(const Instance& inst, const DemandMeans& mean, const DemandScenario& quantile,
                            double discount) {
  check_demand_shape(inst, mean, "mean demand");
  check_demand_shape(inst, quantile, "quantile demand");
  if (!(discount >= 0.0 && discount <= 1.0)) throw std::invalid_argument("PWL discount must lie in [0,1]");
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  const auto edges = inst.fulfillment_edges();
  const auto& econ = inst.econ;
  auto excess = [](double q, double m) {
    if (q < m - 1e-9) throw std::invalid_argument("quantile demand below the mean");
    return std::max(0.0, q - m);
  };

  PwlModel pm;
  auto& m = pm.model;
  m.set_objective_sense(lp::ObjectiveSense::maximize);
  pm.x.assign(T, std::vector<std::size_t>(L));
  std::vector<std::vector<std::size_t>> inv(T, std::vector<std::size_t>(L));
  for (std::size_t t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    for (std::size_t l = 0; l < L; ++l) {
      const double hi = inst.rules.transport_capacity ? (*inst.rules.transport_capacity)[t][l] : lp::kInfinity;
      pm.x[t][l] = m.add_variable("x_" + ts + "_" + std::to_string(l), 0.0, hi);
      m.add_objective(pm.x[t][l], -econ.purchase_cost[l]);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    std::vector<std::vector<Term>> out(L), cap(L);
    for (std::size_t l = 0; l < L; ++l) {
      const double pb = econ.walkin_price[t][l] + econ.walkin_penalty[t][l];
      const double m1 = mean.walkin[t][l], m2 = excess(quantile.walkin[t][l], m1);
      const auto s1 = m.add_variable("s1_" + ts + "_" + std::to_string(l), 0.0, m1);
      const auto s2 = m.add_variable("s2_" + ts + "_" + std::to_string(l), 0.0, m2);
      m.add_objective(s1, pb);
      m.add_objective(s2, discount * pb);
      m.add_objective_constant(-econ.walkin_penalty[t][l] * (m1 + discount * m2));
      inv[t][l] = m.add_variable("I_" + std::to_string(t + 1) + "_" + std::to_string(l), 0.0, lp::kInfinity);
      m.add_objective(inv[t][l], -econ.holding[l]);
      out[l] = {{s1, 1.0}, {s2, 1.0}, {inv[t][l], 1.0}};
    }
    std::vector<std::vector<Term>> zone1(Z), zone2(Z);
    std::vector<Term> window;
    const double rho = inst.rules.service_window ? inst.rules.service_window->fraction : 0.0;
    for (const auto& e : edges) {
      const double po = econ.online_price[t] + econ.online_penalty[t];
      const double c = econ.fulfill_cost[e.node][e.zone];
      const std::string nm = ts + "_" + std::to_string(e.node) + "_" + std::to_string(e.zone);
      const auto y1 = m.add_variable("y1_" + nm, 0.0, lp::kInfinity);
      const auto y2 = m.add_variable("y2_" + nm, 0.0, lp::kInfinity);
      m.add_objective(y1, po - c);
      m.add_objective(y2, discount * po - c);
      zone1[e.zone].push_back({y1, 1.0});
      zone2[e.zone].push_back({y2, 1.0});
      out[e.node].push_back({y1, 1.0});
      out[e.node].push_back({y2, 1.0});
      cap[e.node].push_back({y1, 1.0});
      cap[e.node].push_back({y2, 1.0});
      if (rho > 0.0) {
        const double a = e.days <= inst.rules.service_window->day_threshold ? 1.0 : 0.0;
        window.push_back({y1, rho - a});
        window.push_back({y2, rho - a});
      }
    }
    for (std::size_t z = 0; z < Z; ++z) {
      const double m1 = mean.online[t][z], m2 = excess(quantile.online[t][z], m1);
      m.add_objective_constant(-econ.online_penalty[t] * (m1 + discount * m2));
      if (!zone1[z].empty()) {
        m.add_constraint(zone1[z], Sense::less_equal, m1, "ecom1_" + ts + "_" + std::to_string(z));
        m.add_constraint(zone2[z], Sense::less_equal, m2, "ecom2_" + ts + "_" + std::to_string(z));
      }
    }
    for (std::size_t l = 0; l < L; ++l) {
      auto row = out[l];
      if (t > 0) row.push_back({inv[t - 1][l], -1.0});
      const int lt = inst.inventory.lead_time[l];
      if (static_cast<int>(t) >= lt) row.push_back({pm.x[t - lt][l], -1.0});
      m.add_constraint(std::move(row), Sense::equal, inst.scheduled_supply(t, l), "bal_" + ts + "_" + std::to_string(l));
      if (inst.rules.fulfillment_capacity && !cap[l].empty()) {
        m.add_constraint(cap[l], Sense::less_equal, (*inst.rules.fulfillment_capacity)[t][l]);
      }
    }
    if (!window.empty()) m.add_constraint(std::move(window), Sense::less_equal, 0.0, "window_" + ts);
  }
  return pm;
}

Allocation pwl_allocation(const Instance& inst, const DemandMeans& mean, const DemandScenario& quantile,
                          double discount, const lp::SolveOptions& options) {
  const auto pm = build_pwl_baseline(inst, mean, quantile, discount);
  const auto sol = lp::solve(pm.model, options);
  if (sol.status != lp::SolveStatus::optimal) {
    throw std::runtime_error(std::string("PWL baseline did not solve: ") + lp::to_string(sol.status));
  }
  Allocation a = zero_allocation(inst);
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t l = 0; l < inst.num_nodes(); ++l) a.x[t][l] = std::max(0.0, sol.values[pm.x[t][l]]);
  }
  return a;
}

double critical_ratio(double price, double cost) {
  if (!(price > 0.0)) return 0.0;
  return std::clamp((price - cost) / price, 0.0, 1.0);
}

DemandScenario critical_quantile_demand(const Instance& inst, const DemandMeans& means) {
  check_demand_shape(inst, means, "mean demand");
  DemandScenario q = means;
  double cheapest = std::numeric_limits<double>::infinity();
  for (const auto& e : inst.fulfillment_edges()) cheapest = std::min(cheapest, inst.econ.purchase_cost[e.node]);
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t l = 0; l < inst.num_nodes(); ++l) {
      const double cr = critical_ratio(inst.econ.walkin_price[t][l], inst.econ.purchase_cost[l]);
      q.walkin[t][l] = std::max(means.walkin[t][l], static_cast<double>(poisson_quantile(means.walkin[t][l], cr)));
    }
    for (std::size_t z = 0; z < inst.num_zones(); ++z) {
      const double cr = std::isfinite(cheapest) ? critical_ratio(inst.econ.online_price[t], cheapest) : 0.0;
      q.online[t][z] = std::max(means.online[t][z], static_cast<double>(poisson_quantile(means.online[t][z], cr)));
    }
  }
  return q;
}

std::vector<std::size_t> nearest_warehouse(const Instance& inst) {
  constexpr auto npos = static_cast<std::size_t>(-1);
  std::vector<std::size_t> out(inst.num_zones(), npos);
  for (const auto& e : inst.fulfillment_edges()) {
    if (inst.network.kinds[e.node] != NodeKind::warehouse) continue;
    auto& cur = out[e.zone];
    const double c = inst.econ.fulfill_cost[e.node][e.zone];
    if (cur == npos || c < inst.econ.fulfill_cost[cur][e.zone] ||
        (c == inst.econ.fulfill_cost[cur][e.zone] && e.node < cur)) {
      cur = e.node;
    }
  }
  return out;
}

Allocation basestock_policy(const Instance& inst, const DemandMeans& means) {
  check_demand_shape(inst, means, "mean demand");
  const std::size_t L = inst.num_nodes();
  const auto& econ = inst.econ;
  Allocation a = zero_allocation(inst);

  double store_excess = 0.0;
  for (std::size_t l = 0; l < L; ++l) {
    if (inst.network.kinds[l] != NodeKind::store) continue;
    const auto span = static_cast<std::size_t>(inst.inventory.lead_time[l]) + 1;
    const double cr = critical_ratio(econ.walkin_price[0][l], econ.purchase_cost[l]);
    const double target = poisson_quantile(horizon_mean(means.walkin, l, span), cr);
    const double ip = inventory_position(inst, l);
    a.x[0][l] = std::max(0.0, target - ip);
    if (std::find(inst.network.sfs_eligible.begin(), inst.network.sfs_eligible.end(), l) !=
        inst.network.sfs_eligible.end()) {
      store_excess += std::max(0.0, ip - target);
    }
  }

  const auto zone_wh = nearest_warehouse(inst);
  std::vector<std::size_t> warehouses;
  for (std::size_t l = 0; l < L; ++l) {
    if (inst.network.kinds[l] == NodeKind::warehouse) warehouses.push_back(l);
  }
  if (warehouses.empty() || inst.num_zones() == 0) return a;

  std::vector<double> own(L, 0.0), target(L, 0.0);
  double chain_mean = 0.0, chain_ip = store_excess, min_cost = std::numeric_limits<double>::infinity();
  std::size_t chain_span = 1;
  for (auto w : warehouses) {
    const auto span = static_cast<std::size_t>(inst.inventory.lead_time[w]) + 1;
    chain_span = std::max(chain_span, span);
    double mu = 0.0;
    for (std::size_t z = 0; z < inst.num_zones(); ++z) {
      if (zone_wh[z] == w) mu += horizon_mean(means.online, z, span);
    }
    const double cr = critical_ratio(econ.online_price[0], econ.purchase_cost[w]);
    target[w] = poisson_quantile(mu, cr);
    own[w] = std::max(0.0, target[w] - inventory_position(inst, w));
    chain_ip += inventory_position(inst, w);
    min_cost = std::min(min_cost, econ.purchase_cost[w]);
  }
  for (std::size_t z = 0; z < inst.num_zones(); ++z) {
    if (zone_wh[z] != static_cast<std::size_t>(-1)) chain_mean += horizon_mean(means.online, z, chain_span);
  }
  const double chain_target = poisson_quantile(chain_mean, critical_ratio(econ.online_price[0], min_cost));
  const double order = std::max(0.0, chain_target - chain_ip);
  if (order <= 0.0) return a;

  double weight_sum = 0.0;
  for (auto w : warehouses) weight_sum += own[w];
  std::vector<double> weight(L, 0.0);
  if (weight_sum > 0.0) {
    for (auto w : warehouses) weight[w] = own[w];
  } else {
    for (auto w : warehouses) weight[w] = target[w];
    weight_sum = 0.0;
    for (auto w : warehouses) weight_sum += weight[w];
    if (weight_sum <= 0.0) {
      for (auto w : warehouses) weight[w] = 1.0;
      weight_sum = static_cast<double>(warehouses.size());
    }
  }
  for (auto w : warehouses) a.x[0][w] += order * weight[w] / weight_sum;
  return a;
}

}  // namespace bioinv
