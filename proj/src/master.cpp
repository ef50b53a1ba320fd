#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bioinv/formulations.hpp"

namespace bioinv {

using lp::Sense;
using lp::Term;

double allocation_cap(const Instance& inst, const UncertaintySet& set, std::size_t t, std::size_t l) {
  double total = 0.0;
  for (std::size_t k = 0; k < set.periods(); ++k) total += set.walkin.budget_upper[k] + set.online.budget_upper[k];
  if (inst.rules.transport_capacity) total = std::min(total, (*inst.rules.transport_capacity)[t][l]);
  return std::max(0.0, std::floor(total + 1e-9));
}

namespace {

Matrix weighted(const Matrix& m, double k) {
  Matrix out = m;
  for (auto& row : out) {
    for (auto& v : row) v *= k;
  }
  return out;
}

// D+ variables constrained to one channel of the set.
std::vector<std::vector<std::size_t>> add_allied_demand(lp::LinearModel& m, const ChannelBounds& b, const char* tag) {
  std::vector<std::vector<std::size_t>> out(b.lower.size());
  for (std::size_t t = 0; t < b.lower.size(); ++t) {
    std::vector<Term> sum;
    for (std::size_t i = 0; i < b.lower[t].size(); ++i) {
      out[t].push_back(m.add_variable(std::string(tag) + "_" + std::to_string(t) + "_" + std::to_string(i),
                                      b.lower[t][i], b.upper[t][i]));
      sum.push_back({out[t][i], 1.0});
    }
    if (sum.empty()) continue;
    m.add_constraint(sum, Sense::greater_equal, b.budget_lower[t]);
    m.add_constraint(sum, Sense::less_equal, b.budget_upper[t]);
  }
  return out;
}

}  // namespace

MasterModel build_master(const Instance& inst, const UncertaintySet& set, const std::vector<DemandScenario>& scenarios,
                         const BioConfig& config, const Allocation* fixed) {
  check_config(config);
  check_set_matches(set, inst);
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  const auto edges = inst.fulfillment_edges();
  const auto& econ = inst.econ;
  const double lambda = config.lambda;
  const bool optimistic = lambda > 0.0;
  const bool online_allied = optimistic && config.allied == AlliedChannels::both;
  const double rho = inst.rules.service_window ? inst.rules.service_window->fraction : 0.0;

  MasterModel mm;
  auto& m = mm.model;
  auto& ix = mm.index;
  m.set_objective_sense(lp::ObjectiveSense::maximize);

  // purchases
  ix.x.assign(T, std::vector<std::size_t>(L));
  if (config.integer_allocations && !fixed) ix.x_bits.assign(T, std::vector<std::vector<std::size_t>>(L));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      const std::string nm = "x_" + std::to_string(t) + "_" + std::to_string(l);
      double lo = 0.0, hi = lp::kInfinity;
      if (inst.rules.transport_capacity) hi = (*inst.rules.transport_capacity)[t][l];
      if (fixed) lo = hi = fixed->x.at(t).at(l);
      if (config.integer_allocations && !fixed) hi = allocation_cap(inst, set, t, l);
      ix.x[t][l] = m.add_variable(nm, lo, hi);
      m.add_objective(ix.x[t][l], -econ.purchase_cost[l]);
      if (config.integer_allocations && !fixed) {
        std::vector<Term> row{{ix.x[t][l], 1.0}};
        for (double p = 1.0; p <= hi; p *= 2.0) {
          const auto z = m.add_variable(nm + "_bit" + std::to_string(ix.x_bits[t][l].size()), 0.0, 1.0, lp::VarKind::binary);
          ix.x_bits[t][l].push_back(z);
          row.push_back({z, -p});
        }
        m.add_constraint(std::move(row), Sense::equal, 0.0, nm + "_expand");
      }
    }
  }

  // node-to-node moves
  if (config.repositioning) {
    if (!econ.reposition_cost || !inst.inventory.reposition_lead) {
      throw std::invalid_argument("repositioning needs econ.reposition_cost and inventory.reposition_lead");
    }
    ix.repo.assign(T, std::vector<std::vector<std::size_t>>(L, std::vector<std::size_t>(L, kNoVar)));
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t from = 0; from < L; ++from) {
        for (std::size_t to = 0; to < L; ++to) {
          if (from == to) continue;
          double lo = 0.0, hi = lp::kInfinity;
          if (fixed) lo = hi = fixed->x_repo ? (*fixed->x_repo).at(t).at(from).at(to) : 0.0;
          const auto v = m.add_variable("r_" + std::to_string(t) + "_" + std::to_string(from) + "_" + std::to_string(to), lo, hi);
          ix.repo[t][from][to] = v;
          m.add_objective(v, -(*econ.reposition_cost)[from][to]);
        }
      }
    }
  }

  // allied demand and optimistic sales
  if (optimistic) {
    ix.d_plus = add_allied_demand(m, set.walkin, "dplus");
    ix.s_plus.assign(T, std::vector<std::size_t>(L));
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t l = 0; l < L; ++l) {
        ix.s_plus[t][l] = m.add_variable("splus_" + std::to_string(t) + "_" + std::to_string(l), 0.0, lp::kInfinity);
        m.add_constraint({{ix.s_plus[t][l], 1.0}, {ix.d_plus[t][l], -lambda}}, Sense::less_equal, 0.0);
        m.add_objective(ix.s_plus[t][l], econ.walkin_price[t][l] + econ.walkin_penalty[t][l]);
        m.add_objective(ix.d_plus[t][l], -econ.walkin_penalty[t][l] * lambda);
      }
    }
  }
  if (online_allied) {
    ix.d_plus_online = add_allied_demand(m, set.online, "doplus");
    ix.y_plus.assign(T, std::vector<std::size_t>(edges.size()));
    for (std::size_t t = 0; t < T; ++t) {
      std::vector<std::vector<Term>> by_zone(Z), by_node(L);
      std::vector<Term> window;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const auto v = m.add_variable("yplus_" + std::to_string(t) + "_" + std::to_string(e), 0.0, lp::kInfinity);
        ix.y_plus[t][e] = v;
        m.add_objective(v, econ.online_price[t] + econ.online_penalty[t] - econ.fulfill_cost[edges[e].node][edges[e].zone]);
        by_zone[edges[e].zone].push_back({v, 1.0});
        by_node[edges[e].node].push_back({v, 1.0});
        if (rho > 0.0) window.push_back({v, rho - (edges[e].days <= inst.rules.service_window->day_threshold ? 1.0 : 0.0)});
      }
      for (std::size_t z = 0; z < Z; ++z) {
        m.add_objective(ix.d_plus_online[t][z], -econ.online_penalty[t] * lambda);
        auto row = by_zone[z];
        row.push_back({ix.d_plus_online[t][z], -lambda});
        m.add_constraint(std::move(row), Sense::less_equal, 0.0);
      }
      if (inst.rules.fulfillment_capacity) {
        for (std::size_t l = 0; l < L; ++l) {
          if (!by_node[l].empty()) m.add_constraint(by_node[l], Sense::less_equal, (*inst.rules.fulfillment_capacity)[t][l]);
        }
      }
      if (!window.empty()) m.add_constraint(std::move(window), Sense::less_equal, 0.0);
    }
  }

  // stage-one terms seen by every scenario copy
  StageOneTerms st;
  st.supply.assign(T, std::vector<LinExpr>(L));
  st.cap_offset.assign(T, std::vector<LinExpr>(L));
  st.window_offset.assign(T, LinExpr{});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      auto& s = st.supply[t][l];
      s.constant = inst.scheduled_supply(t, l);
      const int lt = inst.inventory.lead_time[l];
      if (static_cast<int>(t) >= lt) s.add(ix.x[t - lt][l], 1.0);
      if (config.repositioning) {
        for (std::size_t o = 0; o < L; ++o) {
          if (o == l) continue;
          const int rl = (*inst.inventory.reposition_lead)[o][l];
          if (static_cast<int>(t) >= rl) s.add(ix.repo[t - rl][o][l], 1.0);
          s.add(ix.repo[t][l][o], -1.0);
        }
      }
      if (optimistic) s.add(ix.s_plus[t][l], -1.0);
      if (inst.rules.fulfillment_capacity) st.cap_offset[t][l].constant = (*inst.rules.fulfillment_capacity)[t][l];
    }
    if (online_allied) {
      for (std::size_t e = 0; e < edges.size(); ++e) {
        st.supply[t][edges[e].node].add(ix.y_plus[t][e], -1.0);
        st.cap_offset[t][edges[e].node].add(ix.y_plus[t][e], -1.0);
        if (rho > 0.0) {
          const bool in = edges[e].days <= inst.rules.service_window->day_threshold;
          st.window_offset[t].add(ix.y_plus[t][e], (in ? 1.0 : 0.0) - rho);
        }
      }
    }
  }

  ix.eta = kNoVar;
  if (scenarios.empty()) return mm;
  ix.eta = m.add_variable("eta", -lp::kInfinity, lp::kInfinity);
  m.add_objective(ix.eta, 1.0);
  const double kb = config.walkin_weight(), ko = config.online_weight();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& d = scenarios[i];
    if (!contains(set, d)) throw std::invalid_argument("master scenario " + std::to_string(i) + " lies outside the set");
    auto block = add_recourse(m, inst, st, weighted(d.walkin, kb), weighted(d.online, ko), "k" + std::to_string(i));
    std::vector<Term> cut{{ix.eta, 1.0}};
    for (const auto& term : block.value.terms) cut.push_back({term.var, -term.coef});
    m.add_constraint(std::move(cut), Sense::less_equal, block.value.constant + demand_penalty(inst, d, kb, ko),
                     "cut_" + std::to_string(i));
    ix.blocks.push_back(std::move(block));
  }
  return mm;
}

Allocation read_master_allocation(const MasterModel& mm, const std::vector<double>& v) {
  const auto& ix = mm.index;
  auto read = [&](const std::vector<std::vector<std::size_t>>& idx) {
    Matrix out(idx.size());
    for (std::size_t t = 0; t < idx.size(); ++t) {
      for (auto j : idx[t]) out[t].push_back(std::max(0.0, v.at(j)));
    }
    return out;
  };
  Allocation a;
  a.x = read(ix.x);
  if (!ix.x_bits.empty()) {
    for (auto& row : a.x) {
      for (auto& q : row) q = std::round(q);
    }
  }
  if (!ix.repo.empty()) {
    std::vector<Matrix> r(ix.repo.size());
    for (std::size_t t = 0; t < ix.repo.size(); ++t) {
      r[t] = zeros(ix.repo[t].size(), ix.repo[t].size());
      for (std::size_t f = 0; f < ix.repo[t].size(); ++f) {
        for (std::size_t g = 0; g < ix.repo[t][f].size(); ++g) {
          if (ix.repo[t][f][g] != kNoVar) r[t][f][g] = std::max(0.0, v.at(ix.repo[t][f][g]));
        }
      }
    }
    a.x_repo = std::move(r);
  }
  if (!ix.s_plus.empty()) {
    a.s_plus = read(ix.s_plus);
    a.d_plus = read(ix.d_plus);
  }
  if (!ix.y_plus.empty()) {
    a.y_plus = read(ix.y_plus);
    a.d_plus_online = read(ix.d_plus_online);
  }
  return a;
}

double master_stage_one_value(const MasterModel& mm, const std::vector<double>& values) {
  double v = mm.model.evaluate(values);
  if (mm.index.eta != kNoVar) v -= values.at(mm.index.eta);
  return v;
}

SaaModel build_saa_model(const Instance& inst, const std::vector<DemandScenario>& samples, const SaaSegment* segment,
                         std::size_t* lambda_var) {
  if (samples.empty()) throw std::invalid_argument("SAA needs at least one sample");
  const std::size_t T = inst.periods(), L = inst.num_nodes();
  SaaModel sm;
  auto& m = sm.model;
  m.set_objective_sense(lp::ObjectiveSense::maximize);
  std::vector<std::vector<LinExpr>> x(T, std::vector<LinExpr>(L));
  std::size_t lam = kNoVar;
  if (segment) {
    lam = m.add_variable("lambda", 0.0, 1.0);
    if (lambda_var) *lambda_var = lam;
  } else {
    sm.x.assign(T, std::vector<std::size_t>(L));
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      if (segment) {
        const double x0 = segment->x0.at(t).at(l), x1 = segment->x1.at(t).at(l);
        x[t][l].constant = x0;
        x[t][l].add(lam, x1 - x0);
      } else {
        const double hi = inst.rules.transport_capacity ? (*inst.rules.transport_capacity)[t][l] : lp::kInfinity;
        sm.x[t][l] = m.add_variable("x_" + std::to_string(t) + "_" + std::to_string(l), 0.0, hi);
        x[t][l].add(sm.x[t][l], 1.0);
      }
      m.add_objective_constant(-inst.econ.purchase_cost[l] * x[t][l].constant);
      for (const auto& term : x[t][l].terms) m.add_objective(term.var, -inst.econ.purchase_cost[l] * term.coef);
    }
  }
  StageOneTerms st;
  st.supply.assign(T, std::vector<LinExpr>(L));
  st.cap_offset.assign(T, std::vector<LinExpr>(L));
  st.window_offset.assign(T, LinExpr{});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      st.supply[t][l].constant = inst.scheduled_supply(t, l);
      const int lt = inst.inventory.lead_time[l];
      if (static_cast<int>(t) >= lt) st.supply[t][l] += x[t - lt][l];
      if (inst.rules.fulfillment_capacity) st.cap_offset[t][l].constant = (*inst.rules.fulfillment_capacity)[t][l];
    }
  }
  const double w = 1.0 / static_cast<double>(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    auto block = add_recourse(m, inst, st, samples[i].walkin, samples[i].online, "n" + std::to_string(i));
    for (const auto& term : block.value.terms) m.add_objective(term.var, w * term.coef);
    m.add_objective_constant(w * (block.value.constant + demand_penalty(inst, samples[i], 1.0, 1.0)));
  }
  return sm;
}

}  // namespace bioinv
