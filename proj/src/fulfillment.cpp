#include <cmath>
#include <stdexcept>

#include "bioinv/formulations.hpp"

namespace bioinv {

using lp::Sense;
using lp::Term;

void check_config(const BioConfig& config) {
  if (!(config.lambda >= 0.0 && config.lambda <= 1.0)) {
    throw std::invalid_argument("lambda must lie in [0,1], got " + std::to_string(config.lambda));
  }
}

Allocation zero_allocation(const Instance& inst) {
  Allocation a;
  a.x = zeros(inst.periods(), inst.num_nodes());
  return a;
}

double stage_one_cost(const Instance& inst, const Allocation& a) {
  double cost = 0.0;
  for (std::size_t t = 0; t < a.x.size(); ++t) {
    for (std::size_t l = 0; l < a.x[t].size(); ++l) cost += inst.econ.purchase_cost[l] * a.x[t][l];
  }
  if (a.x_repo) {
    if (!inst.econ.reposition_cost) throw std::invalid_argument("repositioning flows without reposition_cost");
    const auto& rc = *inst.econ.reposition_cost;
    for (const auto& period : *a.x_repo) {
      for (std::size_t from = 0; from < period.size(); ++from) {
        for (std::size_t to = 0; to < period[from].size(); ++to) cost += rc[from][to] * period[from][to];
      }
    }
  }
  return cost;
}

LinExpr& LinExpr::operator+=(const LinExpr& o) {
  constant += o.constant;
  terms.insert(terms.end(), o.terms.begin(), o.terms.end());
  return *this;
}

double LinExpr::value(const std::vector<double>& values) const {
  double v = constant;
  for (const auto& t : terms) v += t.coef * values.at(t.var);
  return v;
}

namespace {

void check_allocation_shape(const Instance& inst, const Allocation& a) {
  const std::size_t T = inst.periods(), L = inst.num_nodes();
  auto shape = [&](const Matrix& m, std::size_t cols, const char* name) {
    if (m.size() != T) throw std::invalid_argument(std::string("allocation.") + name + " does not cover the horizon");
    for (const auto& row : m) {
      if (row.size() != cols) throw std::invalid_argument(std::string("allocation.") + name + " has the wrong width");
      for (double v : row) {
        if (v < -1e-9) throw std::invalid_argument(std::string("allocation.") + name + " has a negative entry");
      }
    }
  };
  shape(a.x, L, "x");
  if (a.s_plus) shape(*a.s_plus, L, "s_plus");
  if (a.d_plus) shape(*a.d_plus, L, "d_plus");
  if (a.y_plus) shape(*a.y_plus, inst.fulfillment_edges().size(), "y_plus");
  if (a.d_plus_online) shape(*a.d_plus_online, inst.num_zones(), "d_plus_online");
  if (a.x_repo) {
    if (a.x_repo->size() != T) throw std::invalid_argument("allocation.x_repo does not cover the horizon");
    for (const auto& m : *a.x_repo) {
      if (m.size() != L) throw std::invalid_argument("allocation.x_repo has the wrong shape");
      for (const auto& row : m) {
        if (row.size() != L) throw std::invalid_argument("allocation.x_repo has the wrong shape");
      }
    }
  }
}

bool in_window(const Instance& inst, const ShipEdge& e) {
  return e.days <= inst.rules.service_window->day_threshold;
}

bool window_active(const Instance& inst) {
  return inst.rules.service_window && inst.rules.service_window->fraction > 0.0;
}

}  // namespace

StageOneTerms fixed_stage_one(const Instance& inst, const Allocation& a) {
  check_allocation_shape(inst, a);
  const std::size_t T = inst.periods(), L = inst.num_nodes();
  const auto edges = inst.fulfillment_edges();
  StageOneTerms st;
  st.supply.assign(T, std::vector<LinExpr>(L));
  st.cap_offset.assign(T, std::vector<LinExpr>(L));
  st.window_offset.assign(T, LinExpr{});
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      double v = inst.scheduled_supply(t, l);
      const int lt = inst.inventory.lead_time[l];
      if (static_cast<int>(t) >= lt) v += a.x[t - lt][l];
      if (a.x_repo) {
        for (std::size_t from = 0; from < L; ++from) {
          if (from == l) continue;
          const int rl = (*inst.inventory.reposition_lead)[from][l];
          if (static_cast<int>(t) >= rl) v += (*a.x_repo)[t - rl][from][l];
          v -= (*a.x_repo)[t][l][from];
        }
      }
      if (a.s_plus) v -= (*a.s_plus)[t][l];
      st.supply[t][l].constant = v;
      if (inst.rules.fulfillment_capacity) st.cap_offset[t][l].constant = (*inst.rules.fulfillment_capacity)[t][l];
    }
    if (a.y_plus) {
      const double rho = inst.rules.service_window ? inst.rules.service_window->fraction : 0.0;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        const double q = (*a.y_plus)[t][e];
        st.supply[t][edges[e].node].constant -= q;
        st.cap_offset[t][edges[e].node].constant -= q;
        if (window_active(inst)) st.window_offset[t].constant += (in_window(inst, edges[e]) ? q : 0.0) - rho * q;
      }
    }
  }
  return st;
}

RecourseBlock add_recourse(lp::LinearModel& m, const Instance& inst, const StageOneTerms& st,
                           const Matrix& walkin_cap, const Matrix& online_cap, const std::string& tag) {
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  const auto edges = inst.fulfillment_edges();
  const auto& econ = inst.econ;
  RecourseBlock b;
  b.s.assign(T, std::vector<std::size_t>(L));
  b.y.assign(T, std::vector<std::size_t>(edges.size()));
  b.inventory.assign(T, std::vector<std::size_t>(L));
  const std::string sfx = tag.empty() ? "" : "_" + tag;
  for (std::size_t t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    for (std::size_t l = 0; l < L; ++l) {
      b.s[t][l] = m.add_variable("s" + sfx + "_" + ts + "_" + std::to_string(l), 0.0, std::max(0.0, walkin_cap[t][l]));
      b.value.add(b.s[t][l], econ.walkin_price[t][l] + econ.walkin_penalty[t][l]);
      b.inventory[t][l] = m.add_variable("I" + sfx + "_" + std::to_string(t + 1) + "_" + std::to_string(l), 0.0, lp::kInfinity);
      b.value.add(b.inventory[t][l], -econ.holding[l]);
    }
    for (std::size_t e = 0; e < edges.size(); ++e) {
      b.y[t][e] = m.add_variable("y" + sfx + "_" + ts + "_" + std::to_string(edges[e].node) + "_" +
                                     std::to_string(edges[e].zone), 0.0, lp::kInfinity);
      b.value.add(b.y[t][e], econ.online_price[t] + econ.online_penalty[t] - econ.fulfill_cost[edges[e].node][edges[e].zone]);
    }
    std::vector<std::vector<Term>> by_zone(Z), by_node(L);
    for (std::size_t e = 0; e < edges.size(); ++e) {
      by_zone[edges[e].zone].push_back({b.y[t][e], 1.0});
      by_node[edges[e].node].push_back({b.y[t][e], 1.0});
    }
    for (std::size_t z = 0; z < Z; ++z) {
      if (by_zone[z].empty()) continue;
      m.add_constraint(by_zone[z], Sense::less_equal, std::max(0.0, online_cap[t][z]), "ecom" + sfx + "_" + ts + "_" + std::to_string(z));
    }
    for (std::size_t l = 0; l < L; ++l) {
      std::vector<Term> row{{b.s[t][l], 1.0}, {b.inventory[t][l], 1.0}};
      row.insert(row.end(), by_node[l].begin(), by_node[l].end());
      if (t > 0) row.push_back({b.inventory[t - 1][l], -1.0});
      for (const auto& term : st.supply[t][l].terms) row.push_back({term.var, -term.coef});
      m.add_constraint(std::move(row), Sense::equal, st.supply[t][l].constant, "bal" + sfx + "_" + ts + "_" + std::to_string(l));
      if (inst.rules.fulfillment_capacity && !by_node[l].empty()) {
        std::vector<Term> cap = by_node[l];
        for (const auto& term : st.cap_offset[t][l].terms) cap.push_back({term.var, -term.coef});
        m.add_constraint(std::move(cap), Sense::less_equal, st.cap_offset[t][l].constant, "fcap" + sfx + "_" + ts + "_" + std::to_string(l));
      }
    }
    if (window_active(inst) && !edges.empty()) {
      const double rho = inst.rules.service_window->fraction;
      std::vector<Term> row;
      for (std::size_t e = 0; e < edges.size(); ++e) row.push_back({b.y[t][e], rho - (in_window(inst, edges[e]) ? 1.0 : 0.0)});
      for (const auto& term : st.window_offset[t].terms) row.push_back({term.var, -term.coef});
      m.add_constraint(std::move(row), Sense::less_equal, st.window_offset[t].constant, "window" + sfx + "_" + ts);
    }
  }
  return b;
}

double demand_penalty(const Instance& inst, const DemandScenario& d, double kb, double ko) {
  double v = 0.0;
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t l = 0; l < inst.num_nodes(); ++l) v -= inst.econ.walkin_penalty[t][l] * kb * d.walkin[t][l];
    for (std::size_t z = 0; z < inst.num_zones(); ++z) v -= inst.econ.online_penalty[t] * ko * d.online[t][z];
  }
  return v;
}

namespace {

void check_scenario_shape(const Instance& inst, const DemandScenario& d) {
  const std::size_t T = inst.periods();
  if (d.walkin.size() != T || d.online.size() != T) throw std::invalid_argument("scenario does not cover the horizon");
  for (std::size_t t = 0; t < T; ++t) {
    if (d.walkin[t].size() != inst.num_nodes() || d.online[t].size() != inst.num_zones()) {
      throw std::invalid_argument("scenario does not match the network");
    }
  }
}

Matrix scaled(const Matrix& m, double k) {
  Matrix out = m;
  for (auto& row : out) {
    for (auto& v : row) v *= k;
  }
  return out;
}

Allocation realised_part(const Allocation& a) {
  Allocation r;
  r.x = a.x;
  r.x_repo = a.x_repo;
  return r;
}

}  // namespace

FulfillmentModel build_fulfillment_model(const Instance& inst, const Allocation& a, const DemandScenario& d) {
  check_scenario_shape(inst, d);
  FulfillmentModel fm;
  const Allocation r = realised_part(a);
  fm.block = add_recourse(fm.model, inst, fixed_stage_one(inst, r), d.walkin, d.online, "");
  fm.model.set_objective_sense(lp::ObjectiveSense::maximize);
  for (const auto& term : fm.block.value.terms) fm.model.add_objective(term.var, term.coef);
  fm.model.add_objective_constant(demand_penalty(inst, d, 1.0, 1.0) - stage_one_cost(inst, r));
  return fm;
}

FulfillmentPlan evaluate_allocation(const Instance& inst, const Allocation& a, const DemandScenario& d,
                                    const lp::SolveOptions& options) {
  const auto fm = build_fulfillment_model(inst, a, d);
  const auto sol = lp::solve(fm.model, options);
  if (sol.status != lp::SolveStatus::optimal) {
    throw std::runtime_error(std::string("fulfilment LP did not solve: ") + lp::to_string(sol.status));
  }
  FulfillmentPlan plan;
  const std::size_t T = inst.periods(), L = inst.num_nodes();
  plan.s = zeros(T, L);
  plan.inventory = zeros(T, L);
  plan.y = zeros(T, fm.block.y.empty() ? 0 : fm.block.y[0].size());
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      plan.s[t][l] = sol.values[fm.block.s[t][l]];
      plan.inventory[t][l] = sol.values[fm.block.inventory[t][l]];
    }
    for (std::size_t e = 0; e < fm.block.y[t].size(); ++e) plan.y[t][e] = sol.values[fm.block.y[t][e]];
  }
  plan.profit = sol.objective;
  return plan;
}

double subproblem_value_at(const Instance& inst, const Allocation& a, const DemandScenario& d,
                           const BioConfig& config, const lp::SolveOptions& options) {
  check_scenario_shape(inst, d);
  const double kb = config.walkin_weight(), ko = config.online_weight();
  lp::LinearModel m;
  const auto block = add_recourse(m, inst, fixed_stage_one(inst, a), scaled(d.walkin, kb), scaled(d.online, ko), "");
  m.set_objective_sense(lp::ObjectiveSense::maximize);
  for (const auto& term : block.value.terms) m.add_objective(term.var, term.coef);
  const auto sol = lp::solve(m, options);
  if (sol.status != lp::SolveStatus::optimal) {
    throw std::runtime_error(std::string("recourse LP did not solve: ") + lp::to_string(sol.status));
  }
  return sol.objective + demand_penalty(inst, d, kb, ko);
}

}  // namespace bioinv
