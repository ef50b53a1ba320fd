#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bioinv/formulations.hpp"

namespace bioinv {

using lp::Sense;
using lp::Term;

namespace {

double window_fraction(const Instance& inst) {
  return inst.rules.service_window ? inst.rules.service_window->fraction : 0.0;
}

// Variables α, β, γ (μ, ν) and the dual feasibility rows shared by the MIP and the fixed-demand LP.
DualIndex add_dual_block(lp::LinearModel& m, const Instance& inst, const StageOneTerms& st) {
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  const auto edges = inst.fulfillment_edges();
  const auto& econ = inst.econ;
  const bool cap = inst.rules.fulfillment_capacity.has_value();
  const double rho = window_fraction(inst);
  const bool window = rho > 0.0 && !edges.empty();
  DualIndex d;
  d.alpha.assign(T, std::vector<std::size_t>(L));
  d.beta.assign(T, std::vector<std::size_t>(Z));
  d.gamma.assign(T, std::vector<std::size_t>(L));
  if (cap) d.mu.assign(T, std::vector<std::size_t>(L));
  for (std::size_t t = 0; t < T; ++t) {
    const std::string ts = std::to_string(t);
    for (std::size_t l = 0; l < L; ++l) {
      d.alpha[t][l] = m.add_variable("alpha_" + ts + "_" + std::to_string(l), 0.0, lp::kInfinity);
      d.gamma[t][l] = m.add_variable("gamma_" + ts + "_" + std::to_string(l), -lp::kInfinity, lp::kInfinity);
      m.add_objective(d.gamma[t][l], st.supply[t][l].constant);
      if (cap) {
        d.mu[t][l] = m.add_variable("mu_" + ts + "_" + std::to_string(l), 0.0, lp::kInfinity);
        m.add_objective(d.mu[t][l], st.cap_offset[t][l].constant);
      }
    }
    for (std::size_t z = 0; z < Z; ++z) d.beta[t][z] = m.add_variable("beta_" + ts + "_" + std::to_string(z), 0.0, lp::kInfinity);
    if (window) {
      d.nu.push_back(m.add_variable("nu_" + ts, 0.0, lp::kInfinity));
      m.add_objective(d.nu[t], st.window_offset[t].constant);
    }
  }
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      m.add_constraint({{d.alpha[t][l], 1.0}, {d.gamma[t][l], 1.0}}, Sense::greater_equal,
                       econ.walkin_price[t][l] + econ.walkin_penalty[t][l]);
      if (t + 1 < T) {
        m.add_constraint({{d.gamma[t][l], 1.0}, {d.gamma[t + 1][l], -1.0}}, Sense::greater_equal, -econ.holding[l]);
      } else {
        m.add_constraint({{d.gamma[t][l], 1.0}}, Sense::greater_equal, -econ.holding[l]);
      }
    }
    for (const auto& e : edges) {
      std::vector<Term> row{{d.beta[t][e.zone], 1.0}, {d.gamma[t][e.node], 1.0}};
      if (cap) row.push_back({d.mu[t][e.node], 1.0});
      if (window) row.push_back({d.nu[t], rho - (e.days <= inst.rules.service_window->day_threshold ? 1.0 : 0.0)});
      m.add_constraint(std::move(row), Sense::greater_equal,
                       econ.online_price[t] + econ.online_penalty[t] - econ.fulfill_cost[e.node][e.zone]);
    }
  }
  return d;
}

// Largest β a cell needs at some optimal dual solution; see build_subproblem.
double online_big_m(const Instance& inst, std::size_t t, std::size_t z) {
  const auto edges = inst.fulfillment_edges();
  const auto& econ = inst.econ;
  const double rest = static_cast<double>(inst.periods() - t);
  double best = 0.0;
  for (const auto& e : edges) {
    if (e.zone != z) continue;
    best = std::max(best, econ.online_price[t] + econ.online_penalty[t] + rest * econ.holding[e.node] -
                              econ.fulfill_cost[e.node][z]);
  }
  const double rho = window_fraction(inst);
  if (rho > 0.0 && rho < 1.0 && !edges.empty()) {
    double v = 0.0;
    for (const auto& e : edges) {
      v = std::max(v, econ.online_price[t] + econ.online_penalty[t] - econ.fulfill_cost[e.node][e.zone] +
                          rest * econ.holding[e.node]);
    }
    best += (1.0 - rho) * v / rho;
  }
  return best;
}

}  // namespace

SubproblemModel build_subproblem(const Instance& inst, const UncertaintySet& set, const Allocation& a,
                                 const BioConfig& config, double cap) {
  check_config(config);
  check_set_matches(set, inst);
  const std::size_t T = inst.periods();
  const auto& econ = inst.econ;
  const double kb = config.walkin_weight(), ko = config.online_weight();
  const auto st = fixed_stage_one(inst, a);

  SubproblemModel sp;
  auto& m = sp.model;
  m.set_objective_sense(lp::ObjectiveSense::minimize);
  sp.dual = add_dual_block(m, inst, st);
  sp.fallback = lowest_feasible_scenario(set);

  // RLT block for one channel: cells × admissible integers, selection and budget rows.
  auto channel = [&](Channel ch, double kappa, const std::vector<std::vector<std::size_t>>& duals,
                     auto&& penalty, auto&& big_m, const char* tag) {
    std::vector<std::vector<std::vector<Selection>>> out;
    if (kappa <= 0.0) return out;
    const auto& b = set.channel(ch);
    double points = 0.0;
    out.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t cells = b.lower[t].size();
      out[t].resize(cells);
      std::vector<Term> budget;
      double fixed_sum = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        const long lo = std::lround(std::ceil(b.lower[t][i] - 1e-9));
        const long hi = std::lround(std::floor(b.upper[t][i] + 1e-9));
        if (hi < lo) throw std::invalid_argument("empty demand interval in the uncertainty set");
        points += static_cast<double>(hi - lo + 1);
        if (points > cap) throw CapExceeded("number of discrete demand selectors exceeds the cap");
        const std::size_t a_var = duals[t][i];
        const double pen = penalty(t, i);
        if (lo == hi) {
          Selection s;
          s.value = static_cast<double>(lo);
          s.fixed = true;
          m.add_objective(a_var, kappa * s.value);
          m.add_objective_constant(-kappa * pen * s.value);
          fixed_sum += s.value;
          out[t][i].push_back(s);
          continue;
        }
        const double M = big_m(t, i);
        std::vector<Term> pick, link{{a_var, -1.0}};
        for (long v = lo; v <= hi; ++v) {
          Selection s;
          s.value = static_cast<double>(v);
          const std::string nm = std::string(tag) + "_" + std::to_string(t) + "_" + std::to_string(i) + "_" + std::to_string(v);
          s.w = m.add_variable("w" + nm, 0.0, 1.0, lp::VarKind::binary);
          s.star = m.add_variable("star" + nm, 0.0, M);
          m.add_constraint({{s.star, 1.0}, {s.w, -M}}, Sense::less_equal, 0.0);
          m.add_objective(s.star, kappa * s.value);
          m.add_objective(s.w, -kappa * pen * s.value);
          pick.push_back({s.w, 1.0});
          link.push_back({s.star, 1.0});
          if (v != 0) budget.push_back({s.w, s.value});
          out[t][i].push_back(s);
        }
        m.add_constraint(std::move(pick), Sense::equal, 1.0);
        m.add_constraint(std::move(link), Sense::equal, 0.0);
      }
      if (!budget.empty()) {
        m.add_constraint(budget, Sense::greater_equal, b.budget_lower[t] - fixed_sum,
                         std::string("budget_lo_") + tag + "_" + std::to_string(t));
        m.add_constraint(budget, Sense::less_equal, b.budget_upper[t] - fixed_sum,
                         std::string("budget_hi_") + tag + "_" + std::to_string(t));
      } else if (fixed_sum < b.budget_lower[t] - 1e-9 || fixed_sum > b.budget_upper[t] + 1e-9) {
        throw std::invalid_argument("uncertainty set is empty");
      }
    }
    return out;
  };

  sp.walkin = channel(
      Channel::walkin, kb, sp.dual.alpha, [&](std::size_t t, std::size_t l) { return econ.walkin_penalty[t][l]; },
      [&](std::size_t t, std::size_t l) {
        return econ.walkin_price[t][l] + econ.walkin_penalty[t][l] + static_cast<double>(T - t) * econ.holding[l];
      },
      "b");
  sp.online = channel(
      Channel::online, ko, sp.dual.beta, [&](std::size_t t, std::size_t) { return econ.online_penalty[t]; },
      [&](std::size_t t, std::size_t z) { return online_big_m(inst, t, z); }, "o");
  return sp;
}

DemandScenario extract_worst_scenario(const SubproblemModel& sp, const std::vector<double>& values) {
  DemandScenario d = sp.fallback;
  auto read = [&](const std::vector<std::vector<std::vector<Selection>>>& cells, Matrix& out) {
    for (std::size_t t = 0; t < cells.size(); ++t) {
      for (std::size_t i = 0; i < cells[t].size(); ++i) {
        const auto& opts = cells[t][i];
        if (opts.size() == 1 && opts[0].fixed) {
          out[t][i] = opts[0].value;
          continue;
        }
        int chosen = -1;
        for (std::size_t k = 0; k < opts.size(); ++k) {
          const double w = values.at(opts[k].w);
          if (std::abs(w - std::round(w)) > 1e-6) {
            throw std::logic_error("subproblem selector is not binary (" + std::to_string(w) + ")");
          }
          if (w > 0.5) {
            if (chosen >= 0) throw std::logic_error("subproblem selects two demand values for one cell");
            chosen = static_cast<int>(k);
          }
        }
        if (chosen < 0) throw std::logic_error("subproblem selects no demand value for a cell");
        out[t][i] = opts[static_cast<std::size_t>(chosen)].value;
      }
    }
  };
  read(sp.walkin, d.walkin);
  read(sp.online, d.online);
  return d;
}

std::vector<double> selection_start(const SubproblemModel& sp, const DemandScenario& scenario) {
  std::vector<double> start(sp.model.num_variables(), 0.0);
  auto fill = [&](const std::vector<std::vector<std::vector<Selection>>>& cells, const Matrix& d) {
    for (std::size_t t = 0; t < cells.size(); ++t) {
      for (std::size_t i = 0; i < cells[t].size(); ++i) {
        bool found = false;
        for (const auto& s : cells[t][i]) {
          if (std::abs(s.value - d[t][i]) < 1e-6) {
            if (!s.fixed) start[s.w] = 1.0;
            found = true;
          }
        }
        if (!found) throw std::invalid_argument("scenario value is not an admissible demand");
      }
    }
  };
  fill(sp.walkin, scenario.walkin);
  fill(sp.online, scenario.online);
  return start;
}

DualModel build_dual_lp(const Instance& inst, const Allocation& a, const DemandScenario& d, const BioConfig& config) {
  check_config(config);
  const double kb = config.walkin_weight(), ko = config.online_weight();
  const auto& econ = inst.econ;
  DualModel dm;
  dm.model.set_objective_sense(lp::ObjectiveSense::minimize);
  dm.dual = add_dual_block(dm.model, inst, fixed_stage_one(inst, a));
  for (std::size_t t = 0; t < inst.periods(); ++t) {
    for (std::size_t l = 0; l < inst.num_nodes(); ++l) {
      dm.model.add_objective(dm.dual.alpha[t][l], kb * d.walkin.at(t).at(l));
      dm.model.add_objective_constant(-kb * econ.walkin_penalty[t][l] * d.walkin[t][l]);
    }
    for (std::size_t z = 0; z < inst.num_zones(); ++z) {
      dm.model.add_objective(dm.dual.beta[t][z], ko * d.online.at(t).at(z));
      dm.model.add_objective_constant(-ko * econ.online_penalty[t] * d.online[t][z]);
    }
  }
  return dm;
}

}  // namespace bioinv
