#include <cmath>
#include <limits>
#include <stdexcept>

#include "bioinv/ccg.hpp"

namespace bioinv {

HeuristicResult alternating_heuristic_subproblem(const Instance& inst, const UncertaintySet& set,
                                                 const Allocation& a, const BioConfig& config, std::size_t rounds,
                                                 const std::optional<DemandScenario>& start) {
  if (rounds < 1) throw std::invalid_argument("alternating heuristic needs at least one round");
  check_config(config);
  check_set_matches(set, inst);
  const double kb = config.walkin_weight(), ko = config.online_weight();
  const auto& econ = inst.econ;

  DemandScenario d = start ? *start : highest_feasible_scenario(set);
  // channels outside the adversary's control do not enter the objective
  const auto low = lowest_feasible_scenario(set);
  if (kb <= 0.0) d.walkin = low.walkin;
  if (ko <= 0.0) d.online = low.online;

  HeuristicResult best;
  best.value = std::numeric_limits<double>::infinity();
  double previous = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < rounds; ++r) {
    const auto dm = build_dual_lp(inst, a, d, config);
    const auto sol = lp::solve(dm.model);
    if (sol.status != lp::SolveStatus::optimal) {
      throw std::runtime_error(std::string("dual LP at fixed demand did not solve: ") + lp::to_string(sol.status));
    }
    best.rounds = r + 1;
    if (sol.objective < best.value) {
      best.value = sol.objective;
      best.scenario = d;
    }
    if (std::abs(sol.objective - previous) < 1e-9) break;
    previous = sol.objective;
    if (r + 1 == rounds) break;

    for (std::size_t t = 0; t < inst.periods(); ++t) {
      if (kb > 0.0) {
        std::vector<double> cost(inst.num_nodes());
        for (std::size_t l = 0; l < cost.size(); ++l) {
          cost[l] = kb * (sol.values[dm.dual.alpha[t][l]] - econ.walkin_penalty[t][l]);
        }
        d.walkin[t] = minimise_linear(set.walkin, t, cost);
      }
      if (ko > 0.0) {
        std::vector<double> cost(inst.num_zones());
        for (std::size_t z = 0; z < cost.size(); ++z) {
          cost[z] = ko * (sol.values[dm.dual.beta[t][z]] - econ.online_penalty[t]);
        }
        d.online[t] = minimise_linear(set.online, t, cost);
      }
    }
  }
  return best;
}

}  // namespace bioinv
