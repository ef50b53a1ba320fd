#include "bioinv/tuning.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bioinv {

namespace {

Matrix blend(const Matrix& a, const Matrix& b, double lambda) {
  if (a.size() != b.size()) throw std::invalid_argument("allocation dimension mismatch");
  Matrix out = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].size() != b[i].size()) throw std::invalid_argument("allocation dimension mismatch");
    for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] = lambda * b[i][j] + (1.0 - lambda) * a[i][j];
  }
  return out;
}

}  // namespace

Allocation superpose(const Allocation& x0, const Allocation& x1, double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("lambda must lie in [0,1]");
  Allocation out;
  out.x = blend(x0.x, x1.x, lambda);
  if (x0.x_repo && x1.x_repo) {
    if (x0.x_repo->size() != x1.x_repo->size()) throw std::invalid_argument("allocation dimension mismatch");
    std::vector<Matrix> r(x0.x_repo->size());
    for (std::size_t t = 0; t < r.size(); ++t) r[t] = blend((*x0.x_repo)[t], (*x1.x_repo)[t], lambda);
    out.x_repo = std::move(r);
  } else if (x0.x_repo || x1.x_repo) {
    throw std::invalid_argument("only one allocation carries repositioning flows");
  }
  return out;
}

ClosedForm closed_form_single_location(double p, double b, double h, double c, double d_min, double d_max) {
  if (!(c > 0.0) || p + b < c) throw std::invalid_argument("closed form needs p + b >= c > 0");
  if (p < 0.0 || b < 0.0 || h < 0.0) throw std::invalid_argument("closed form needs nonnegative p, b, h");
  if (d_min < 0.0 || d_min > d_max) throw std::invalid_argument("closed form needs 0 <= D_min <= D_max");
  ClosedForm cf;
  const double den = p + b + h;
  cf.x_bio0 = den > 0.0 ? ((p + h) * d_min + b * d_max) / den : d_min;
  cf.z_bio0 = den > 0.0 ? ((p + b - c) * (p + h) * d_min - (h + c) * b * d_max) / den : -c * d_min;
  if (p >= c) {
    cf.x_bio1 = d_max;
    cf.z_bio1 = (p - c) * d_max;
  } else {
    // buying the smallest possible demand beats buying nothing whenever p + b > c
    cf.x_bio1 = d_min;
    cf.z_bio1 = (p - c) * d_min;
  }
  return cf;
}

void check_objective(const ScoringObjective& o) {
  switch (o.kind) {
    case ScoreKind::cvar:
      if (!(o.level > 0.0 && o.level <= 1.0)) throw std::invalid_argument("cvar level must lie in (0,1]");
      break;
    case ScoreKind::mixture: {
      if (o.parts.empty()) throw std::invalid_argument("mixture needs at least one component");
      double total = 0.0;
      for (const auto& [w, part] : o.parts) {
        if (w < 0.0) throw std::invalid_argument("mixture weights must be nonnegative");
        total += w;
        check_objective(part);
      }
      if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("mixture weights must sum to 1");
      break;
    }
    default:
      break;
  }
}

namespace {

// Shortest text that parses back to the same double.
std::string shortest(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

std::string describe(const ScoringObjective& o) {
  switch (o.kind) {
    case ScoreKind::mean: return "mean";
    case ScoreKind::worst_case: return "worst";
    case ScoreKind::best_case: return "best";
    case ScoreKind::cvar: {
      return "cvar:" + shortest(o.level);
    }
    case ScoreKind::mixture: {
      std::string s = "mix:";
      for (std::size_t i = 0; i < o.parts.size(); ++i) {
        if (i) s += '+';
        s += shortest(o.parts[i].first) + '*' + describe(o.parts[i].second);
      }
      return s;
    }
  }
  return "?";
}

ScoringObjective parse_objective(const std::string& text) {
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) throw std::invalid_argument("bad number \"" + s + "\" in objective \"" + text + "\"");
    return v;
  };
  if (text == "mean") return ScoringObjective::mean();
  if (text == "worst") return ScoringObjective::worst();
  if (text == "best") return ScoringObjective::best();
  if (text.rfind("cvar:", 0) == 0) {
    auto o = ScoringObjective::cvar(number(text.substr(5)));
    check_objective(o);
    return o;
  }
  if (text.rfind("mix:", 0) == 0) {
    ScoringObjective o;
    o.kind = ScoreKind::mixture;
    std::stringstream in(text.substr(4));
    std::string item;
    while (std::getline(in, item, '+')) {
      const auto star = item.find('*');
      if (star == std::string::npos) throw std::invalid_argument("mixture component needs weight*kind: \"" + item + "\"");
      const std::string inner = item.substr(star + 1);
      if (inner.rfind("mix:", 0) == 0) throw std::invalid_argument("nested mixtures are not supported");
      o.parts.emplace_back(number(item.substr(0, star)), parse_objective(inner));
    }
    check_objective(o);
    return o;
  }
  throw std::invalid_argument("unknown scoring objective \"" + text + "\"");
}

std::vector<double> scenario_profits(const Instance& inst, const Allocation& a,
                                     const std::vector<DemandScenario>& scenarios, std::size_t threads) {
  std::vector<double> out(scenarios.size());
  threads = std::max<std::size_t>(1, std::min(threads, scenarios.size()));
  if (threads == 1) {
    for (std::size_t i = 0; i < scenarios.size(); ++i) out[i] = evaluate_allocation(inst, a, scenarios[i]).profit;
    return out;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < scenarios.size(); i += threads) {
          out[i] = evaluate_allocation(inst, a, scenarios[i]).profit;
        }
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double score_profits(const std::vector<double>& profits, const ScoringObjective& o) {
  if (profits.empty()) throw std::invalid_argument("scoring needs at least one scenario");
  check_objective(o);
  switch (o.kind) {
    case ScoreKind::mean: {
      double s = 0.0;
      for (double v : profits) s += v;
      return s / static_cast<double>(profits.size());
    }
    case ScoreKind::worst_case: return *std::min_element(profits.begin(), profits.end());
    case ScoreKind::best_case: return *std::max_element(profits.begin(), profits.end());
    case ScoreKind::cvar: {
      const double n = static_cast<double>(profits.size());
      if (n < std::ceil(1.0 / o.level - 1e-12)) {
        throw std::invalid_argument("cvar level needs at least ceil(1/level) scenarios");
      }
      const auto k = static_cast<std::size_t>(std::ceil(o.level * n - 1e-9));
      std::vector<double> v = profits;
      std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
      double s = 0.0;
      for (std::size_t i = 0; i < k; ++i) s += v[i];
      return s / static_cast<double>(k);
    }
    case ScoreKind::mixture: {
      double s = 0.0;
      for (const auto& [w, part] : o.parts) s += w * score_profits(profits, part);
      return s;
    }
  }
  return 0.0;
}

double score_allocation(const Instance& inst, const Allocation& a, const std::vector<DemandScenario>& scenarios,
                        const ScoringObjective& o, std::size_t threads) {
  if (scenarios.empty()) throw std::invalid_argument("scoring needs at least one scenario");
  check_objective(o);
  return score_profits(scenario_profits(inst, a, scenarios, threads), o);
}

bool zero_initial_inventory(const Instance& inst) {
  for (const auto& row : inst.inventory.pipeline) {
    for (double v : row) {
      if (v != 0.0) return false;
    }
  }
  return true;
}

namespace {

SolveReport solve_at(const Instance& inst, const UncertaintySet& set, double lambda, const TuneOptions& o) {
  BioConfig cfg = o.base;
  cfg.lambda = lambda;
  return solve_two_stage(inst, set, cfg, o.ccg);
}

// Larger score wins; near-ties keep the smaller λ.
bool better(const LambdaPoint& a, const LambdaPoint& b) {
  const double tol = 1e-9 * (1.0 + std::abs(b.score));
  if (a.score > b.score + tol) return true;
  if (a.score < b.score - tol) return false;
  return a.lambda < b.lambda;
}

TuneResult tune_grid(const Instance& inst, const UncertaintySet& set, const std::vector<DemandScenario>& scenarios,
                     const ScoringObjective& obj, const TuneOptions& o) {
  if (o.grid.empty()) throw std::invalid_argument("lambda grid is empty");
  TuneResult res;
  bool have = false;
  LambdaPoint best;
  for (double lambda : o.grid) {
    const auto rep = solve_at(inst, set, lambda, o);
    ++res.solves;
    LambdaPoint pt{lambda, score_allocation(inst, rep.allocation, scenarios, obj, o.threads), rep.objective};
    res.curve.push_back(pt);
    if (!have || better(pt, best)) {
      best = pt;
      res.allocation = rep.allocation;
      have = true;
    }
  }
  res.lambda = best.lambda;
  res.score = best.score;
  return res;
}

TuneResult tune_bisection(const Instance& inst, const UncertaintySet& set,
                          const std::vector<DemandScenario>& scenarios, const ScoringObjective& obj,
                          const TuneOptions& o) {
  if (!zero_initial_inventory(inst)) {
    throw std::invalid_argument("bisection needs zero initial inventory; use the grid method");
  }
  if (o.base.integer_allocations) throw std::invalid_argument("bisection is not available in integer mode; use the grid method");
  if (!(o.tolerance > 0.0)) throw std::invalid_argument("bisection tolerance must be positive");
  TuneResult res;
  const auto r0 = solve_at(inst, set, 0.0, o);
  const auto r1 = solve_at(inst, set, 1.0, o);
  res.solves = 2;
  const double z0 = r0.objective, z1 = r1.objective;

  auto eval = [&](double lambda) {
    lambda = std::clamp(lambda, 0.0, 1.0);
    for (const auto& p : res.curve) {
      if (p.lambda == lambda) return p.score;
    }
    const auto a = superpose(r0.allocation, r1.allocation, lambda);
    LambdaPoint pt{lambda, score_allocation(inst, a, scenarios, obj, o.threads), lambda * z1 + (1.0 - lambda) * z0};
    res.curve.push_back(pt);
    return pt.score;
  };
  // one-sided slopes of the piecewise-linear score
  const double h = 1e-6;
  auto right_slope = [&](double l) { return (eval(l + h) - eval(l)) / h; };
  auto left_slope = [&](double l) { return (eval(l) - eval(l - h)) / h; };

  double lo = 0.0, hi = 1.0;
  eval(lo);
  eval(hi);
  if (right_slope(0.0) <= 0.0) {
    hi = 0.0;
  } else if (left_slope(1.0) >= 0.0) {
    lo = 1.0;
  } else {
    while (hi - lo > o.tolerance) {
      const double mid = 0.5 * (lo + hi);
      if (right_slope(mid) > 0.0) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    // the maximiser is a breakpoint; intersect the supporting lines at both ends
    for (int k = 0; k < 20 && hi - lo > 1e-12; ++k) {
      const double sl = right_slope(lo), sr = left_slope(hi);
      if (!(sl > sr)) break;
      const double cross = (eval(hi) - eval(lo) + sl * lo - sr * hi) / (sl - sr);
      if (!(cross > lo && cross < hi)) break;
      const double at = eval(cross);
      const double predicted = eval(lo) + sl * (cross - lo);
      if (std::abs(at - predicted) <= 1e-9 * (1.0 + std::abs(at))) break;
      if (right_slope(cross) > 0.0) {
        lo = cross;
      } else {
        hi = cross;
      }
    }
  }
  LambdaPoint best = res.curve.front();
  for (const auto& p : res.curve) {
    if (better(p, best)) best = p;
  }
  res.lambda = best.lambda;
  res.score = best.score;
  res.allocation = superpose(r0.allocation, r1.allocation, best.lambda);
  std::sort(res.curve.begin(), res.curve.end(), [](const auto& a, const auto& b) { return a.lambda < b.lambda; });
  return res;
}

}  // namespace

TuneResult tune_lambda(const Instance& inst, const UncertaintySet& set, const std::vector<DemandScenario>& scenarios,
                       const ScoringObjective& obj, const TuneOptions& o) {
  if (scenarios.empty()) throw std::invalid_argument("tuning needs at least one scenario");
  check_objective(obj);
  for (double l : o.grid) {
    if (!(l >= 0.0 && l <= 1.0)) throw std::invalid_argument("grid values must lie in [0,1]");
  }
  return o.method == TuneMethod::grid ? tune_grid(inst, set, scenarios, obj, o)
                                      : tune_bisection(inst, set, scenarios, obj, o);
}

ScenarioSplit split_scenarios(const std::vector<DemandScenario>& scenarios, double fraction) {
  if (!(fraction > 0.0 && fraction < 1.0)) throw std::invalid_argument("split fraction must lie in (0,1)");
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(scenarios.size()) + 1e-9));
  ScenarioSplit s;
  s.validation.assign(scenarios.begin(), scenarios.begin() + static_cast<std::ptrdiff_t>(k));
  s.holdout.assign(scenarios.begin() + static_cast<std::ptrdiff_t>(k), scenarios.end());
  return s;
}

SuperpositionReport verify_superposition(const Instance& inst, const UncertaintySet& set, double lambda,
                                         const CcgOptions& options, const BioConfig& base) {
  if (!zero_initial_inventory(inst)) throw std::invalid_argument("superposition needs zero initial inventory");
  if (base.integer_allocations) throw std::invalid_argument("superposition needs continuous allocations");
  SuperpositionReport rep;
  rep.lambda = lambda;
  BioConfig cfg = base;
  cfg.lambda = 0.0;
  const auto r0 = solve_two_stage(inst, set, cfg, options);
  cfg.lambda = 1.0;
  const auto r1 = solve_two_stage(inst, set, cfg, options);
  cfg.lambda = lambda;
  const auto rl = solve_two_stage(inst, set, cfg, options);
  rep.z0 = r0.objective;
  rep.z1 = r1.objective;
  rep.z_lambda = rl.objective;
  rep.residual = std::abs(rl.objective - lambda * r1.objective - (1.0 - lambda) * r0.objective);
  rep.x0 = r0.allocation;
  rep.x1 = r1.allocation;
  rep.x_lambda = rl.allocation;

  CcgOptions fixed = options;
  fixed.fixed_allocation = superpose(r0.allocation, r1.allocation, lambda);
  const auto rs = solve_two_stage(inst, set, cfg, fixed);
  rep.superposed_value = rs.objective;
  rep.superposed_gap = std::abs(rs.objective - rl.objective);
  rep.converged = r0.termination == Termination::converged && r1.termination == Termination::converged &&
                  rl.termination == Termination::converged && rs.termination == Termination::converged;
  return rep;
}

}  // namespace bioinv
