// bioinv command-line front end.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "bioinv/baselines.hpp"
#include "bioinv/ccg.hpp"
#include "bioinv/io.hpp"
#include "bioinv/reports.hpp"
#include "bioinv/simulator.hpp"
#include "bioinv/tuning.hpp"

#ifndef BIOINV_VERSION
#define BIOINV_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using nlohmann::json;
using namespace bioinv;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::size_t env_threads() {
  if (const char* v = std::getenv("BIOINV_THREADS")) {
    try {
      const long n = std::stol(v);
      if (n >= 1) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("BIOINV_THREADS must be a positive integer, got \"") + v + "\"");
  }
  return 1;
}

std::string default_out() {
  if (const char* v = std::getenv("BIOINV_OUTPUT_DIR"); v && *v) return v;
  return "bioinv_out";
}

// All artifacts of one run go through here so that overwrites are refused up front.
class Output {
 public:
  Output(std::string dir, bool force) : dir_(std::move(dir)), force_(force) {}

  void claim(const std::vector<std::string>& names) const {
    if (force_) return;
    for (const auto& n : names) {
      if (fs::exists(fs::path(dir_) / n)) {
        throw UsageError("refusing to overwrite " + (fs::path(dir_) / n).string() + " (use --force)");
      }
    }
  }

  std::string write(const std::string& name, const std::string& text) const {
    fs::create_directories(dir_);
    const auto p = fs::path(dir_) / name;
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << text;
    if (!f) throw std::runtime_error("failed writing " + p.string());
    return p.string();
  }

 private:
  std::string dir_;
  bool force_;
};

struct Common {
  std::string out;
  bool force = false;
  std::uint64_t seed = 1;
};

struct SolveFlags {
  double lambda = 0.0;
  double epsilon = 1e-4;
  double delta = 1e-5;
  std::size_t max_iterations = 20;
  double max_seconds = 300.0;
  bool integer = false;
  bool repositioning = false;
  std::string allied = "walkin";
  std::string mode = "exact_mip";

  void add(CLI::App* app, bool with_lambda = true) {
    if (with_lambda) app->add_option("--lambda", lambda, "optimism weight in [0,1]")->check(CLI::Range(0.0, 1.0));
    app->add_option("--epsilon", epsilon, "relative gap tolerance")->check(CLI::PositiveNumber);
    app->add_option("--delta", delta, "gap denominator guard")->check(CLI::PositiveNumber);
    app->add_option("--max-iterations", max_iterations, "CCG iteration limit")->check(CLI::PositiveNumber);
    app->add_option("--max-seconds", max_seconds, "CCG wall-clock limit")->check(CLI::PositiveNumber);
    app->add_flag("--integer", integer, "integer allocations");
    app->add_flag("--repositioning", repositioning, "allow moving existing stock between nodes");
    app->add_option("--allied", allied, "channels with optimistic demand")->check(CLI::IsMember({"walkin", "both"}));
    app->add_option("--subproblem-mode", mode, "exact_mip, alternating_heuristic or ah_then_mip")
        ->check(CLI::IsMember({"exact_mip", "alternating_heuristic", "ah_then_mip"}));
  }

  [[nodiscard]] BioConfig config() const {
    BioConfig c;
    c.lambda = lambda;
    c.integer_allocations = integer;
    c.repositioning = repositioning;
    c.allied = allied == "both" ? AlliedChannels::both : AlliedChannels::walkin_only;
    return c;
  }

  [[nodiscard]] CcgOptions options() const {
    CcgOptions o;
    o.epsilon = epsilon;
    o.delta = delta;
    o.max_iterations = max_iterations;
    o.max_seconds = max_seconds;
    o.subproblem_mode = parse_subproblem_mode(mode);
    return o;
  }

  [[nodiscard]] json echo() const {
    return {{"lambda", lambda},       {"epsilon", epsilon},       {"delta", delta},
            {"max_iterations", max_iterations}, {"max_seconds", max_seconds}, {"integer", integer},
            {"repositioning", repositioning},   {"allied", allied},           {"subproblem_mode", mode}};
  }
};

// Scenario source: a batch file, or fresh samples from means.
struct ScenarioFlags {
  std::string file;
  std::string means;
  std::size_t samples = 1000;
  std::string family = "poisson";

  void add(CLI::App* app) {
    app->add_option("--scenarios", file, "scenario batch file")->check(CLI::ExistingFile);
    app->add_option("--means", means, "mean demand file used for sampling")->check(CLI::ExistingFile);
    app->add_option("--samples", samples, "number of sampled scenarios")->check(CLI::PositiveNumber);
    app->add_option("--family", family, "sampling family")->check(CLI::IsMember({"poisson", "uniform"}));
  }

  [[nodiscard]] std::vector<DemandScenario> load(std::uint64_t seed, const UncertaintySet* set) const {
    if (!file.empty()) return load_scenarios(file).scenarios;
    if (means.empty()) throw UsageError("give --scenarios or --means");
    return sample_scenarios(load_means(means), samples, seed, parse_family(family), set);
  }

  [[nodiscard]] json echo() const {
    return {{"scenarios", file}, {"means", means}, {"samples", samples}, {"family", family}};
  }
};

UncertaintySet load_or_build_set(const std::string& set_path, const std::string& means_path) {
  if (!set_path.empty()) return load_uncertainty_set(set_path);
  if (!means_path.empty()) return quantile_bounds_from_means(load_means(means_path));
  throw UsageError("give --set or --means");
}

json manifest(const std::string& command, int argc, char** argv, const Common& c, json config,
              const std::vector<std::string>& files) {
  json args = json::array();
  for (int i = 0; i < argc; ++i) args.push_back(argv[i]);
  return {{"tool", "bioinv"},      {"version", BIOINV_VERSION}, {"command", command}, {"argv", args},
          {"seed", c.seed},        {"config", std::move(config)}, {"outputs", files},
          {"threads", env_threads()}};
}

void print_violations(const std::vector<Violation>& v) {
  json arr = json::array();
  for (const auto& x : v) arr.push_back({{"rule", x.rule}, {"detail", x.detail}});
  std::cout << arr.dump(2) << "\n";
}

Instance load_valid_instance(const std::string& path) {
  auto inst = load_instance(path);
  const auto v = validate_instance(inst);
  if (!v.empty()) {
    std::cerr << "instance " << path << " violates " << v.size() << " rule(s); first: " << v.front().rule << " "
              << v.front().detail << "\n";
    throw UsageError("invalid instance");
  }
  return inst;
}

PolicySpec parse_policy(const std::string& text, const SolveFlags& f, std::size_t horizon) {
  PolicySpec p;
  p.horizon = horizon;
  p.config = f.config();
  p.ccg = f.options();
  if (text == "basestock") {
    p.kind = PolicyKind::basestock;
  } else if (text == "pwl") {
    p.kind = PolicyKind::pwl;
  } else if (text.rfind("bio:", 0) == 0) {
    p.kind = PolicyKind::bio;
    try {
      p.lambda = std::stod(text.substr(4));
    } catch (const std::exception&) {
      throw UsageError("bad policy \"" + text + "\"");
    }
    if (!(p.lambda >= 0.0 && p.lambda <= 1.0)) throw UsageError("policy lambda must lie in [0,1]");
  } else {
    throw UsageError("unknown policy \"" + text + "\" (basestock, pwl, bio:<lambda>)");
  }
  return p;
}

// Synthetic network: stores and DCs on a line, zones spread over it.
struct GenFlags {
  std::size_t stores = 5;
  std::size_t dcs = 2;
  std::size_t zones = 3;
  int horizon = 2;
  double mean_min = 1.0;
  double mean_max = 4.0;
  double online_mean_min = 1.0;
  double online_mean_max = 4.0;
  double price = 100.0;
  double penalty = 100.0;
  double cost_min = 30.0;
  double cost_max = 50.0;
  double ship_min = 5.0;
  double ship_max = 15.0;
  int lead_time = 0;
  std::string name;
};

std::pair<Instance, DemandMeans> generate(const GenFlags& g, std::uint64_t seed) {
  if (g.stores + g.dcs == 0) throw UsageError("need at least one node");
  if (g.mean_min > g.mean_max || g.online_mean_min > g.online_mean_max || g.cost_min > g.cost_max ||
      g.ship_min > g.ship_max) {
    throw UsageError("range minimum above maximum");
  }
  std::mt19937_64 rng(seed);
  auto uni = [&](double a, double b) {
    // integral draws keep the generated files short and exact
    std::uniform_int_distribution<long long> d(static_cast<long long>(std::ceil(a)), static_cast<long long>(std::floor(b)));
    return static_cast<double>(d(rng));
  };
  Instance inst;
  inst.name = g.name.empty() ? "synthetic-" + std::to_string(seed) : g.name;
  inst.horizon = g.horizon;
  const std::size_t L = g.stores + g.dcs, Z = g.zones, T = static_cast<std::size_t>(g.horizon);
  for (std::size_t s = 0; s < g.stores; ++s) {
    inst.network.nodes.push_back("store" + std::to_string(s + 1));
    inst.network.kinds.push_back(NodeKind::store);
  }
  for (std::size_t d = 0; d < g.dcs; ++d) {
    inst.network.nodes.push_back("dc" + std::to_string(d + 1));
    inst.network.kinds.push_back(NodeKind::warehouse);
  }
  for (std::size_t z = 0; z < Z; ++z) inst.network.zones.push_back("zone" + std::to_string(z + 1));
  inst.network.supplier = "supplier";
  inst.econ.fulfill_cost.assign(L, std::vector<double>(Z, 0.0));
  for (std::size_t l = 0; l < L; ++l) {
    inst.network.sfs_eligible.push_back(l);
    for (std::size_t z = 0; z < Z; ++z) {
      const double c = uni(g.ship_min, g.ship_max);
      inst.econ.fulfill_cost[l][z] = c;
      inst.network.ship_edges.push_back({l, z, c <= 0.5 * (g.ship_min + g.ship_max) ? 2.0 : 4.0});
    }
  }
  inst.econ.walkin_price.assign(T, std::vector<double>(L, g.price));
  inst.econ.walkin_penalty.assign(T, std::vector<double>(L, g.penalty));
  inst.econ.online_price.assign(T, g.price);
  inst.econ.online_penalty.assign(T, g.penalty);
  inst.econ.holding.assign(L, 0.0);
  for (std::size_t l = 0; l < L; ++l) inst.econ.purchase_cost.push_back(uni(g.cost_min, g.cost_max));
  inst.inventory.lead_time.assign(L, g.lead_time);
  inst.inventory.pipeline.assign(L, std::vector<double>(static_cast<std::size_t>(g.lead_time) + 1, 0.0));

  DemandMeans means;
  means.walkin.assign(T, std::vector<double>(L, 0.0));
  means.online.assign(T, std::vector<double>(Z, 0.0));
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < g.stores; ++l) means.walkin[t][l] = uni(g.mean_min, g.mean_max);
    for (std::size_t z = 0; z < Z; ++z) means.online[t][z] = uni(g.online_mean_min, g.online_mean_max);
  }
  return {inst, means};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Optimistic-robust omnichannel inventory positioning"};
  app.set_version_flag("--version", std::string(BIOINV_VERSION));
  app.require_subcommand(1);
  Common common;
  common.out = default_out();
  auto common_flags = [&](CLI::App* sub) {
    sub->add_option("--out", common.out, "output directory (default $BIOINV_OUTPUT_DIR or ./bioinv_out)");
    sub->add_flag("--force", common.force, "overwrite existing outputs");
    sub->add_option("--seed", common.seed, "random seed");
  };

  // validate
  std::string v_instance, v_set;
  auto* validate = app.add_subcommand("validate", "check an instance (and optionally a set) for rule violations");
  validate->add_option("instance", v_instance, "instance file")->required()->check(CLI::ExistingFile);
  validate->add_option("--set", v_set, "uncertainty set file")->check(CLI::ExistingFile);

  // solve
  std::string s_instance, s_set, s_means;
  SolveFlags s_flags;
  auto* solve = app.add_subcommand("solve", "solve the two-stage BIO-lambda model by column-and-constraint generation");
  solve->add_option("instance", s_instance, "instance file")->required()->check(CLI::ExistingFile);
  solve->add_option("--set", s_set, "uncertainty set file")->check(CLI::ExistingFile);
  solve->add_option("--means", s_means, "build the set from Poisson quantiles of these means")->check(CLI::ExistingFile);
  s_flags.add(solve);
  common_flags(solve);

  // tune
  std::string t_instance, t_set, t_set_means, t_objective = "mean", t_method = "grid";
  std::vector<double> t_grid{0.05, 0.10, 0.25, 0.50, 0.75};
  double t_split = 0.8;
  SolveFlags t_flags;
  ScenarioFlags t_scen;
  auto* tune = app.add_subcommand("tune", "pick lambda on validation scenarios, report it on a holdout");
  tune->add_option("instance", t_instance, "instance file")->required()->check(CLI::ExistingFile);
  tune->add_option("--set", t_set, "uncertainty set file")->check(CLI::ExistingFile);
  tune->add_option("--set-means", t_set_means, "build the set from these means")->check(CLI::ExistingFile);
  tune->add_option("--objective", t_objective, "mean, worst, best, cvar:<eta>, mix:<w>*<kind>+...");
  tune->add_option("--method", t_method, "grid or bisection")->check(CLI::IsMember({"grid", "bisection"}));
  tune->add_option("--grid", t_grid, "lambda values for the grid method")->delimiter(',');
  tune->add_option("--split", t_split, "validation fraction")->check(CLI::Range(0.0, 1.0));
  t_flags.add(tune, false);
  t_scen.add(tune);
  common_flags(tune);

  // evaluate
  std::string e_instance, e_alloc, e_set;
  ScenarioFlags e_scen;
  auto* evaluate = app.add_subcommand("evaluate", "profit distribution of an allocation over scenarios");
  evaluate->add_option("instance", e_instance, "instance file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--allocation", e_alloc, "allocation file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--set", e_set, "uncertainty set (needed for uniform sampling)")->check(CLI::ExistingFile);
  e_scen.add(evaluate);
  common_flags(evaluate);

  // simulate
  std::string m_instance, m_means;
  std::vector<std::string> m_policies{"basestock", "pwl", "bio:0", "bio:0.1", "bio:0.25"};
  std::size_t m_weeks = 3, m_replications = 30, m_horizon = 2;
  bool m_credit = false;
  SolveFlags m_flags;
  auto* simulate = app.add_subcommand("simulate", "rolling-horizon transaction-level simulation");
  simulate->add_option("instance", m_instance, "base instance (per-week economics)")->required()->check(CLI::ExistingFile);
  simulate->add_option("--means", m_means, "weekly mean demand file")->required()->check(CLI::ExistingFile);
  simulate->add_option("--policy", m_policies, "policies: basestock, pwl, bio:<lambda>")->delimiter(',');
  simulate->add_option("--weeks", m_weeks, "simulated weeks")->check(CLI::PositiveNumber);
  simulate->add_option("--replications", m_replications, "Monte-Carlo replications")->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", m_horizon, "planning look-ahead in weeks")->check(CLI::PositiveNumber);
  simulate->add_flag("--credit-excess", m_credit, "count leftover stock at cost in realized profit");
  m_flags.mode = "alternating_heuristic";
  m_flags.add(simulate, false);
  common_flags(simulate);

  // gen-instance
  GenFlags g;
  auto* gen = app.add_subcommand("gen-instance", "write a random synthetic instance and its mean demand");
  gen->add_option("--stores", g.stores, "number of stores");
  gen->add_option("--dcs", g.dcs, "number of warehouses");
  gen->add_option("--zones", g.zones, "number of online zones");
  gen->add_option("--horizon", g.horizon, "periods")->check(CLI::PositiveNumber);
  gen->add_option("--mean-min", g.mean_min, "walk-in mean range")->check(CLI::NonNegativeNumber);
  gen->add_option("--mean-max", g.mean_max, "walk-in mean range")->check(CLI::NonNegativeNumber);
  gen->add_option("--online-mean-min", g.online_mean_min, "online mean range")->check(CLI::NonNegativeNumber);
  gen->add_option("--online-mean-max", g.online_mean_max, "online mean range")->check(CLI::NonNegativeNumber);
  gen->add_option("--price", g.price, "price, both channels")->check(CLI::NonNegativeNumber);
  gen->add_option("--penalty", g.penalty, "lost-sales penalty, both channels")->check(CLI::NonNegativeNumber);
  gen->add_option("--cost-min", g.cost_min, "purchase cost range")->check(CLI::NonNegativeNumber);
  gen->add_option("--cost-max", g.cost_max, "purchase cost range")->check(CLI::NonNegativeNumber);
  gen->add_option("--ship-min", g.ship_min, "fulfilment cost range")->check(CLI::NonNegativeNumber);
  gen->add_option("--ship-max", g.ship_max, "fulfilment cost range")->check(CLI::NonNegativeNumber);
  gen->add_option("--lead-time", g.lead_time, "supplier lead time")->check(CLI::NonNegativeNumber);
  gen->add_option("--name", g.name, "instance name");
  common_flags(gen);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const std::size_t threads = env_threads();
    const Output out(common.out, common.force);

    if (*validate) {
      const auto inst = load_instance(v_instance);
      auto v = validate_instance(inst);
      if (!v_set.empty()) {
        const auto set = load_uncertainty_set(v_set);
        for (const auto& p : check_set(set)) v.push_back({"uncertainty_set", p});
        try {
          check_set_matches(set, inst);
        } catch (const std::invalid_argument& e) {
          v.push_back({"uncertainty_set_shape", e.what()});
        }
      }
      print_violations(v);
      return v.empty() ? 0 : 1;
    }

    if (*solve) {
      const auto inst = load_valid_instance(s_instance);
      const auto set = load_or_build_set(s_set, s_means);
      const std::vector<std::string> files{"solve_report.json", "allocation.json", "trace.csv", "manifest.json"};
      out.claim(files);
      SolveReport rep;
      int code = 0;
      try {
        rep = solve_two_stage(inst, set, s_flags.config(), s_flags.options());
      } catch (const SolveFailure& f) {
        std::cerr << "solve failed: " << f.what() << "\n";
        rep = f.report;
        code = 3;
      }
      out.write("solve_report.json", dump_solve_report(rep));
      out.write("allocation.json", dump_allocation(rep.allocation));
      out.write("trace.csv", trace_csv(rep));
      json cfg = s_flags.echo();
      cfg["instance"] = s_instance;
      cfg["set"] = s_set;
      cfg["means"] = s_means;
      out.write("manifest.json", manifest("solve", argc, argv, common, cfg, files).dump(2) + "\n");
      std::cout.precision(17);
      std::cout << "objective " << rep.objective << "\nupper_bound " << rep.upper_bound << "\ntermination "
                << to_string(rep.termination) << "\niterations " << rep.iterations << "\n";
      return code;
    }

    if (*tune) {
      const auto inst = load_valid_instance(t_instance);
      const auto set = load_or_build_set(t_set, t_set_means);
      const auto objective = parse_objective(t_objective);
      const auto scenarios = t_scen.load(common.seed, &set);
      const auto split = split_scenarios(scenarios, t_split);
      if (split.validation.empty() || split.holdout.empty()) throw UsageError("split leaves an empty validation or holdout part");
      const std::vector<std::string> files{"tune.json", "lambda_curve.csv", "holdout.json", "manifest.json"};
      out.claim(files);
      TuneOptions to;
      to.method = t_method == "grid" ? TuneMethod::grid : TuneMethod::bisection;
      to.grid = t_grid;
      to.base = t_flags.config();
      to.ccg = t_flags.options();
      to.threads = threads;
      const auto res = tune_lambda(inst, set, split.validation, objective, to);
      const auto hold = batch_evaluate(inst, res.allocation, split.holdout, threads);
      out.write("tune.json", dump_tune_result(res, objective));
      out.write("lambda_curve.csv", lambda_curve_csv(res));
      json h = json::parse(dump_profit_stats(hold));
      h["score"] = score_profits(hold.profits, objective);
      out.write("holdout.json", h.dump(2) + "\n");
      json cfg = t_flags.echo();
      cfg.update({{"instance", t_instance}, {"set", t_set}, {"set_means", t_set_means}, {"objective", t_objective},
                  {"method", t_method}, {"grid", t_grid}, {"split", t_split}, {"source", t_scen.echo()}});
      out.write("manifest.json", manifest("tune", argc, argv, common, cfg, files).dump(2) + "\n");
      std::cout.precision(17);
      std::cout << "lambda " << res.lambda << "\nvalidation_score " << res.score << "\nholdout_score " << h["score"].get<double>()
                << "\n";
      return 0;
    }

    if (*evaluate) {
      const auto inst = load_valid_instance(e_instance);
      const auto alloc = load_allocation(e_alloc);
      std::optional<UncertaintySet> set;
      if (!e_set.empty()) set = load_uncertainty_set(e_set);
      const auto scenarios = e_scen.load(common.seed, set ? &*set : nullptr);
      const std::vector<std::string> files{"profit_stats.json", "profits.csv", "manifest.json"};
      out.claim(files);
      const auto stats = batch_evaluate(inst, alloc, scenarios, threads);
      out.write("profit_stats.json", dump_profit_stats(stats));
      out.write("profits.csv", profits_csv(stats));
      json cfg{{"instance", e_instance}, {"allocation", e_alloc}, {"set", e_set}, {"source", e_scen.echo()}};
      out.write("manifest.json", manifest("evaluate", argc, argv, common, cfg, files).dump(2) + "\n");
      std::cout.precision(17);
      std::cout << "mean " << stats.mean << "\nmedian " << stats.median << "\nmin " << stats.min << "\nmax " << stats.max
                << "\n";
      return 0;
    }

    if (*simulate) {
      const auto inst = load_valid_instance(m_instance);
      const auto means = load_means(m_means);
      const std::vector<std::string> files{"kpi_ledger.csv", "kpi_summary.json", "manifest.json"};
      out.claim(files);
      SimulationOptions so;
      so.weeks = m_weeks;
      so.replications = m_replications;
      so.seed = common.seed;
      so.credit_excess = m_credit;
      so.threads = threads;
      std::vector<SimulationSummary> runs;
      for (const auto& p : m_policies) {
        runs.push_back(run_rolling_horizon(inst, means, parse_policy(p, m_flags, m_horizon), so));
        std::cerr << runs.back().policy << ": realized_profit " << runs.back().mean.realized_profit << " +- "
                  << runs.back().std_error.realized_profit << "\n";
      }
      out.write("kpi_ledger.csv", kpi_ledger_csv(runs));
      out.write("kpi_summary.json", dump_kpi_summary(runs));
      json cfg = m_flags.echo();
      cfg.update({{"instance", m_instance}, {"means", m_means}, {"policies", m_policies}, {"weeks", m_weeks},
                  {"replications", m_replications}, {"horizon", m_horizon}, {"credit_excess", m_credit}});
      out.write("manifest.json", manifest("simulate", argc, argv, common, cfg, files).dump(2) + "\n");
      return 0;
    }

    if (*gen) {
      const std::vector<std::string> files{"instance.json", "means.json", "manifest.json"};
      out.claim(files);
      const auto [inst, means] = generate(g, common.seed);
      out.write("instance.json", dump_instance(inst));
      out.write("means.json", dump_means(means));
      json cfg{{"stores", g.stores},       {"dcs", g.dcs},           {"zones", g.zones},
               {"horizon", g.horizon},     {"mean_min", g.mean_min}, {"mean_max", g.mean_max},
               {"online_mean_min", g.online_mean_min}, {"online_mean_max", g.online_mean_max},
               {"price", g.price},         {"penalty", g.penalty},   {"cost_min", g.cost_min},
               {"cost_max", g.cost_max},   {"ship_min", g.ship_min}, {"ship_max", g.ship_max},
               {"lead_time", g.lead_time}, {"name", g.name}};
      out.write("manifest.json", manifest("gen-instance", argc, argv, common, cfg, files).dump(2) + "\n");
      std::cout << (fs::path(common.out) / "instance.json").string() << "\n";
      return 0;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
