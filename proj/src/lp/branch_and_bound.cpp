#include "bioinv/lp/branch_and_bound.hpp"

#include <chrono>
#include <cmath>
#include <queue>
#include <utility>

#include "bioinv/lp/simplex.hpp"

namespace bioinv::lp {

namespace {

constexpr double kIntegralityTol = 1e-6;

using Clock = std::chrono::steady_clock;

struct Node {
  double bound = 0.0;  // minimisation form
  std::size_t id = 0;
  std::shared_ptr<const BoundedSimplex> warm;
  std::vector<std::pair<std::size_t, double>> fixes;
};

struct NodeOrder {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

class Search {
 public:
  Search(const LinearModel& model, const SolveOptions& options)
      : model_(model), options_(options), start_(Clock::now()) {
    sign_ = model.objective_sense() == ObjectiveSense::maximize ? -1.0 : 1.0;
    for (std::size_t j = 0; j < model.num_variables(); ++j) {
      if (model.variable(j).kind == VarKind::binary) binaries_.push_back(j);
    }
  }

  Solution run();

 private:
  double elapsed() const {
    return std::chrono::duration<double>(Clock::now() - start_).count();
  }
  bool out_of_budget() const {
    return nodes_ >= options_.limits.nodes || iterations_ >= options_.limits.iterations ||
           elapsed() >= options_.limits.seconds;
  }
  std::size_t iteration_budget() const {
    const auto cap = options_.limits.iterations;
    return cap == std::numeric_limits<std::size_t>::max() ? cap : cap - std::min(cap, iterations_);
  }
  // branching candidate: most fractional binary, lowest index on ties; npos when integral
  std::size_t pick_branch(const std::vector<double>& x) const {
    std::size_t best = npos;
    double best_frac = kIntegralityTol;
    for (auto j : binaries_) {
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f > best_frac + 1e-12) { best_frac = f; best = j; }
    }
    return best;
  }
  void offer(double min_obj, std::vector<double> x) {
    if (has_incumbent_ && min_obj >= incumbent_ - 1e-12 * (1.0 + std::abs(incumbent_))) return;
    for (auto j : binaries_) x[j] = std::round(x[j]);
    incumbent_ = min_obj;
    incumbent_x_ = std::move(x);
    has_incumbent_ = true;
  }
  bool prunable(double bound) const {
    if (!has_incumbent_) return false;
    const double tol = 1e-9 * (1.0 + std::abs(incumbent_));
    if (bound >= incumbent_ - tol) return true;
    return incumbent_ - bound <= options_.relative_gap * std::max(1.0, std::abs(incumbent_));
  }
  LpStatus reoptimise(BoundedSimplex& lp) {
    const std::size_t before = lp.iterations();
    const std::size_t budget = iteration_budget();
    const std::size_t cap = budget > std::numeric_limits<std::size_t>::max() - before
                                ? std::numeric_limits<std::size_t>::max()
                                : before + budget;
    const LpStatus st = lp.resolve(cap);
    iterations_ += lp.iterations() - before;
    return st;
  }
  void try_mip_start(const BoundedSimplex& root);
  void dive(const BoundedSimplex& root);
  Solution polish(Solution sol) const;

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  const LinearModel& model_;
  const SolveOptions& options_;
  Clock::time_point start_;
  double sign_ = 1.0;
  std::vector<std::size_t> binaries_;
  bool has_incumbent_ = false;
  double incumbent_ = 0.0;
  std::vector<double> incumbent_x_;
  std::size_t nodes_ = 0;
  std::size_t iterations_ = 0;
};

void Search::try_mip_start(const BoundedSimplex& root) {
  if (options_.mip_start.size() != model_.num_variables()) return;
  BoundedSimplex lp(root);
  for (auto j : binaries_) {
    const double v = std::round(std::clamp(options_.mip_start[j], 0.0, 1.0));
    if (v < root.lower(j) || v > root.upper(j)) return;
    lp.set_bounds(j, v, v);
  }
  if (reoptimise(lp) != LpStatus::optimal) return;
  offer(sign_ * lp.objective(), lp.values());
}

// Rounds the least fractional binary and re-solves until integral or infeasible.
void Search::dive(const BoundedSimplex& root) {
  BoundedSimplex lp(root);
  for (std::size_t depth = 0; depth <= binaries_.size(); ++depth) {
    if (out_of_budget()) return;
    const auto x = lp.values();
    std::size_t pick = npos;
    double pick_frac = 1.0;
    for (auto j : binaries_) {
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f > kIntegralityTol && f < pick_frac - 1e-12) { pick_frac = f; pick = j; }
    }
    if (pick == npos) {
      offer(sign_ * lp.objective(), x);
      return;
    }
    const double v = std::round(x[pick]);
    lp.set_bounds(pick, v, v);
    if (reoptimise(lp) != LpStatus::optimal) return;
    if (prunable(sign_ * lp.objective())) return;
  }
}

Solution Search::polish(Solution sol) const {
  if (binaries_.empty() || sol.values.empty()) return sol;
  LinearModel fixed = model_;
  for (auto j : binaries_) {
    const double v = std::round(sol.values[j]);
    fixed.set_bounds(j, v, v);
  }
  BoundedSimplex lp(fixed);
  if (lp.solve(std::numeric_limits<std::size_t>::max()) == LpStatus::optimal) {
    sol.values = lp.values();
    for (auto j : binaries_) sol.values[j] = std::round(sol.values[j]);
    sol.objective = model_.evaluate(sol.values);
  }
  return sol;
}

Solution Search::run() {
  Solution out;
  auto root = std::make_shared<BoundedSimplex>(model_);
  const LpStatus root_status = root->solve(iteration_budget());
  iterations_ += root->iterations();
  nodes_ = 1;
  if (root_status == LpStatus::infeasible) {
    out.status = SolveStatus::infeasible;
  } else if (root_status == LpStatus::unbounded) {
    out.status = SolveStatus::unbounded;
  } else if (root_status == LpStatus::iteration_limit) {
    out.status = SolveStatus::limit;
  }
  if (root_status != LpStatus::optimal) {
    out.stats = {iterations_, nodes_, elapsed()};
    return out;
  }

  const double root_bound = sign_ * root->objective();
  double global_bound = root_bound;
  std::shared_ptr<const BoundedSimplex> root_snapshot = root;
  bool exhausted = true;

  if (binaries_.empty()) {
    offer(root_bound, root->values());
  } else {
    try_mip_start(*root);
    if (pick_branch(root->values()) == npos) offer(root_bound, root->values());
    else dive(*root);

    std::priority_queue<Node, std::vector<Node>, NodeOrder> open;
    std::size_t next_id = 0;
    std::size_t live_snapshots = 0;
    const std::size_t snapshot_size = root->memory_bytes();
    open.push(Node{root_bound, next_id++, root_snapshot, {}});
    ++live_snapshots;
    bool first = true;

    while (!open.empty()) {
      if (!first && out_of_budget()) { exhausted = false; break; }
      Node node = open.top();
      open.pop();
      if (node.warm) --live_snapshots;
      global_bound = node.bound;
      if (prunable(node.bound)) {
        // best-bound order: everything left is at least as bad
        while (!open.empty()) open.pop();
        global_bound = has_incumbent_ ? incumbent_ : node.bound;
        break;
      }
      std::shared_ptr<BoundedSimplex> lp;
      if (first) {
        lp = root;
      } else {
        ++nodes_;
        lp = std::make_shared<BoundedSimplex>(node.warm ? *node.warm : *root_snapshot);
        for (const auto& [j, v] : node.fixes) lp->set_bounds(j, v, v);
        const LpStatus st = reoptimise(*lp);
        if (st == LpStatus::iteration_limit) { exhausted = false; open.push(node); break; }
        if (st != LpStatus::optimal) continue;
      }
      first = false;
      const double value = sign_ * lp->objective();
      if (prunable(value)) continue;
      const auto x = lp->values();
      const std::size_t j = pick_branch(x);
      if (j == npos) {
        offer(value, x);
        continue;
      }
      std::shared_ptr<const BoundedSimplex> keep;
      if ((live_snapshots + 2) * snapshot_size <= options_.snapshot_bytes) {
        keep = lp;
        live_snapshots += 2;
      }
      const double up_first = x[j] >= 0.5 ? 1.0 : 0.0;
      for (double v : {up_first, 1.0 - up_first}) {
        Node child{value, next_id++, keep, node.fixes};
        child.fixes.emplace_back(j, v);
        open.push(std::move(child));
      }
    }
    if (!open.empty()) {
      global_bound = open.top().bound;
      exhausted = false;
    } else if (exhausted) {
      global_bound = has_incumbent_ ? incumbent_ : global_bound;
    }
  }

  out.stats = {iterations_, nodes_, elapsed()};
  if (has_incumbent_) {
    out.values = incumbent_x_;
    out.objective = sign_ * incumbent_;
  }
  if (exhausted) {
    out.status = has_incumbent_ ? SolveStatus::optimal : SolveStatus::infeasible;
    out.bound = out.objective;
  } else {
    out.status = SolveStatus::limit;
    out.bound = sign_ * std::min(global_bound, has_incumbent_ ? incumbent_ : global_bound);
  }
  if (out.status == SolveStatus::optimal || out.status == SolveStatus::limit) {
    out = polish(std::move(out));
    if (out.status == SolveStatus::optimal) out.bound = out.objective;
  }
  return out;
}

}  // namespace

Solution branch_and_bound(const LinearModel& model, const SolveOptions& options) {
  Search search(model, options);
  return search.run();
}

}  // namespace bioinv::lp
