#include "bioinv/lp/solver.hpp"

#include <stdexcept>

#include "bioinv/lp/branch_and_bound.hpp"

namespace bioinv::lp {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::optimal: return "optimal";
    case SolveStatus::infeasible: return "infeasible";
    case SolveStatus::unbounded: return "unbounded";
    case SolveStatus::limit: return "limit";
  }
  return "unknown";
}

Solution EmbeddedBackend::solve(const LinearModel& model, const SolveOptions& options) {
  const auto issues = model.check();
  if (!issues.empty()) throw std::invalid_argument("invalid model: " + issues.front());
  return branch_and_bound(model, options);
}

Solution solve(const LinearModel& model, const SolveOptions& options) {
  EmbeddedBackend backend;
  return backend.solve(model, options);
}

}  // namespace bioinv::lp
