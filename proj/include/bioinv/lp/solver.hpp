#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "bioinv/lp/model.hpp"

namespace bioinv::lp {

enum class SolveStatus { optimal, infeasible, unbounded, limit };

const char* to_string(SolveStatus s);

struct SolveLimits {
  double seconds = std::numeric_limits<double>::infinity();
  std::size_t nodes = std::numeric_limits<std::size_t>::max();
  std::size_t iterations = std::numeric_limits<std::size_t>::max();
};

struct SolveOptions {
  SolveLimits limits;
  /// Candidate assignment for the binaries (full-length vector); used as the
  /// first incumbent when it completes to a feasible point.
  std::vector<double> mip_start;
  /// Relative gap at which branch-and-bound stops early (0 = prove optimality).
  double relative_gap = 1e-9;
  /// Soft cap on memory kept in warm-start snapshots of open nodes.
  std::size_t snapshot_bytes = std::size_t{384} << 20;
};

struct SolveStats {
  std::size_t iterations = 0;
  std::size_t nodes = 0;
  double seconds = 0.0;
};

struct Solution {
  SolveStatus status = SolveStatus::limit;
  double objective = std::numeric_limits<double>::quiet_NaN();
  /// Best proven bound in the model's sense (equals objective when optimal).
  double bound = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values;  // empty when no feasible point is known
  SolveStats stats;

  [[nodiscard]] bool has_values() const { return !values.empty(); }
};

class SolverBackend {
 public:
  virtual ~SolverBackend() = default;
  [[nodiscard]] virtual std::string name() const = 0;
  virtual Solution solve(const LinearModel& model, const SolveOptions& options) = 0;
};

/// The in-repo dense simplex plus best-bound branch-and-bound.
class EmbeddedBackend final : public SolverBackend {
 public:
  [[nodiscard]] std::string name() const override { return "embedded-simplex-bb"; }
  Solution solve(const LinearModel& model, const SolveOptions& options) override;
};

/// Solves with the embedded backend.  Throws std::invalid_argument when the
/// model fails LinearModel::check().
Solution solve(const LinearModel& model, const SolveOptions& options = {});

}  // namespace bioinv::lp
