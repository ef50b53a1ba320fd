#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "bioinv/lp/model.hpp"

namespace bioinv::lp {

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

/// Dense bounded-variable simplex over the rows of a LinearModel.
///
/// Internally the problem is `min c'x  s.t.  A x + s = b,  lo <= (x,s) <= hi`
/// with one logical column per row and artificial columns only for rows
/// whose starting residual falls outside the logical's bounds.  Integrality
/// markers on the model are ignored here.
///
/// Instances are copyable; copies share the immutable row data so a solved
/// tableau can be snapshotted cheaply relative to re-solving.
class BoundedSimplex {
 public:
  explicit BoundedSimplex(const LinearModel& model);

  /// Two-phase primal simplex from the current state.
  LpStatus solve(std::size_t max_iterations);

  /// Tightens or relaxes the bounds of a structural variable.  The basis is kept;
  /// call resolve() afterwards.
  void set_bounds(std::size_t var, double lower, double upper);

  /// Restores optimality after bound changes: dual simplex, then a primal pass.
  /// Falls back to a cold start when the warm basis is unusable.
  LpStatus resolve(std::size_t max_iterations);

  [[nodiscard]] double objective() const;           // in the model's sense, with constant
  [[nodiscard]] std::vector<double> values() const;  // structural variables only
  [[nodiscard]] std::size_t iterations() const { return iterations_; }
  [[nodiscard]] std::size_t memory_bytes() const;
  [[nodiscard]] double lower(std::size_t var) const { return lo_[var]; }
  [[nodiscard]] double upper(std::size_t var) const { return hi_[var]; }

 private:
  struct Rows;  // immutable sparse copy of the model rows

  enum class Where : unsigned char { basic, at_lower, at_upper, free_zero };

  void build_tableau();
  void compute_reduced_costs(const std::vector<double>& cost);
  void refresh_basic_values();
  void pivot(std::size_t row, std::size_t col);
  LpStatus primal_loop(const std::vector<double>& cost, std::size_t max_iterations);
  LpStatus dual_loop(std::size_t max_iterations);
  void drive_out_artificials();
  bool dual_feasible() const;
  bool primal_feasible() const;
  bool can_enter(std::size_t j) const;
  [[nodiscard]] double& at(std::size_t i, std::size_t j) { return tab_[i * cols_ + j]; }
  [[nodiscard]] double at(std::size_t i, std::size_t j) const { return tab_[i * cols_ + j]; }

  std::shared_ptr<const Rows> rows_;
  std::size_t m_ = 0;     // rows
  std::size_t n_ = 0;     // structural columns
  std::size_t cols_ = 0;  // structural + logical + artificial
  std::vector<double> tab_;
  std::vector<double> lo_, hi_, x_, cost_, d_;
  std::vector<std::size_t> basis_;
  std::vector<Where> where_;
  std::vector<std::size_t> init_col_;  // column forming the starting basis of each row
  std::vector<double> init_sign_;
  std::size_t first_artificial_ = 0;
  bool artificials_retired_ = false;
  std::size_t iterations_ = 0;
};

}  // namespace bioinv::lp
