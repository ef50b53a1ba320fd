#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace bioinv::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class VarKind { continuous, binary };
enum class Sense { less_equal, equal, greater_equal };
enum class ObjectiveSense { minimize, maximize };

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  VarKind kind = VarKind::continuous;
};

struct Term {
  std::size_t var;
  double coef;
};

struct Constraint {
  std::vector<Term> terms;
  Sense sense = Sense::less_equal;
  double rhs = 0.0;
  std::string name;
};

/// A linear or mixed-binary program in row form.
///
/// Builders append variables and rows; solvers never mutate the model.
/// Duplicate variable references inside one row are summed.
class LinearModel {
 public:
  std::size_t add_variable(std::string name, double lower, double upper,
                           VarKind kind = VarKind::continuous);
  std::size_t add_constraint(std::vector<Term> terms, Sense sense, double rhs,
                             std::string name = {});

  void set_objective_sense(ObjectiveSense sense) { sense_ = sense; }
  void add_objective(std::size_t var, double coef);
  void add_objective_constant(double c) { objective_constant_ += c; }

  void set_bounds(std::size_t var, double lower, double upper);

  [[nodiscard]] std::size_t num_variables() const { return vars_.size(); }
  [[nodiscard]] std::size_t num_constraints() const { return rows_.size(); }
  [[nodiscard]] const Variable& variable(std::size_t j) const { return vars_[j]; }
  [[nodiscard]] const std::vector<Variable>& variables() const { return vars_; }
  [[nodiscard]] const Constraint& constraint(std::size_t i) const { return rows_[i]; }
  [[nodiscard]] const std::vector<Constraint>& constraints() const { return rows_; }
  [[nodiscard]] ObjectiveSense objective_sense() const { return sense_; }
  [[nodiscard]] const std::vector<double>& objective() const { return objective_; }
  [[nodiscard]] double objective_constant() const { return objective_constant_; }

  [[nodiscard]] std::size_t num_binaries() const;

  /// Invariant violations: dangling references, bad bounds, binaries outside [0,1].
  [[nodiscard]] std::vector<std::string> check() const;

  /// Objective value of a full assignment (including the constant).
  [[nodiscard]] double evaluate(const std::vector<double>& values) const;

  /// Largest absolute row/bound violation of an assignment.
  [[nodiscard]] double max_violation(const std::vector<double>& values) const;

 private:
  std::vector<Variable> vars_;
  std::vector<Constraint> rows_;
  std::vector<double> objective_;
  double objective_constant_ = 0.0;
  ObjectiveSense sense_ = ObjectiveSense::minimize;
};

/// Writes the model in CPLEX LP text format (for debugging against external solvers).
std::string to_lp_format(const LinearModel& model);

}  // namespace bioinv::lp
