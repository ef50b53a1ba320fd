#include "bioinv/lp/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace bioinv::lp {

std::size_t LinearModel::add_variable(std::string name, double lower, double upper,
                                      VarKind kind) {
  vars_.push_back(Variable{std::move(name), lower, upper, kind});
  objective_.push_back(0.0);
  return vars_.size() - 1;
}

std::size_t LinearModel::add_constraint(std::vector<Term> terms, Sense sense, double rhs,
                                        std::string name) {
  rows_.push_back(Constraint{std::move(terms), sense, rhs, std::move(name)});
  return rows_.size() - 1;
}

void LinearModel::add_objective(std::size_t var, double coef) {
  if (var >= objective_.size()) throw std::out_of_range("objective term references unknown variable");
  objective_[var] += coef;
}

void LinearModel::set_bounds(std::size_t var, double lower, double upper) {
  vars_.at(var).lower = lower;
  vars_.at(var).upper = upper;
}

std::size_t LinearModel::num_binaries() const {
  return static_cast<std::size_t>(std::count_if(
      vars_.begin(), vars_.end(), [](const Variable& v) { return v.kind == VarKind::binary; }));
}

std::vector<std::string> LinearModel::check() const {
  std::vector<std::string> issues;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    const auto& v = vars_[j];
    if (std::isnan(v.lower) || std::isnan(v.upper) || v.lower > v.upper) {
      issues.push_back("variable " + v.name + " has inconsistent bounds");
    }
    if (v.kind == VarKind::binary && (v.lower < 0.0 || v.upper > 1.0)) {
      issues.push_back("binary variable " + v.name + " has bounds outside [0,1]");
    }
  }
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    for (const auto& t : rows_[i].terms) {
      if (t.var >= vars_.size()) {
        issues.push_back("constraint " + std::to_string(i) + " references unknown variable " +
                         std::to_string(t.var));
      } else if (!std::isfinite(t.coef)) {
        issues.push_back("constraint " + std::to_string(i) + " has a non-finite coefficient");
      }
    }
    if (!std::isfinite(rows_[i].rhs)) {
      issues.push_back("constraint " + std::to_string(i) + " has a non-finite right-hand side");
    }
  }
  return issues;
}

double LinearModel::evaluate(const std::vector<double>& values) const {
  double z = objective_constant_;
  for (std::size_t j = 0; j < vars_.size(); ++j) z += objective_[j] * values.at(j);
  return z;
}

double LinearModel::max_violation(const std::vector<double>& values) const {
  double worst = 0.0;
  for (std::size_t j = 0; j < vars_.size(); ++j) {
    worst = std::max(worst, vars_[j].lower - values[j]);
    worst = std::max(worst, values[j] - vars_[j].upper);
  }
  for (const auto& row : rows_) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coef * values[t.var];
    switch (row.sense) {
      case Sense::less_equal: worst = std::max(worst, lhs - row.rhs); break;
      case Sense::greater_equal: worst = std::max(worst, row.rhs - lhs); break;
      case Sense::equal: worst = std::max(worst, std::abs(lhs - row.rhs)); break;
    }
  }
  return worst;
}

namespace {

std::string lp_name(const LinearModel& m, std::size_t j) {
  std::string n = m.variable(j).name.empty() ? "v" + std::to_string(j) : m.variable(j).name;
  for (auto& ch : n) {
    if (ch == '[' || ch == ']' || ch == ',' || ch == ' ' || ch == ':') ch = '_';
  }
  return n + "_" + std::to_string(j);
}

void write_expr(std::ostringstream& os, const LinearModel& m, const std::vector<Term>& terms) {
  bool first = true;
  for (const auto& t : terms) {
    if (t.coef == 0.0) continue;
    os << (t.coef < 0 ? " - " : (first ? " " : " + ")) << std::abs(t.coef) << ' ' << lp_name(m, t.var);
    first = false;
  }
  if (first) os << " 0 " << (m.num_variables() ? lp_name(m, 0) : std::string("dummy"));
}

}  // namespace

std::string to_lp_format(const LinearModel& model) {
  std::ostringstream os;
  os.precision(17);
  os << (model.objective_sense() == ObjectiveSense::maximize ? "Maximize\n" : "Minimize\n");
  std::vector<Term> obj;
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    if (model.objective()[j] != 0.0) obj.push_back({j, model.objective()[j]});
  }
  os << " obj:";
  write_expr(os, model, obj);
  if (model.objective_constant() != 0.0) {
    os << (model.objective_constant() < 0 ? " - " : " + ") << std::abs(model.objective_constant());
  }
  os << "\nSubject To\n";
  for (std::size_t i = 0; i < model.num_constraints(); ++i) {
    const auto& row = model.constraint(i);
    os << " c" << i << ':';
    write_expr(os, model, row.terms);
    os << (row.sense == Sense::less_equal ? " <= " : row.sense == Sense::equal ? " = " : " >= ")
       << row.rhs << '\n';
  }
  os << "Bounds\n";
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    const auto& v = model.variable(j);
    if (v.kind == VarKind::binary && v.lower == 0.0 && v.upper == 1.0) continue;
    const std::string n = lp_name(model, j);
    if (std::isinf(v.lower) && std::isinf(v.upper)) {
      os << ' ' << n << " free\n";
    } else if (v.lower == v.upper) {
      os << ' ' << n << " = " << v.lower << '\n';
    } else {
      os << ' ';
      if (std::isinf(v.lower)) os << "-inf"; else os << v.lower;
      os << " <= " << n << " <= ";
      if (std::isinf(v.upper)) os << "+inf"; else os << v.upper;
      os << '\n';
    }
  }
  bool any_bin = false;
  for (std::size_t j = 0; j < model.num_variables(); ++j) {
    if (model.variable(j).kind != VarKind::binary) continue;
    if (!any_bin) os << "Binaries\n";
    any_bin = true;
    os << ' ' << lp_name(model, j) << '\n';
  }
  os << "End\n";
  return os.str();
}

}  // namespace bioinv::lp
