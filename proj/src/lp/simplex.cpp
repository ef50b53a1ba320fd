#include "bioinv/lp/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bioinv::lp {

namespace {

constexpr double kPrimalTol = 1e-9;
constexpr double kDualTol = 1e-9;
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr double kPhaseOneTol = 1e-7;
constexpr std::size_t kRefreshEvery = 64;
constexpr std::size_t kDegenerateBeforeBland = 50;

bool is_finite(double v) { return std::isfinite(v); }

double bound_tol(double bound) { return kPrimalTol * (1.0 + std::abs(bound)); }

}  // namespace

struct BoundedSimplex::Rows {
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<std::vector<Term>> row_terms;  // duplicates merged
  std::vector<std::vector<Term>> col_terms;  // transposed, var field holds the row
  std::vector<double> rhs;
  std::vector<double> cost;  // minimisation form
  double constant = 0.0;
  bool maximize = false;
};

BoundedSimplex::BoundedSimplex(const LinearModel& model) {
  auto rows = std::make_shared<Rows>();
  rows->m = model.num_constraints();
  rows->n = model.num_variables();
  rows->maximize = model.objective_sense() == ObjectiveSense::maximize;
  rows->constant = model.objective_constant();
  rows->cost = model.objective();
  if (rows->maximize) {
    for (auto& c : rows->cost) c = -c;
  }
  rows->row_terms.resize(rows->m);
  rows->col_terms.resize(rows->n);
  rows->rhs.resize(rows->m);
  for (std::size_t i = 0; i < rows->m; ++i) {
    const auto& c = model.constraint(i);
    std::vector<Term> terms = c.terms;
    for (const auto& t : terms) {
      if (t.var >= rows->n) throw std::invalid_argument("constraint references unknown variable");
    }
    std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });
    for (std::size_t k = 0; k < terms.size();) {
      const std::size_t j = terms[k].var;
      double v = 0.0;
      for (; k < terms.size() && terms[k].var == j; ++k) v += terms[k].coef;
      if (v != 0.0) {
        rows->row_terms[i].push_back({j, v});
        rows->col_terms[j].push_back({i, v});
      }
    }
    rows->rhs[i] = c.rhs;
  }
  rows_ = rows;
  m_ = rows->m;
  n_ = rows->n;

  lo_.assign(n_ + m_, 0.0);
  hi_.assign(n_ + m_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    lo_[j] = model.variable(j).lower;
    hi_[j] = model.variable(j).upper;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    switch (model.constraint(i).sense) {
      case Sense::less_equal: lo_[n_ + i] = 0.0; hi_[n_ + i] = kInfinity; break;
      case Sense::greater_equal: lo_[n_ + i] = -kInfinity; hi_[n_ + i] = 0.0; break;
      case Sense::equal: lo_[n_ + i] = 0.0; hi_[n_ + i] = 0.0; break;
    }
  }
  build_tableau();
}

void BoundedSimplex::build_tableau() {
  const Rows& R = *rows_;
  // structural and logical bounds survive a rebuild; artificials are recreated
  lo_.resize(n_ + m_);
  hi_.resize(n_ + m_);
  x_.assign(n_ + m_, 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    if (is_finite(lo_[j])) x_[j] = lo_[j];
    else if (is_finite(hi_[j])) x_[j] = hi_[j];
    else x_[j] = 0.0;
  }
  std::vector<double> residual(R.rhs);
  for (std::size_t i = 0; i < m_; ++i) {
    for (const auto& t : R.row_terms[i]) residual[i] -= t.coef * x_[t.var];
  }
  std::vector<double> art_sign;
  std::vector<std::size_t> art_row;
  init_col_.assign(m_, 0);
  init_sign_.assign(m_, 1.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const double slo = lo_[n_ + i], shi = hi_[n_ + i];
    const double r = residual[i];
    if (r >= slo && r <= shi) {
      x_[n_ + i] = r;
      init_col_[i] = n_ + i;
    } else {
      const double s = std::clamp(r, slo, shi);
      x_[n_ + i] = s;
      const double sign = r - s > 0 ? 1.0 : -1.0;
      art_row.push_back(i);
      art_sign.push_back(sign);
      init_col_[i] = n_ + m_ + art_row.size() - 1;
      init_sign_[i] = sign;
    }
  }
  first_artificial_ = n_ + m_;
  cols_ = n_ + m_ + art_row.size();
  lo_.resize(cols_, 0.0);
  hi_.resize(cols_, kInfinity);
  x_.resize(cols_, 0.0);
  for (std::size_t a = 0; a < art_row.size(); ++a) {
    const std::size_t i = art_row[a];
    x_[first_artificial_ + a] = std::abs(residual[i] - x_[n_ + i]);
  }

  tab_.assign(m_ * cols_, 0.0);
  for (std::size_t i = 0; i < m_; ++i) {
    const double inv = 1.0 / init_sign_[i];
    for (const auto& t : R.row_terms[i]) at(i, t.var) = t.coef * inv;
    at(i, n_ + i) = inv;
  }
  for (std::size_t a = 0; a < art_row.size(); ++a) at(art_row[a], first_artificial_ + a) = 1.0;

  basis_.assign(m_, 0);
  where_.assign(cols_, Where::at_lower);
  for (std::size_t j = 0; j < cols_; ++j) {
    if (is_finite(lo_[j]) && x_[j] == lo_[j]) where_[j] = Where::at_lower;
    else if (is_finite(hi_[j]) && x_[j] == hi_[j]) where_[j] = Where::at_upper;
    else where_[j] = Where::free_zero;
  }
  for (std::size_t i = 0; i < m_; ++i) {
    basis_[i] = init_col_[i];
    where_[init_col_[i]] = Where::basic;
  }
  cost_.assign(cols_, 0.0);
  std::copy(R.cost.begin(), R.cost.end(), cost_.begin());
  d_.assign(cols_, 0.0);
  artificials_retired_ = false;
}

bool BoundedSimplex::can_enter(std::size_t j) const {
  if (where_[j] == Where::basic) return false;
  if (lo_[j] == hi_[j]) return false;
  if (artificials_retired_ && j >= first_artificial_) return false;
  return true;
}

void BoundedSimplex::compute_reduced_costs(const std::vector<double>& cost) {
  d_ = cost;
  for (std::size_t i = 0; i < m_; ++i) {
    const double cb = cost[basis_[i]];
    if (cb == 0.0) continue;
    const double* row = &tab_[i * cols_];
    for (std::size_t k = 0; k < cols_; ++k) d_[k] -= cb * row[k];
  }
  for (std::size_t i = 0; i < m_; ++i) d_[basis_[i]] = 0.0;
}

void BoundedSimplex::refresh_basic_values() {
  const Rows& R = *rows_;
  std::vector<double> r(R.rhs);
  for (std::size_t j = 0; j < n_; ++j) {
    if (where_[j] == Where::basic || x_[j] == 0.0) continue;
    for (const auto& t : R.col_terms[j]) r[t.var] -= t.coef * x_[j];
  }
  for (std::size_t i = 0; i < m_; ++i) {
    if (where_[n_ + i] != Where::basic) r[i] -= x_[n_ + i];
  }
  // artificial a sits in the row whose starting column it is
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t a = init_col_[i];
    if (a >= first_artificial_ && where_[a] != Where::basic) r[i] -= init_sign_[i] * x_[a];
  }
  for (std::size_t i = 0; i < m_; ++i) {
    double v = 0.0;
    const double* row = &tab_[i * cols_];
    for (std::size_t k = 0; k < m_; ++k) {
      if (r[k] != 0.0) v += row[init_col_[k]] / init_sign_[k] * r[k];
    }
    x_[basis_[i]] = v;
  }
}

void BoundedSimplex::pivot(std::size_t r, std::size_t j) {
  double* prow = &tab_[r * cols_];
  const double inv = 1.0 / prow[j];
  std::vector<std::size_t> nz;
  nz.reserve(cols_);
  for (std::size_t k = 0; k < cols_; ++k) {
    if (prow[k] == 0.0) continue;
    prow[k] *= inv;
    if (std::abs(prow[k]) < kDropTol) prow[k] = 0.0;
    else nz.push_back(k);
  }
  prow[j] = 1.0;
  for (std::size_t i = 0; i < m_; ++i) {
    if (i == r) continue;
    double* row = &tab_[i * cols_];
    const double f = row[j];
    if (f == 0.0) continue;
    for (auto k : nz) {
      row[k] -= f * prow[k];
      if (std::abs(row[k]) < kDropTol) row[k] = 0.0;
    }
    row[j] = 0.0;
  }
  const double f = d_[j];
  if (f != 0.0) {
    for (auto k : nz) d_[k] -= f * prow[k];
  }
  d_[j] = 0.0;
  where_[basis_[r]] = Where::at_lower;  // caller fixes the leaving status
  basis_[r] = j;
  where_[j] = Where::basic;
}

LpStatus BoundedSimplex::primal_loop(const std::vector<double>& cost, std::size_t max_iterations) {
  compute_reduced_costs(cost);
  std::size_t degenerate = 0;
  std::size_t since_refresh = 0;
  while (true) {
    if (iterations_ >= max_iterations) return LpStatus::iteration_limit;
    if (since_refresh >= kRefreshEvery) {
      refresh_basic_values();
      compute_reduced_costs(cost);
      since_refresh = 0;
    }
    const bool bland = degenerate > kDegenerateBeforeBland;
    std::size_t enter = cols_;
    double dir = 0.0;
    double best = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!can_enter(j)) continue;
      const double dj = d_[j];
      double score = 0.0;
      double jdir = 0.0;
      if (where_[j] == Where::at_lower && dj < -kDualTol) { score = -dj; jdir = 1.0; }
      else if (where_[j] == Where::at_upper && dj > kDualTol) { score = dj; jdir = -1.0; }
      else if (where_[j] == Where::free_zero && std::abs(dj) > kDualTol) {
        score = std::abs(dj);
        jdir = dj < 0 ? 1.0 : -1.0;
      }
      if (jdir == 0.0) continue;
      if (bland) { enter = j; dir = jdir; break; }
      if (score > best) { best = score; enter = j; dir = jdir; }
    }
    if (enter == cols_) {
      refresh_basic_values();
      return LpStatus::optimal;
    }

    double theta = kInfinity;
    std::size_t leave_row = m_;
    double leave_alpha = 0.0;
    const double span = hi_[enter] - lo_[enter];
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = dir * at(i, enter);
      if (std::abs(a) < kPivotTol) continue;
      const std::size_t b = basis_[i];
      double ratio;
      if (a > 0) {
        if (!is_finite(lo_[b])) continue;
        ratio = std::max(0.0, (x_[b] - lo_[b]) / a);
      } else {
        if (!is_finite(hi_[b])) continue;
        ratio = std::max(0.0, (hi_[b] - x_[b]) / -a);
      }
      bool take = false;
      if (ratio < theta - 1e-12) take = true;
      else if (ratio <= theta + 1e-12 && leave_row < m_) {
        take = bland ? b < basis_[leave_row] : std::abs(a) > std::abs(leave_alpha);
      }
      if (take) { theta = std::min(theta, ratio); leave_row = i; leave_alpha = a; }
    }
    const bool flip = is_finite(span) && span <= theta;
    if (flip) theta = span;
    if (!is_finite(theta)) return LpStatus::unbounded;

    ++iterations_;
    ++since_refresh;
    degenerate = theta <= 1e-12 ? degenerate + 1 : 0;
    if (theta != 0.0) {
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a != 0.0) x_[basis_[i]] -= theta * dir * a;
      }
    }
    if (flip) {
      x_[enter] = dir > 0 ? hi_[enter] : lo_[enter];
      where_[enter] = dir > 0 ? Where::at_upper : Where::at_lower;
      continue;
    }
    const std::size_t leaving = basis_[leave_row];
    const double entering_value = x_[enter] + theta * dir;
    pivot(leave_row, enter);
    x_[enter] = entering_value;
    if (leave_alpha > 0) { x_[leaving] = lo_[leaving]; where_[leaving] = Where::at_lower; }
    else { x_[leaving] = hi_[leaving]; where_[leaving] = Where::at_upper; }
    if (lo_[leaving] == hi_[leaving]) where_[leaving] = Where::at_lower;
  }
}

void BoundedSimplex::drive_out_artificials() {
  for (std::size_t r = 0; r < m_; ++r) {
    if (basis_[r] < first_artificial_) continue;
    std::size_t best = cols_;
    double best_abs = 1e-7;
    for (std::size_t k = 0; k < first_artificial_; ++k) {
      if (where_[k] == Where::basic) continue;
      const double a = std::abs(at(r, k));
      if (a > best_abs) { best_abs = a; best = k; }
    }
    if (best == cols_) continue;  // redundant row; the artificial stays basic at zero
    const std::size_t leaving = basis_[r];
    const double theta = x_[leaving] / at(r, best);  // essentially zero after phase one
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, best);
      if (a != 0.0 && i != r) x_[basis_[i]] -= theta * a;
    }
    const double v = x_[best] + theta;
    pivot(r, best);
    x_[best] = v;
    x_[leaving] = 0.0;
    where_[leaving] = Where::at_lower;
  }
  for (std::size_t j = first_artificial_; j < cols_; ++j) {
    lo_[j] = 0.0;
    hi_[j] = 0.0;
    if (where_[j] != Where::basic) x_[j] = 0.0;
  }
  artificials_retired_ = true;
}

LpStatus BoundedSimplex::solve(std::size_t max_iterations) {
  build_tableau();
  if (cols_ > first_artificial_) {
    std::vector<double> phase1(cols_, 0.0);
    for (std::size_t j = first_artificial_; j < cols_; ++j) phase1[j] = 1.0;
    const LpStatus st = primal_loop(phase1, max_iterations);
    if (st == LpStatus::iteration_limit) return st;
    double infeas = 0.0;
    for (std::size_t j = first_artificial_; j < cols_; ++j) infeas += x_[j];
    double scale = 1.0;
    for (double b : rows_->rhs) scale = std::max(scale, std::abs(b));
    if (infeas > kPhaseOneTol * scale) return LpStatus::infeasible;
  }
  drive_out_artificials();
  return primal_loop(cost_, max_iterations);
}

void BoundedSimplex::set_bounds(std::size_t var, double lower, double upper) {
  if (var >= n_) throw std::out_of_range("set_bounds on unknown variable");
  lo_[var] = lower;
  hi_[var] = upper;
  if (where_[var] == Where::basic) return;
  double v;
  Where w;
  if (lower == upper) { v = lower; w = Where::at_lower; }
  else if (where_[var] == Where::at_lower && is_finite(lower)) { v = lower; w = Where::at_lower; }
  else if (where_[var] == Where::at_upper && is_finite(upper)) { v = upper; w = Where::at_upper; }
  else if (is_finite(lower)) { v = lower; w = Where::at_lower; }
  else if (is_finite(upper)) { v = upper; w = Where::at_upper; }
  else { v = 0.0; w = Where::free_zero; }
  const double delta = v - x_[var];
  if (delta != 0.0) {
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, var);
      if (a != 0.0) x_[basis_[i]] -= a * delta;
    }
  }
  x_[var] = v;
  where_[var] = w;
}

bool BoundedSimplex::dual_feasible() const {
  for (std::size_t j = 0; j < cols_; ++j) {
    if (!can_enter(j)) continue;
    if (where_[j] == Where::at_lower && d_[j] < -kDualTol) return false;
    if (where_[j] == Where::at_upper && d_[j] > kDualTol) return false;
    if (where_[j] == Where::free_zero && std::abs(d_[j]) > kDualTol) return false;
  }
  return true;
}

bool BoundedSimplex::primal_feasible() const {
  for (std::size_t i = 0; i < m_; ++i) {
    const std::size_t b = basis_[i];
    if (x_[b] < lo_[b] - bound_tol(lo_[b])) return false;
    if (x_[b] > hi_[b] + bound_tol(hi_[b])) return false;
  }
  return true;
}

LpStatus BoundedSimplex::dual_loop(std::size_t max_iterations) {
  std::size_t since_refresh = 0;
  while (true) {
    if (iterations_ >= max_iterations) return LpStatus::iteration_limit;
    if (since_refresh >= kRefreshEvery) {
      refresh_basic_values();
      compute_reduced_costs(cost_);
      since_refresh = 0;
    }
    std::size_t r = m_;
    double worst = 0.0;
    double target = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t b = basis_[i];
      const double below = lo_[b] - x_[b];
      const double above = x_[b] - hi_[b];
      if (below > bound_tol(lo_[b]) && below > worst) { worst = below; r = i; target = lo_[b]; }
      if (above > bound_tol(hi_[b]) && above > worst) { worst = above; r = i; target = hi_[b]; }
    }
    if (r == m_) return LpStatus::optimal;
    const std::size_t leaving = basis_[r];
    const bool increase = target == lo_[leaving] && x_[leaving] < target;

    std::size_t enter = cols_;
    double best_ratio = kInfinity;
    double best_abs = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) {
      if (!can_enter(j)) continue;
      const double a = at(r, j);
      if (std::abs(a) < kPivotTol) continue;
      bool ok = false;
      if (where_[j] == Where::free_zero) ok = true;
      else if (where_[j] == Where::at_lower) ok = increase ? a < 0 : a > 0;
      else if (where_[j] == Where::at_upper) ok = increase ? a > 0 : a < 0;
      if (!ok) continue;
      const double ratio = std::abs(d_[j]) / std::abs(a);
      if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::abs(a) > best_abs)) {
        best_ratio = std::min(best_ratio, ratio);
        best_abs = std::abs(a);
        enter = j;
      }
    }
    if (enter == cols_) return LpStatus::infeasible;

    ++iterations_;
    ++since_refresh;
    const double delta = (x_[leaving] - target) / at(r, enter);
    for (std::size_t i = 0; i < m_; ++i) {
      const double a = at(i, enter);
      if (a != 0.0) x_[basis_[i]] -= a * delta;
    }
    const double v = x_[enter] + delta;
    pivot(r, enter);
    x_[enter] = v;
    x_[leaving] = target;
    where_[leaving] = target == lo_[leaving] ? Where::at_lower : Where::at_upper;
  }
}

LpStatus BoundedSimplex::resolve(std::size_t max_iterations) {
  if (!artificials_retired_) return solve(max_iterations);
  refresh_basic_values();
  if (primal_feasible()) {
    const LpStatus st = primal_loop(cost_, max_iterations);
    if (st != LpStatus::iteration_limit) return st;
    return st;
  }
  compute_reduced_costs(cost_);
  if (dual_feasible()) {
    const LpStatus st = dual_loop(max_iterations);
    if (st == LpStatus::infeasible) return st;
    if (st == LpStatus::optimal) {
      refresh_basic_values();
      if (primal_feasible()) return primal_loop(cost_, max_iterations);
    }
    if (st == LpStatus::iteration_limit && iterations_ >= max_iterations) return st;
  }
  return solve(max_iterations);
}

double BoundedSimplex::objective() const {
  double z = 0.0;
  for (std::size_t j = 0; j < n_; ++j) z += rows_->cost[j] * x_[j];
  if (rows_->maximize) z = -z;
  return z + rows_->constant;
}

std::vector<double> BoundedSimplex::values() const {
  std::vector<double> v(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
  for (std::size_t j = 0; j < n_; ++j) {
    // basic values may carry round-off past a bound
    if (is_finite(lo_[j]) && v[j] < lo_[j] && v[j] > lo_[j] - 1e-9) v[j] = lo_[j];
    if (is_finite(hi_[j]) && v[j] > hi_[j] && v[j] < hi_[j] + 1e-9) v[j] = hi_[j];
  }
  return v;
}

std::size_t BoundedSimplex::memory_bytes() const {
  return sizeof(*this) + tab_.size() * sizeof(double) +
         (lo_.size() + hi_.size() + x_.size() + cost_.size() + d_.size()) * sizeof(double) +
         basis_.size() * sizeof(std::size_t) + where_.size();
}

}  // namespace bioinv::lp
