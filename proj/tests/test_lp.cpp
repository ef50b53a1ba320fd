#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bioinv/lp/solver.hpp"

using namespace bioinv::lp;

TEST(Lp, TextbookMaximisation) {
  // max 3x + 5y, x <= 4, 2y <= 12, 3x + 2y <= 18
  LinearModel m;
  m.set_objective_sense(ObjectiveSense::maximize);
  const auto x = m.add_variable("x", 0, kInfinity);
  const auto y = m.add_variable("y", 0, kInfinity);
  m.add_objective(x, 3);
  m.add_objective(y, 5);
  m.add_constraint({{x, 1}}, Sense::less_equal, 4);
  m.add_constraint({{y, 2}}, Sense::less_equal, 12);
  m.add_constraint({{x, 3}, {y, 2}}, Sense::less_equal, 18);
  const auto s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 36.0, 1e-9);
  EXPECT_NEAR(s.values[x], 2.0, 1e-9);
  EXPECT_NEAR(s.values[y], 6.0, 1e-9);
}

TEST(Lp, EqualityAndFreeVariable) {
  // min x - y, x + y = 2, y free with y <= 5, x >= 0
  LinearModel m;
  const auto x = m.add_variable("x", 0, kInfinity);
  const auto y = m.add_variable("y", -kInfinity, 5);
  m.add_objective(x, 1);
  m.add_objective(y, -1);
  m.add_constraint({{x, 1}, {y, 1}}, Sense::equal, 2);
  const auto s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  // x >= 0 caps y at 2
  EXPECT_NEAR(s.objective, -2.0, 1e-9);
  EXPECT_NEAR(s.values[y], 2.0, 1e-9);

  // min y, x + y = 2, x <= 7: the free variable goes negative
  LinearModel n;
  const auto u = n.add_variable("u", 0, 7);
  const auto v = n.add_variable("v", -kInfinity, kInfinity);
  n.add_objective(v, 1);
  n.add_constraint({{u, 1}, {v, 1}}, Sense::equal, 2);
  const auto t = solve(n);
  ASSERT_EQ(t.status, SolveStatus::optimal);
  EXPECT_NEAR(t.objective, -5.0, 1e-9);
}

TEST(Lp, DetectsInfeasibleAndUnbounded) {
  LinearModel a;
  const auto x = a.add_variable("x", 0, kInfinity);
  a.add_constraint({{x, 1}}, Sense::greater_equal, 3);
  a.add_constraint({{x, 1}}, Sense::less_equal, 2);
  EXPECT_EQ(solve(a).status, SolveStatus::infeasible);

  LinearModel b;
  b.set_objective_sense(ObjectiveSense::maximize);
  const auto y = b.add_variable("y", 0, kInfinity);
  b.add_objective(y, 1);
  EXPECT_EQ(solve(b).status, SolveStatus::unbounded);
}

TEST(Lp, ObjectiveConstantAndEvaluate) {
  LinearModel m;
  const auto x = m.add_variable("x", 1, 3);
  m.add_objective(x, 2);
  m.add_objective_constant(10);
  const auto s = solve(m);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 12.0, 1e-12);
  EXPECT_NEAR(m.evaluate(s.values), 12.0, 1e-12);
  EXPECT_NEAR(m.max_violation({5.0}), 2.0, 1e-12);
}

TEST(Lp, CheckRejectsDanglingReference) {
  LinearModel m;
  m.add_variable("x", 0, 1);
  m.add_constraint({{7, 1.0}}, Sense::less_equal, 1);
  EXPECT_FALSE(m.check().empty());
  EXPECT_THROW(solve(m), std::invalid_argument);
}

// Two-variable LPs against vertex enumeration of the feasible polygon.
TEST(Lp, RandomPlanarAgainstVertexEnumeration) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-5, 5), rhs(1, 10);
  for (int k = 0; k < 200; ++k) {
    struct Row { double a, b, r; };
    std::vector<Row> rows{{1, 0, 6}, {0, 1, 6}};  // box keeps it bounded
    for (int i = 0; i < 3; ++i) rows.push_back({coef(rng), coef(rng), rhs(rng)});
    const double cx = coef(rng), cy = coef(rng);
    LinearModel m;
    m.set_objective_sense(ObjectiveSense::maximize);
    const auto x = m.add_variable("x", 0, kInfinity);
    const auto y = m.add_variable("y", 0, kInfinity);
    m.add_objective(x, cx);
    m.add_objective(y, cy);
    for (const auto& r : rows) m.add_constraint({{x, r.a}, {y, r.b}}, Sense::less_equal, r.r);
    // origin is feasible (all rhs > 0), so the optimum is a vertex
    std::vector<Row> lines = rows;
    lines.push_back({1, 0, 0});
    lines.push_back({0, 1, 0});
    double best = 0.0;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      for (std::size_t j = i + 1; j < lines.size(); ++j) {
        const double det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
        if (std::abs(det) < 1e-12) continue;
        const double px = (lines[i].r * lines[j].b - lines[j].r * lines[i].b) / det;
        const double py = (lines[i].a * lines[j].r - lines[j].a * lines[i].r) / det;
        if (px < -1e-9 || py < -1e-9) continue;
        bool ok = true;
        for (const auto& r : rows) ok = ok && r.a * px + r.b * py <= r.r + 1e-9;
        if (ok) best = std::max(best, cx * px + cy * py);
      }
    }
    const auto s = solve(m);
    ASSERT_EQ(s.status, SolveStatus::optimal) << "case " << k;
    EXPECT_NEAR(s.objective, best, 1e-7) << "case " << k;
  }
}

// Binary knapsacks with a side constraint against full enumeration.
TEST(Mip, RandomKnapsackAgainstEnumeration) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> w(1, 20), v(0, 30);
  for (int k = 0; k < 60; ++k) {
    const int n = 10;
    std::vector<int> wt(n), val(n), vol(n);
    for (int i = 0; i < n; ++i) {
      wt[i] = w(rng);
      val[i] = v(rng);
      vol[i] = w(rng);
    }
    const int cap = 45, vcap = 50;
    LinearModel m;
    m.set_objective_sense(ObjectiveSense::maximize);
    std::vector<Term> r1, r2;
    for (int i = 0; i < n; ++i) {
      const auto b = m.add_variable("b" + std::to_string(i), 0, 1, VarKind::binary);
      m.add_objective(b, val[i]);
      r1.push_back({b, static_cast<double>(wt[i])});
      r2.push_back({b, static_cast<double>(vol[i])});
    }
    m.add_constraint(r1, Sense::less_equal, cap);
    m.add_constraint(r2, Sense::less_equal, vcap);
    int best = 0;
    for (int mask = 0; mask < (1 << n); ++mask) {
      int tw = 0, tv = 0, tvol = 0;
      for (int i = 0; i < n; ++i) {
        if (mask >> i & 1) {
          tw += wt[i];
          tv += val[i];
          tvol += vol[i];
        }
      }
      if (tw <= cap && tvol <= vcap) best = std::max(best, tv);
    }
    const auto s = solve(m);
    ASSERT_EQ(s.status, SolveStatus::optimal);
    EXPECT_NEAR(s.objective, best, 1e-7) << "case " << k;
    for (double x : s.values) EXPECT_NEAR(x, std::round(x), 1e-9);
  }
}

TEST(Mip, NodeLimitReportsLimit) {
  LinearModel m;
  m.set_objective_sense(ObjectiveSense::maximize);
  std::vector<Term> row;
  for (int i = 0; i < 25; ++i) {
    const auto b = m.add_variable("b", 0, 1, VarKind::binary);
    m.add_objective(b, 1.0 + 0.01 * i);
    row.push_back({b, 2.0});
  }
  m.add_constraint(row, Sense::less_equal, 25);  // odd rhs: LP bound never integral
  SolveOptions o;
  o.limits.nodes = 1;
  const auto s = solve(m, o);
  EXPECT_EQ(s.status, SolveStatus::limit);
}

TEST(Mip, MipStartIsUsedAsIncumbent) {
  LinearModel m;
  m.set_objective_sense(ObjectiveSense::maximize);
  const auto a = m.add_variable("a", 0, 1, VarKind::binary);
  const auto b = m.add_variable("b", 0, 1, VarKind::binary);
  m.add_objective(a, 2);
  m.add_objective(b, 3);
  m.add_constraint({{a, 1}, {b, 1}}, Sense::less_equal, 1);
  SolveOptions o;
  o.mip_start = {0.0, 1.0};
  const auto s = solve(m, o);
  ASSERT_EQ(s.status, SolveStatus::optimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-12);
}
