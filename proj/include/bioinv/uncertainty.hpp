#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bioinv/instance.hpp"

namespace bioinv {

enum class Channel { walkin, online };

/// Box and budget bounds of one channel: cells are nodes (walk-in) or zones (online).
struct ChannelBounds {
  Matrix lower;  // [t][cell]
  Matrix upper;  // [t][cell]
  std::vector<double> budget_lower;  // [t]
  std::vector<double> budget_upper;  // [t]
};

struct UncertaintySet {
  ChannelBounds walkin;
  ChannelBounds online;

  [[nodiscard]] const ChannelBounds& channel(Channel c) const {
    return c == Channel::walkin ? walkin : online;
  }
  [[nodiscard]] std::size_t periods() const { return walkin.lower.size(); }
};

struct DemandScenario {
  Matrix walkin;  // [t][l]
  Matrix online;  // [t][z]

  [[nodiscard]] const Matrix& channel(Channel c) const { return c == Channel::walkin ? walkin : online; }
  Matrix& channel(Channel c) { return c == Channel::walkin ? walkin : online; }
  bool operator==(const DemandScenario&) const = default;
};

/// Mean demand per cell, same shape as a scenario.
using DemandMeans = DemandScenario;

enum class SampleFamily { poisson, uniform };

class CapExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bound-consistency problems (negative, crossed, non-integral, empty budget).
std::vector<std::string> check_set(const UncertaintySet& set);

/// Throws std::invalid_argument when the set's shape does not match the instance.
void check_set_matches(const UncertaintySet& set, const Instance& instance);

/// True iff every box and budget inequality holds (tolerance 1e-9).
bool contains(const UncertaintySet& set, const DemandScenario& scenario);

/// Integral points of one channel-period in lexicographic order.
std::vector<std::vector<double>> enumerate_discrete_points(const UncertaintySet& set, Channel channel,
                                                           std::size_t period,
                                                           double cap = 1e7);

/// Extreme points of one channel-period polytope, computed with exact rationals.
/// Bounds must be integral; at most `max_cells` cells.
struct RationalPoint {
  std::vector<std::int64_t> numerator;
  std::vector<std::int64_t> denominator;
  [[nodiscard]] bool integral() const;
  [[nodiscard]] std::vector<double> to_double() const;
};
std::vector<RationalPoint> enumerate_vertices_exact(const UncertaintySet& set, Channel channel,
                                                    std::size_t period, std::size_t max_cells = 6);
std::vector<std::vector<double>> enumerate_vertices(const UncertaintySet& set, Channel channel,
                                                    std::size_t period, std::size_t max_cells = 6);

/// Cross product of all channel-period discrete points, budget filtered.
std::vector<DemandScenario> enumerate_scenarios(const UncertaintySet& set, double cap = 1e6);

/// Independent draws per cell.  `uniform` draws integers on each box and rejects
/// until the budgets hold, which needs `set`.
std::vector<DemandScenario> sample_scenarios(const DemandMeans& means, std::size_t count,
                                             std::uint64_t seed, SampleFamily family,
                                             const UncertaintySet* set = nullptr);

/// Smallest k with P(Poisson(mean) <= k) >= q.
int poisson_quantile(double mean, double q);

UncertaintySet quantile_bounds_from_means(const DemandMeans& means, double lower_q = 0.05,
                                          double upper_q = 0.95);

/// Box lower bounds raised cell by cell (index order) until each budget lower bound holds.
DemandScenario lowest_feasible_scenario(const UncertaintySet& set);

/// Box upper bounds lowered from the last cell backwards until each budget upper bound holds.
DemandScenario highest_feasible_scenario(const UncertaintySet& set);

/// Minimises a linear function of one channel-period demand vector over the set.
/// Exact and integral for integral bounds; ties broken by cell index.
std::vector<double> minimise_linear(const ChannelBounds& bounds, std::size_t period,
                                    const std::vector<double>& cost);

DemandScenario zero_scenario(std::size_t periods, std::size_t nodes, std::size_t zones);

}  // namespace bioinv
