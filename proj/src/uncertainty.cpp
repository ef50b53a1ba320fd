#include "bioinv/uncertainty.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <boost/math/distributions/poisson.hpp>
#include <boost/rational.hpp>

namespace bioinv {

namespace {

constexpr double kTol = 1e-9;

bool is_integral(double v) { return std::abs(v - std::round(v)) <= kTol; }

double row_sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

void check_channel(const ChannelBounds& b, const std::string& name, std::vector<std::string>& out) {
  const std::size_t T = b.lower.size();
  if (b.upper.size() != T || b.budget_lower.size() != T || b.budget_upper.size() != T) {
    out.push_back(name + ": bound arrays disagree on the number of periods");
    return;
  }
  for (std::size_t t = 0; t < T; ++t) {
    if (b.lower[t].size() != b.upper[t].size()) {
      out.push_back(name + ": lower/upper cell counts differ at t=" + std::to_string(t));
      continue;
    }
    for (std::size_t i = 0; i < b.lower[t].size(); ++i) {
      const double lo = b.lower[t][i], hi = b.upper[t][i];
      std::ostringstream at;
      at << name << "[t=" << t << "][" << i << "]";
      if (lo < 0) out.push_back(at.str() + ": negative lower bound");
      if (lo > hi) out.push_back(at.str() + ": lower bound exceeds upper bound");
      if (!is_integral(lo) || !is_integral(hi)) out.push_back(at.str() + ": non-integral bound");
    }
    const double bl = b.budget_lower[t], bu = b.budget_upper[t];
    std::ostringstream at;
    at << name << " budget[t=" << t << "]";
    if (bl < 0 || bl > bu) out.push_back(at.str() + ": invalid budget interval");
    if (!is_integral(bl) || !is_integral(bu)) out.push_back(at.str() + ": non-integral budget");
    if (row_sum(b.lower[t]) > bu + kTol) out.push_back(at.str() + ": box lower bounds exceed budget upper bound");
    if (row_sum(b.upper[t]) < bl - kTol) out.push_back(at.str() + ": box upper bounds cannot reach budget lower bound");
  }
}

using Rat = boost::rational<std::int64_t>;

// Solves the square system in place; false when singular.
bool solve_exact(std::vector<std::vector<Rat>> a, std::vector<Rat> b, std::vector<Rat>& x) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = n;
    for (std::size_t r = c; r < n; ++r) {
      if (a[r][c] != Rat(0)) { p = r; break; }
    }
    if (p == n) return false;
    std::swap(a[p], a[c]);
    std::swap(b[p], b[c]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == Rat(0)) continue;
      const Rat f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  x.resize(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

}  // namespace

std::vector<std::string> check_set(const UncertaintySet& set) {
  std::vector<std::string> out;
  check_channel(set.walkin, "walkin", out);
  check_channel(set.online, "online", out);
  if (set.walkin.lower.size() != set.online.lower.size()) {
    out.push_back("walk-in and online bounds cover different horizons");
  }
  return out;
}

void check_set_matches(const UncertaintySet& set, const Instance& inst) {
  const std::size_t T = inst.periods();
  auto shape = [&](const ChannelBounds& b, std::size_t cells, const char* name) {
    if (b.lower.size() != T || b.upper.size() != T || b.budget_lower.size() != T ||
        b.budget_upper.size() != T) {
      throw std::invalid_argument(std::string(name) + " bounds do not cover the instance horizon");
    }
    for (std::size_t t = 0; t < T; ++t) {
      if (b.lower[t].size() != cells || b.upper[t].size() != cells) {
        throw std::invalid_argument(std::string(name) + " bounds do not match the instance cells");
      }
    }
  };
  shape(set.walkin, inst.num_nodes(), "walk-in");
  shape(set.online, inst.num_zones(), "online");
}

bool contains(const UncertaintySet& set, const DemandScenario& s) {
  for (Channel c : {Channel::walkin, Channel::online}) {
    const auto& b = set.channel(c);
    const auto& d = s.channel(c);
    if (d.size() != b.lower.size()) throw std::invalid_argument("scenario horizon does not match the set");
    for (std::size_t t = 0; t < d.size(); ++t) {
      if (d[t].size() != b.lower[t].size()) throw std::invalid_argument("scenario cells do not match the set");
      double sum = 0.0;
      for (std::size_t i = 0; i < d[t].size(); ++i) {
        if (d[t][i] < b.lower[t][i] - kTol || d[t][i] > b.upper[t][i] + kTol) return false;
        sum += d[t][i];
      }
      if (sum < b.budget_lower[t] - kTol || sum > b.budget_upper[t] + kTol) return false;
    }
  }
  return true;
}

std::vector<std::vector<double>> enumerate_discrete_points(const UncertaintySet& set, Channel channel,
                                                           std::size_t period, double cap) {
  const auto& b = set.channel(channel);
  const auto& lo = b.lower.at(period);
  const auto& hi = b.upper.at(period);
  const std::size_t n = lo.size();
  double size = 1.0;
  std::vector<long> low(n), high(n);
  for (std::size_t i = 0; i < n; ++i) {
    low[i] = std::lround(std::ceil(lo[i] - kTol));
    high[i] = std::lround(std::floor(hi[i] + kTol));
    if (high[i] < low[i]) return {};
    size *= static_cast<double>(high[i] - low[i] + 1);
  }
  if (size > cap) {
    std::ostringstream os;
    os << "enumeration of " << size << " box points exceeds the cap of " << cap;
    throw CapExceeded(os.str());
  }
  std::vector<std::vector<double>> out;
  std::vector<long> cur(low);
  const double bl = b.budget_lower.at(period), bu = b.budget_upper.at(period);
  while (true) {
    const double sum = static_cast<double>(std::accumulate(cur.begin(), cur.end(), 0L));
    if (sum >= bl - kTol && sum <= bu + kTol) out.emplace_back(cur.begin(), cur.end());
    // odometer with the last cell fastest gives lexicographic order
    std::size_t i = n;
    while (i > 0) {
      --i;
      if (cur[i] < high[i]) { ++cur[i]; break; }
      cur[i] = low[i];
      if (i == 0) return out;
    }
    if (n == 0) return out;
  }
}

bool RationalPoint::integral() const {
  return std::all_of(denominator.begin(), denominator.end(), [](std::int64_t d) { return d == 1; });
}

std::vector<double> RationalPoint::to_double() const {
  std::vector<double> v(numerator.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = static_cast<double>(numerator[i]) / static_cast<double>(denominator[i]);
  }
  return v;
}

std::vector<RationalPoint> enumerate_vertices_exact(const UncertaintySet& set, Channel channel,
                                                    std::size_t period, std::size_t max_cells) {
  const auto& b = set.channel(channel);
  const auto& lo = b.lower.at(period);
  const auto& hi = b.upper.at(period);
  const std::size_t n = lo.size();
  if (n > max_cells) {
    throw CapExceeded("vertex enumeration limited to " + std::to_string(max_cells) + " cells, got " +
                      std::to_string(n));
  }
  auto to_int = [](double v) {
    if (!is_integral(v)) throw std::invalid_argument("vertex enumeration needs integral bounds");
    return static_cast<std::int64_t>(std::llround(v));
  };
  // rows: D_i = lo_i, D_i = hi_i, sum = BL, sum = BU
  std::vector<std::vector<Rat>> rows;
  std::vector<Rat> rhs;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rat> r(n, Rat(0));
    r[i] = 1;
    rows.push_back(r);
    rhs.emplace_back(to_int(lo[i]));
    rows.push_back(r);
    rhs.emplace_back(to_int(hi[i]));
  }
  rows.emplace_back(n, Rat(1));
  rhs.emplace_back(to_int(b.budget_lower.at(period)));
  rows.emplace_back(n, Rat(1));
  rhs.emplace_back(to_int(b.budget_upper.at(period)));

  auto feasible = [&](const std::vector<Rat>& x) {
    Rat sum(0);
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] < rhs[2 * i] || x[i] > rhs[2 * i + 1]) return false;
      sum += x[i];
    }
    return sum >= rhs[2 * n] && sum <= rhs[2 * n + 1];
  };

  std::vector<std::vector<Rat>> found;
  const std::size_t m = rows.size();
  std::vector<std::size_t> pick(n);
  std::iota(pick.begin(), pick.end(), 0);
  if (n == 0) {
    if (feasible({})) return {RationalPoint{}};
    return {};
  }
  while (true) {
    std::vector<std::vector<Rat>> a;
    std::vector<Rat> r;
    for (auto k : pick) {
      a.push_back(rows[k]);
      r.push_back(rhs[k]);
    }
    std::vector<Rat> x;
    if (solve_exact(a, r, x) && feasible(x) && std::find(found.begin(), found.end(), x) == found.end()) {
      found.push_back(x);
    }
    // next n-combination of m rows
    std::size_t i = n;
    while (i > 0 && pick[i - 1] == m - n + (i - 1)) --i;
    if (i == 0) break;
    ++pick[i - 1];
    for (std::size_t k = i; k < n; ++k) pick[k] = pick[k - 1] + 1;
  }
  std::sort(found.begin(), found.end());
  std::vector<RationalPoint> out;
  for (const auto& x : found) {
    RationalPoint p;
    for (const auto& v : x) {
      p.numerator.push_back(v.numerator());
      p.denominator.push_back(v.denominator());
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::vector<std::vector<double>> enumerate_vertices(const UncertaintySet& set, Channel channel,
                                                    std::size_t period, std::size_t max_cells) {
  std::vector<std::vector<double>> out;
  for (const auto& p : enumerate_vertices_exact(set, channel, period, max_cells)) out.push_back(p.to_double());
  return out;
}

std::vector<DemandScenario> enumerate_scenarios(const UncertaintySet& set, double cap) {
  const std::size_t T = set.periods();
  // blocks: (channel, period) in order walk-in t0.., online t0..
  std::vector<std::vector<std::vector<double>>> blocks;
  double total = 1.0;
  for (Channel c : {Channel::walkin, Channel::online}) {
    for (std::size_t t = 0; t < T; ++t) {
      blocks.push_back(enumerate_discrete_points(set, c, t, cap));
      total *= static_cast<double>(blocks.back().size());
    }
  }
  if (total > cap) {
    std::ostringstream os;
    os << "scenario cross product of " << total << " exceeds the cap of " << cap;
    throw CapExceeded(os.str());
  }
  std::vector<DemandScenario> out;
  if (total == 0) return out;
  std::vector<std::size_t> idx(blocks.size(), 0);
  while (true) {
    DemandScenario s;
    s.walkin.resize(T);
    s.online.resize(T);
    for (std::size_t t = 0; t < T; ++t) {
      s.walkin[t] = blocks[t][idx[t]];
      s.online[t] = blocks[T + t][idx[T + t]];
    }
    out.push_back(std::move(s));
    std::size_t k = blocks.size();
    bool done = true;
    while (k > 0) {
      --k;
      if (idx[k] + 1 < blocks[k].size()) { ++idx[k]; done = false; break; }
      idx[k] = 0;
    }
    if (done) break;
  }
  return out;
}

DemandScenario zero_scenario(std::size_t periods, std::size_t nodes, std::size_t zones) {
  return DemandScenario{zeros(periods, nodes), zeros(periods, zones)};
}

std::vector<DemandScenario> sample_scenarios(const DemandMeans& means, std::size_t count,
                                             std::uint64_t seed, SampleFamily family,
                                             const UncertaintySet* set) {
  if (count < 1) throw std::invalid_argument("sample count must be at least 1");
  for (Channel c : {Channel::walkin, Channel::online}) {
    for (const auto& row : means.channel(c)) {
      for (double m : row) {
        if (!(m >= 0.0)) throw std::invalid_argument("mean demand must be nonnegative");
      }
    }
  }
  if (family == SampleFamily::uniform && set == nullptr) {
    throw std::invalid_argument("uniform sampling needs the uncertainty set");
  }
  std::mt19937_64 gen(seed);
  std::vector<DemandScenario> out;
  out.reserve(count);
  const std::size_t T = means.walkin.size();
  for (std::size_t s = 0; s < count; ++s) {
    DemandScenario d;
    d.walkin = means.walkin;
    d.online = means.online;
    std::size_t attempts = 0;
    for (Channel c : {Channel::walkin, Channel::online}) {
      auto& m = d.channel(c);
      for (std::size_t t = 0; t < T; ++t) {
        if (family == SampleFamily::poisson) {
          for (std::size_t i = 0; i < m[t].size(); ++i) {
            const double mu = means.channel(c)[t][i];
            m[t][i] = mu > 0 ? static_cast<double>(std::poisson_distribution<long>(mu)(gen)) : 0.0;
          }
          continue;
        }
        const auto& b = set->channel(c);
        while (true) {
          if (++attempts > 10000) {
            throw CapExceeded("uniform rejection sampling exceeded 10000 draws for one scenario");
          }
          double sum = 0.0;
          for (std::size_t i = 0; i < m[t].size(); ++i) {
            const long lo = std::lround(b.lower[t][i]);
            const long hi = std::lround(b.upper[t][i]);
            m[t][i] = static_cast<double>(std::uniform_int_distribution<long>(lo, hi)(gen));
            sum += m[t][i];
          }
          if (sum >= b.budget_lower[t] - kTol && sum <= b.budget_upper[t] + kTol) break;
        }
      }
    }
    out.push_back(std::move(d));
  }
  return out;
}

int poisson_quantile(double mean, double q) {
  if (!(mean >= 0.0)) throw std::invalid_argument("poisson mean must be nonnegative");
  if (!(q < 1.0)) throw std::invalid_argument("poisson quantile level must be below 1");
  if (mean == 0.0 || q <= 0.0) return 0;
  boost::math::poisson_distribution<double> dist(mean);
  int k = 0;
  while (boost::math::cdf(dist, static_cast<double>(k)) < q) ++k;
  return k;
}

UncertaintySet quantile_bounds_from_means(const DemandMeans& means, double lower_q, double upper_q) {
  UncertaintySet set;
  for (Channel c : {Channel::walkin, Channel::online}) {
    const auto& m = means.channel(c);
    ChannelBounds b;
    for (const auto& row : m) {
      std::vector<double> lo, hi;
      double total = 0.0;
      for (double mu : row) {
        lo.push_back(poisson_quantile(mu, lower_q));
        hi.push_back(poisson_quantile(mu, upper_q));
        total += mu;
      }
      double bl = poisson_quantile(total, lower_q);
      double bu = poisson_quantile(total, upper_q);
      // keep the set non-empty when cell and aggregate quantiles disagree
      bu = std::max(bu, row_sum(lo));
      bl = std::min(bl, row_sum(hi));
      b.lower.push_back(lo);
      b.upper.push_back(hi);
      b.budget_lower.push_back(bl);
      b.budget_upper.push_back(bu);
    }
    (c == Channel::walkin ? set.walkin : set.online) = std::move(b);
  }
  return set;
}

DemandScenario lowest_feasible_scenario(const UncertaintySet& set) {
  DemandScenario d{set.walkin.lower, set.online.lower};
  for (Channel c : {Channel::walkin, Channel::online}) {
    const auto& b = set.channel(c);
    auto& m = d.channel(c);
    for (std::size_t t = 0; t < m.size(); ++t) {
      double need = b.budget_lower[t] - row_sum(m[t]);
      for (std::size_t i = 0; i < m[t].size() && need > 0; ++i) {
        const double add = std::min(need, b.upper[t][i] - m[t][i]);
        m[t][i] += add;
        need -= add;
      }
    }
  }
  return d;
}

DemandScenario highest_feasible_scenario(const UncertaintySet& set) {
  DemandScenario d{set.walkin.upper, set.online.upper};
  for (Channel c : {Channel::walkin, Channel::online}) {
    const auto& b = set.channel(c);
    auto& m = d.channel(c);
    for (std::size_t t = 0; t < m.size(); ++t) {
      double excess = row_sum(m[t]) - b.budget_upper[t];
      for (std::size_t i = m[t].size(); i > 0 && excess > 0; --i) {
        const double cut = std::min(excess, m[t][i - 1] - b.lower[t][i - 1]);
        m[t][i - 1] -= cut;
        excess -= cut;
      }
    }
  }
  return d;
}

std::vector<double> minimise_linear(const ChannelBounds& b, std::size_t t, const std::vector<double>& cost) {
  const std::size_t n = cost.size();
  std::vector<double> d(b.lower.at(t));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return cost[a] < cost[c]; });
  double total = row_sum(d);
  // raise profitable cells while the budget allows
  for (auto i : order) {
    if (cost[i] >= 0 || total >= b.budget_upper[t]) break;
    const double add = std::min(b.upper[t][i] - d[i], b.budget_upper[t] - total);
    if (add <= 0) continue;
    d[i] += add;
    total += add;
  }
  // then reach the budget floor as cheaply as possible
  for (auto i : order) {
    if (total >= b.budget_lower[t]) break;
    const double add = std::min(b.upper[t][i] - d[i], b.budget_lower[t] - total);
    if (add <= 0) continue;
    d[i] += add;
    total += add;
  }
  return d;
}

}  // namespace bioinv
