#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/successive_shortest_path_nonnegative_weights.hpp>
#include <boost/graph/find_flow_cost.hpp>

namespace oracle {

namespace {

using Traits = boost::adjacency_list_traits<boost::vecS, boost::vecS, boost::directedS>;
using Graph = boost::adjacency_list<
    boost::vecS, boost::vecS, boost::directedS, boost::no_property,
    boost::property<boost::edge_capacity_t, double,
                    boost::property<boost::edge_residual_capacity_t, double,
                                    boost::property<boost::edge_reverse_t, Traits::edge_descriptor,
                                                    boost::property<boost::edge_weight_t, double>>>>>;

struct FlowNet {
  Graph g;
  void arc(std::size_t u, std::size_t v, double cap, double cost) {
    auto cap_map = boost::get(boost::edge_capacity, g);
    auto rev = boost::get(boost::edge_reverse, g);
    auto w = boost::get(boost::edge_weight, g);
    const auto e = boost::add_edge(u, v, g).first;
    const auto r = boost::add_edge(v, u, g).first;
    cap_map[e] = cap;
    cap_map[r] = 0.0;
    w[e] = cost;
    w[r] = -cost;
    rev[e] = r;
    rev[r] = e;
  }
};

}  // namespace

Matrix arrivals(const Instance& inst, const Matrix& x) {
  const std::size_t T = static_cast<std::size_t>(inst.horizon), L = inst.network.nodes.size();
  Matrix a(T, std::vector<double>(L, 0.0));
  for (std::size_t l = 0; l < L; ++l) {
    const auto& pipe = inst.inventory.pipeline[l];
    const long lead = inst.inventory.lead_time[l];
    if (!pipe.empty()) a[0][l] += pipe[0];
    // pipe[j] is due j - 1 periods from now
    for (std::size_t j = 1; j < pipe.size() && static_cast<long>(j) <= lead; ++j) {
      if (j - 1 < T) a[j - 1][l] += pipe[j];
    }
    for (std::size_t t = 0; t < T; ++t) {
      const std::size_t land = t + static_cast<std::size_t>(lead);
      if (land < T) a[land][l] += x[t][l];
    }
  }
  return a;
}

double recourse_flow(const Instance& inst, const Matrix& supply, const Matrix& walkin_cap, const Matrix& online_cap) {
  const std::size_t T = static_cast<std::size_t>(inst.horizon), L = inst.network.nodes.size(),
                    Z = inst.network.zones.size();
  const auto& e = inst.econ;
  std::set<std::size_t> sfs(inst.network.sfs_eligible.begin(), inst.network.sfs_eligible.end());

  double K = 1.0;
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) K = std::max(K, e.walkin_price[t][l] + e.walkin_penalty[t][l] + 1.0);
    K = std::max(K, e.online_price[t] + e.online_penalty[t] + 1.0);
  }
  double total = 0.0;
  for (const auto& row : supply) {
    for (double v : row) total += v;
  }
  if (total <= 0.0) return 0.0;

  // nodes: 0 source, 1 sink, then (t,l), then (t,z)
  auto node = [&](std::size_t t, std::size_t l) { return 2 + t * L + l; };
  auto zone = [&](std::size_t t, std::size_t z) { return 2 + T * L + t * Z + z; };
  FlowNet net;
  net.g = Graph(2 + T * L + T * Z);
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      if (supply[t][l] > 0.0) net.arc(0, node(t, l), supply[t][l], 0.0);
      if (walkin_cap[t][l] > 0.0) net.arc(node(t, l), 1, walkin_cap[t][l], K - e.walkin_price[t][l] - e.walkin_penalty[t][l]);
      if (t + 1 < T) {
        net.arc(node(t, l), node(t + 1, l), total, e.holding[l]);
      } else {
        net.arc(node(t, l), 1, total, K + e.holding[l]);
      }
    }
    for (const auto& s : inst.network.ship_edges) {
      if (!sfs.count(s.node)) continue;
      net.arc(node(t, s.node), zone(t, s.zone), total,
              K - (e.online_price[t] + e.online_penalty[t] - e.fulfill_cost[s.node][s.zone]));
    }
    for (std::size_t z = 0; z < Z; ++z) {
      if (online_cap[t][z] > 0.0) net.arc(zone(t, z), 1, online_cap[t][z], 0.0);
    }
  }
  boost::successive_shortest_path_nonnegative_weights(net.g, 0, 1);
  const double cost = boost::find_flow_cost(net.g);
  return K * total - cost;
}

double realized_profit(const Instance& inst, const Matrix& x, const DemandScenario& d) {
  return subproblem_value(inst, x, nullptr, d, 0.0) - [&] {
    double c = 0.0;
    for (const auto& row : x) {
      for (std::size_t l = 0; l < row.size(); ++l) c += inst.econ.purchase_cost[l] * row[l];
    }
    return c;
  }();
}

double subproblem_value(const Instance& inst, const Matrix& x, const Matrix* committed, const DemandScenario& d,
                        double lambda) {
  const double k = 1.0 - lambda;
  auto supply = arrivals(inst, x);
  if (committed) {
    for (std::size_t t = 0; t < supply.size(); ++t) {
      for (std::size_t l = 0; l < supply[t].size(); ++l) supply[t][l] -= (*committed)[t][l];
    }
  }
  Matrix wcap = d.walkin;
  for (auto& row : wcap) {
    for (auto& v : row) v *= k;
  }
  double v = recourse_flow(inst, supply, wcap, d.online);
  for (std::size_t t = 0; t < d.walkin.size(); ++t) {
    for (std::size_t l = 0; l < d.walkin[t].size(); ++l) v -= k * inst.econ.walkin_penalty[t][l] * d.walkin[t][l];
    for (std::size_t z = 0; z < d.online[t].size(); ++z) v -= inst.econ.online_penalty[t] * d.online[t][z];
  }
  return v;
}

std::vector<DemandScenario> all_scenarios(const UncertaintySet& set) {
  const std::size_t T = set.walkin.lower.size();
  // integral points of one channel-period
  auto points = [](const bioinv::ChannelBounds& b, std::size_t t) {
    std::vector<std::vector<double>> out;
    const std::size_t n = b.lower[t].size();
    std::vector<double> cur(n);
    std::function<void(std::size_t, double)> rec = [&](std::size_t i, double sum) {
      if (i == n) {
        if (sum >= b.budget_lower[t] - 1e-9 && sum <= b.budget_upper[t] + 1e-9) out.push_back(cur);
        return;
      }
      for (long v = std::lround(std::ceil(b.lower[t][i])); v <= std::lround(std::floor(b.upper[t][i])); ++v) {
        cur[i] = static_cast<double>(v);
        rec(i + 1, sum + static_cast<double>(v));
      }
    };
    rec(0, 0.0);
    return out;
  };
  std::vector<std::vector<std::vector<double>>> blocks;  // walk-in periods, then online periods
  for (std::size_t t = 0; t < T; ++t) blocks.push_back(points(set.walkin, t));
  for (std::size_t t = 0; t < T; ++t) blocks.push_back(points(set.online, t));
  std::vector<DemandScenario> out;
  DemandScenario cur;
  cur.walkin.resize(T);
  cur.online.resize(T);
  std::function<void(std::size_t)> rec = [&](std::size_t b) {
    if (b == blocks.size()) {
      out.push_back(cur);
      return;
    }
    for (const auto& p : blocks[b]) {
      (b < T ? cur.walkin[b] : cur.online[b - T]) = p;
      rec(b + 1);
    }
  };
  rec(0);
  return out;
}

double poisson_pmf(double mean, long k) {
  if (k < 0) return 0.0;
  double lp = -mean + static_cast<double>(k) * std::log(mean) - std::lgamma(static_cast<double>(k) + 1.0);
  return mean == 0.0 ? (k == 0 ? 1.0 : 0.0) : std::exp(lp);
}

double poisson_cdf(double mean, long k) {
  double s = 0.0;
  for (long i = 0; i <= k; ++i) s += poisson_pmf(mean, i);
  return std::min(1.0, s);
}

Instance random_instance(std::mt19937_64& rng, const RandomShape& shape) {
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  const std::size_t S = static_cast<std::size_t>(pick(1, static_cast<long>(shape.max_stores)));
  const std::size_t W = static_cast<std::size_t>(pick(0, static_cast<long>(shape.max_warehouses)));
  const std::size_t Z = static_cast<std::size_t>(pick(0, static_cast<long>(shape.max_zones)));
  const std::size_t T = static_cast<std::size_t>(pick(1, static_cast<long>(shape.max_periods)));
  const std::size_t L = S + W;
  Instance inst;
  inst.name = "random";
  inst.horizon = static_cast<int>(T);
  for (std::size_t l = 0; l < L; ++l) {
    inst.network.nodes.push_back((l < S ? "s" : "w") + std::to_string(l));
    inst.network.kinds.push_back(l < S ? bioinv::NodeKind::store : bioinv::NodeKind::warehouse);
  }
  for (std::size_t z = 0; z < Z; ++z) inst.network.zones.push_back("z" + std::to_string(z));
  for (std::size_t l = 0; l < L; ++l) {
    if (l >= S || pick(0, 1) == 1) inst.network.sfs_eligible.push_back(l);
  }
  auto& e = inst.econ;
  e.fulfill_cost.assign(L, std::vector<double>(Z, 0.0));
  for (std::size_t l = 0; l < L; ++l) {
    for (std::size_t z = 0; z < Z; ++z) {
      e.fulfill_cost[l][z] = static_cast<double>(pick(1, 20));
      if (pick(0, 3) > 0) inst.network.ship_edges.push_back({l, z, static_cast<double>(pick(1, 5))});
    }
  }
  // prices fall over time; walk-in value kept above any online value
  e.online_price.resize(T);
  e.online_penalty.resize(T);
  e.walkin_price.assign(T, std::vector<double>(L, 0.0));
  e.walkin_penalty.assign(T, std::vector<double>(L, 0.0));
  double op = static_cast<double>(pick(0, 8) * 10), ob = static_cast<double>(pick(0, 8) * 10);
  std::vector<double> wp(L), wb(L);
  for (std::size_t l = 0; l < L; ++l) {
    wp[l] = static_cast<double>(pick(0, 10) * 10);
    wb[l] = std::max(static_cast<double>(pick(0, 10) * 10), op + ob + 10.0 - wp[l]);
  }
  for (std::size_t t = 0; t < T; ++t) {
    e.online_price[t] = op;
    e.online_penalty[t] = ob;
    for (std::size_t l = 0; l < L; ++l) {
      e.walkin_price[t][l] = wp[l];
      e.walkin_penalty[t][l] = wb[l];
      wp[l] = std::max(0.0, wp[l] - static_cast<double>(pick(0, 1) * 10));
    }
    op = std::max(0.0, op - static_cast<double>(pick(0, 1) * 10));
  }
  for (std::size_t l = 0; l < L; ++l) {
    e.purchase_cost.push_back(static_cast<double>(pick(1, 8) * 10));
    e.holding.push_back(static_cast<double>(pick(0, 3)));
  }
  inst.inventory.lead_time.assign(L, 0);
  inst.inventory.pipeline.assign(L, std::vector<double>(1, 0.0));
  if (!shape.zero_inventory) {
    for (std::size_t l = 0; l < L; ++l) {
      inst.inventory.lead_time[l] = static_cast<int>(pick(0, 1));
      inst.inventory.pipeline[l].assign(static_cast<std::size_t>(inst.inventory.lead_time[l]) + 1, 0.0);
      for (auto& v : inst.inventory.pipeline[l]) v = static_cast<double>(pick(0, 2));
    }
  }
  return inst;
}

UncertaintySet random_set(std::mt19937_64& rng, const Instance& inst, long max_bound) {
  auto pick = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  const std::size_t T = static_cast<std::size_t>(inst.horizon), L = inst.network.nodes.size(),
                    Z = inst.network.zones.size();
  UncertaintySet u;
  auto fill = [&](bioinv::ChannelBounds& b, std::size_t cells, auto&& active) {
    b.lower.assign(T, std::vector<double>(cells, 0.0));
    b.upper.assign(T, std::vector<double>(cells, 0.0));
    b.budget_lower.assign(T, 0.0);
    b.budget_upper.assign(T, 0.0);
    for (std::size_t t = 0; t < T; ++t) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t i = 0; i < cells; ++i) {
        if (!active(i)) continue;
        const long a = pick(0, std::min<long>(2, max_bound));
        const long c = pick(a, max_bound);
        b.lower[t][i] = static_cast<double>(a);
        b.upper[t][i] = static_cast<double>(c);
        lo += static_cast<double>(a);
        hi += static_cast<double>(c);
      }
      const long bl = pick(static_cast<long>(lo), static_cast<long>(hi));
      b.budget_lower[t] = static_cast<double>(bl);
      b.budget_upper[t] = static_cast<double>(pick(bl, static_cast<long>(hi)));
    }
  };
  fill(u.walkin, L, [&](std::size_t l) { return inst.network.kinds[l] == bioinv::NodeKind::store; });
  fill(u.online, Z, [](std::size_t) { return true; });
  return u;
}

std::vector<Matrix> allocation_grid(std::size_t periods, std::size_t nodes, long cap) {
  std::vector<Matrix> out;
  Matrix cur(periods, std::vector<double>(nodes, 0.0));
  const std::size_t n = periods * nodes;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      out.push_back(cur);
      return;
    }
    for (long v = 0; v <= cap; ++v) {
      cur[i / nodes][i % nodes] = static_cast<double>(v);
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

}  // namespace oracle
