#include "bioinv/instance.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace bioinv {

Matrix zeros(std::size_t rows, std::size_t cols) {
  return Matrix(rows, std::vector<double>(cols, 0.0));
}

std::vector<ShipEdge> Instance::fulfillment_edges() const {
  std::vector<bool> eligible(num_nodes(), false);
  for (auto l : network.sfs_eligible) {
    if (l < eligible.size()) eligible[l] = true;
  }
  std::vector<ShipEdge> out;
  for (const auto& e : network.ship_edges) {
    if (e.node < eligible.size() && eligible[e.node]) out.push_back(e);
  }
  return out;
}

double Instance::pipeline_at(std::size_t l, std::size_t j) const {
  const auto& row = inventory.pipeline.at(l);
  return j < row.size() ? row[j] : 0.0;
}

double Instance::scheduled_supply(std::size_t t, std::size_t l) const {
  double v = t == 0 ? pipeline_at(l, 0) : 0.0;
  if (static_cast<int>(t) < inventory.lead_time.at(l)) v += pipeline_at(l, t + 1);
  return v;
}

namespace {

std::string idx(std::initializer_list<std::size_t> ids) {
  std::ostringstream os;
  os << '[';
  bool first = true;
  for (auto i : ids) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << ']';
  return os.str();
}

void need_rows(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& name) {
  if (m.size() != rows) {
    throw DimensionError(name + ": expected " + std::to_string(rows) + " rows, found " +
                         std::to_string(m.size()));
  }
  for (std::size_t i = 0; i < rows; ++i) {
    if (m[i].size() != cols) {
      throw DimensionError(name + "[" + std::to_string(i) + "]: expected " + std::to_string(cols) +
                           " entries, found " + std::to_string(m[i].size()));
    }
  }
}

void need_len(const std::vector<double>& v, std::size_t n, const std::string& name) {
  if (v.size() != n) {
    throw DimensionError(name + ": expected " + std::to_string(n) + " entries, found " +
                         std::to_string(v.size()));
  }
}

}  // namespace

void check_dimensions(const Instance& inst) {
  if (inst.horizon < 1) throw DimensionError("horizon must be at least 1");
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  if (inst.network.kinds.size() != L) throw DimensionError("network.kinds must parallel network.nodes");
  need_rows(inst.econ.walkin_price, T, L, "econ.walkin_price");
  need_rows(inst.econ.walkin_penalty, T, L, "econ.walkin_penalty");
  need_len(inst.econ.online_price, T, "econ.online_price");
  need_len(inst.econ.online_penalty, T, "econ.online_penalty");
  need_len(inst.econ.holding, L, "econ.holding");
  need_rows(inst.econ.fulfill_cost, L, Z, "econ.fulfill_cost");
  need_len(inst.econ.purchase_cost, L, "econ.purchase_cost");
  if (inst.econ.reposition_cost) need_rows(*inst.econ.reposition_cost, L, L, "econ.reposition_cost");
  if (inst.inventory.lead_time.size() != L) throw DimensionError("inventory.lead_time: expected one entry per node");
  if (inst.inventory.pipeline.size() != L) throw DimensionError("inventory.pipeline: expected one row per node");
  for (std::size_t l = 0; l < L; ++l) {
    const int lt = inst.inventory.lead_time[l];
    if (lt < 0) throw DimensionError("inventory.lead_time[" + std::to_string(l) + "] is negative");
    if (inst.inventory.pipeline[l].size() != static_cast<std::size_t>(lt) + 1) {
      throw DimensionError("inventory.pipeline[" + std::to_string(l) + "]: expected lead_time+1 = " +
                           std::to_string(lt + 1) + " entries, found " +
                           std::to_string(inst.inventory.pipeline[l].size()));
    }
  }
  if (inst.inventory.reposition_lead) {
    const auto& rl = *inst.inventory.reposition_lead;
    if (rl.size() != L) throw DimensionError("inventory.reposition_lead: expected one row per node");
    for (const auto& row : rl) {
      if (row.size() != L) throw DimensionError("inventory.reposition_lead: expected square matrix");
    }
  }
  if (inst.rules.transport_capacity) need_rows(*inst.rules.transport_capacity, T, L, "business_rules.transport_capacity");
  if (inst.rules.fulfillment_capacity) need_rows(*inst.rules.fulfillment_capacity, T, L, "business_rules.fulfillment_capacity");
}

std::vector<Violation> validate_instance(const Instance& inst) {
  std::vector<Violation> out;
  try {
    check_dimensions(inst);
  } catch (const DimensionError& e) {
    out.push_back({"dimensions", e.what()});
    return out;
  }
  const std::size_t T = inst.periods(), L = inst.num_nodes(), Z = inst.num_zones();
  const auto& net = inst.network;
  const auto& econ = inst.econ;
  auto add = [&](const std::string& rule, const std::string& detail) { out.push_back({rule, detail}); };

  {
    std::set<std::string> seen;
    for (const auto& n : net.nodes) {
      if (!seen.insert(n).second) add("unique_node_ids", "duplicate node '" + n + "'");
    }
    std::set<std::string> zs;
    for (const auto& z : net.zones) {
      if (!zs.insert(z).second) add("unique_zone_ids", "duplicate zone '" + z + "'");
    }
  }
  for (auto l : net.sfs_eligible) {
    if (l >= L) add("sfs_subset", "sfs_eligible index " + std::to_string(l) + " is not a node");
  }
  for (std::size_t e = 0; e < net.ship_edges.size(); ++e) {
    const auto& edge = net.ship_edges[e];
    if (edge.node >= L) add("edge_reference", "ship_edges[" + std::to_string(e) + "] references unknown node");
    if (edge.zone >= Z) add("edge_reference", "ship_edges[" + std::to_string(e) + "] references unknown zone");
    if (edge.days < 0) add("nonnegative", "ship_edges[" + std::to_string(e) + "].days < 0");
  }

  auto nonneg = [&](double v, const std::string& what) {
    if (!(v >= 0.0)) {
      std::ostringstream os;
      os << what << " = " << v;
      add("nonnegative", os.str());
    }
  };
  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      nonneg(econ.walkin_price[t][l], "walkin_price" + idx({t, l}));
      nonneg(econ.walkin_penalty[t][l], "walkin_penalty" + idx({t, l}));
    }
    nonneg(econ.online_price[t], "online_price" + idx({t}));
    nonneg(econ.online_penalty[t], "online_penalty" + idx({t}));
  }
  for (std::size_t l = 0; l < L; ++l) {
    nonneg(econ.holding[l], "holding" + idx({l}));
    nonneg(econ.purchase_cost[l], "purchase_cost" + idx({l}));
    for (std::size_t z = 0; z < Z; ++z) nonneg(econ.fulfill_cost[l][z], "fulfill_cost" + idx({l, z}));
    for (std::size_t j = 0; j < inst.inventory.pipeline[l].size(); ++j) {
      nonneg(inst.inventory.pipeline[l][j], "pipeline" + idx({l, j}));
    }
  }
  if (econ.reposition_cost) {
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) nonneg((*econ.reposition_cost)[a][b], "reposition_cost" + idx({a, b}));
    }
  }
  if (inst.inventory.reposition_lead) {
    for (std::size_t a = 0; a < L; ++a) {
      for (std::size_t b = 0; b < L; ++b) {
        if ((*inst.inventory.reposition_lead)[a][b] < 0) add("nonnegative", "reposition_lead" + idx({a, b}) + " < 0");
      }
    }
  }

  for (std::size_t t = 0; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      for (std::size_t z = 0; z < Z; ++z) {
        const double walkin = econ.walkin_price[t][l] + econ.walkin_penalty[t][l];
        const double online = econ.online_price[t] + econ.online_penalty[t] - econ.fulfill_cost[l][z];
        if (!(walkin > online)) {
          std::ostringstream os;
          os << "t=" << t << " l=" << l << " z=" << z << ": p^b+b^b = " << walkin
             << " <= p^o+b^o-c = " << online;
          add("service_priority", os.str());
        }
      }
    }
  }
  auto monotone = [&](double prev, double cur, const std::string& what) {
    if (cur > prev) {
      std::ostringstream os;
      os << what << " rises from " << prev << " to " << cur;
      add("non_increasing", os.str());
    }
  };
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t l = 0; l < L; ++l) {
      monotone(econ.walkin_price[t - 1][l], econ.walkin_price[t][l], "walkin_price" + idx({t, l}));
      monotone(econ.walkin_penalty[t - 1][l], econ.walkin_penalty[t][l], "walkin_penalty" + idx({t, l}));
    }
    monotone(econ.online_price[t - 1], econ.online_price[t], "online_price" + idx({t}));
    monotone(econ.online_penalty[t - 1], econ.online_penalty[t], "online_penalty" + idx({t}));
  }

  if (inst.rules.service_window) {
    const double f = inst.rules.service_window->fraction;
    if (!(f >= 0.0 && f <= 1.0)) add("service_window", "fraction " + std::to_string(f) + " outside [0,1]");
  }
  for (const auto* cap : {&inst.rules.transport_capacity, &inst.rules.fulfillment_capacity}) {
    if (!*cap) continue;
    for (std::size_t t = 0; t < T; ++t) {
      for (std::size_t l = 0; l < L; ++l) nonneg((**cap)[t][l], "capacity" + idx({t, l}));
    }
  }
  return out;
}

Instance single_store_instance(double price, double penalty, double purchase_cost, double holding) {
  Instance inst;
  inst.name = "single-store";
  inst.horizon = 1;
  inst.network.nodes = {"store"};
  inst.network.kinds = {NodeKind::store};
  inst.econ.walkin_price = {{price}};
  inst.econ.walkin_penalty = {{penalty}};
  inst.econ.online_price = {0.0};
  inst.econ.online_penalty = {0.0};
  inst.econ.holding = {holding};
  inst.econ.fulfill_cost = {{}};
  inst.econ.purchase_cost = {purchase_cost};
  inst.inventory.pipeline = {{0.0}};
  inst.inventory.lead_time = {0};
  return inst;
}

}  // namespace bioinv
