#include <map>

#include "bioinv/io.hpp"
#include "json_util.hpp"

namespace bioinv {

using detail::json;
using detail::ObjectReader;

namespace {

json matrix_json(const Matrix& m) {
  json out = json::array();
  for (const auto& row : m) out.push_back(row);
  return out;
}

std::vector<std::vector<int>> int_matrix(const Matrix& m, const std::string& path) {
  std::vector<std::vector<int>> out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    std::vector<int> row;
    for (std::size_t j = 0; j < m[i].size(); ++j) {
      const double v = m[i][j];
      if (v != std::floor(v)) detail::fail(path + "[" + std::to_string(i) + "][" + std::to_string(j) + "]", "expected an integer");
      row.push_back(static_cast<int>(v));
    }
    out.push_back(row);
  }
  return out;
}

Instance from_json(const json& doc) {
  Instance inst;
  ObjectReader top(doc, "");
  inst.name = top.has("name") ? top.text("name") : std::string{};
  inst.horizon = top.integer("horizon");

  ObjectReader net(top.at("network"), "network");
  inst.network.nodes = net.strings("nodes");
  inst.network.zones = net.strings("zones");
  inst.network.supplier = net.has("supplier") ? net.text("supplier") : std::string("S");
  std::map<std::string, std::size_t> node_index, zone_index;
  for (std::size_t i = 0; i < inst.network.nodes.size(); ++i) node_index.emplace(inst.network.nodes[i], i);
  for (std::size_t i = 0; i < inst.network.zones.size(); ++i) zone_index.emplace(inst.network.zones[i], i);

  const auto kinds = net.strings("kinds");
  for (std::size_t i = 0; i < kinds.size(); ++i) {
    if (kinds[i] == "store") {
      inst.network.kinds.push_back(NodeKind::store);
    } else if (kinds[i] == "warehouse") {
      inst.network.kinds.push_back(NodeKind::warehouse);
    } else {
      detail::fail("network.kinds[" + std::to_string(i) + "]", "expected \"store\" or \"warehouse\", got \"" + kinds[i] + "\"");
    }
  }
  if (net.has("sfs_eligible")) {
    const auto ids = net.strings("sfs_eligible");
    for (std::size_t i = 0; i < ids.size(); ++i) {
      auto it = node_index.find(ids[i]);
      if (it == node_index.end()) detail::fail("network.sfs_eligible[" + std::to_string(i) + "]", "unknown node \"" + ids[i] + "\"");
      inst.network.sfs_eligible.push_back(it->second);
    }
  }
  const auto& edges = net.at("ship_edges");
  if (!edges.is_array()) detail::fail("network.ship_edges", "expected an array");
  for (std::size_t e = 0; e < edges.size(); ++e) {
    const std::string p = "network.ship_edges[" + std::to_string(e) + "]";
    ObjectReader r(edges[e], p);
    const auto node = r.text("node");
    const auto zone = r.text("zone");
    auto ni = node_index.find(node);
    if (ni == node_index.end()) detail::fail(p + ".node", "unknown node \"" + node + "\"");
    auto zi = zone_index.find(zone);
    if (zi == zone_index.end()) detail::fail(p + ".zone", "unknown zone \"" + zone + "\"");
    inst.network.ship_edges.push_back({ni->second, zi->second, r.number("days")});
    r.finish();
  }
  net.finish();

  ObjectReader econ(top.at("econ"), "econ");
  inst.econ.walkin_price = econ.matrix("walkin_price");
  inst.econ.walkin_penalty = econ.matrix("walkin_penalty");
  inst.econ.online_price = econ.vector("online_price");
  inst.econ.online_penalty = econ.vector("online_penalty");
  inst.econ.holding = econ.vector("holding");
  inst.econ.fulfill_cost = econ.matrix("fulfill_cost");
  inst.econ.purchase_cost = econ.vector("purchase_cost");
  if (econ.has("reposition_cost")) inst.econ.reposition_cost = econ.matrix("reposition_cost");
  econ.finish();

  ObjectReader inv(top.at("inventory"), "inventory");
  inst.inventory.pipeline = inv.matrix("pipeline");
  for (double v : inv.vector("lead_time")) {
    if (v != std::floor(v)) detail::fail("inventory.lead_time", "expected integers");
    inst.inventory.lead_time.push_back(static_cast<int>(v));
  }
  if (inv.has("reposition_lead")) {
    inst.inventory.reposition_lead = int_matrix(inv.matrix("reposition_lead"), "inventory.reposition_lead");
  }
  inv.finish();

  if (top.has("business_rules")) {
    ObjectReader rules(top.at("business_rules"), "business_rules");
    if (rules.has("transport_capacity")) inst.rules.transport_capacity = rules.matrix("transport_capacity");
    if (rules.has("fulfillment_capacity")) inst.rules.fulfillment_capacity = rules.matrix("fulfillment_capacity");
    if (rules.has("service_window")) {
      ObjectReader sw(rules.at("service_window"), "business_rules.service_window");
      inst.rules.service_window = ServiceWindow{sw.number("fraction"), sw.number("day_threshold")};
      sw.finish();
    }
    rules.finish();
  }
  top.finish();

  try {
    check_dimensions(inst);
  } catch (const DimensionError& e) {
    throw ParseError(std::string("dimension mismatch: ") + e.what());
  }
  return inst;
}

}  // namespace

Instance parse_instance(const std::string& text, const std::string& source) {
  const json doc = detail::parse_document(text, source);
  try {
    return from_json(doc);
  } catch (const ParseError& e) {
    throw ParseError(source + ": " + e.what());
  }
}

std::string dump_instance(const Instance& inst) {
  check_dimensions(inst);
  json doc;
  doc["name"] = inst.name;
  doc["horizon"] = inst.horizon;
  json net;
  net["nodes"] = inst.network.nodes;
  json kinds = json::array();
  for (auto k : inst.network.kinds) kinds.push_back(k == NodeKind::store ? "store" : "warehouse");
  net["kinds"] = kinds;
  net["zones"] = inst.network.zones;
  net["supplier"] = inst.network.supplier;
  json sfs = json::array();
  for (auto l : inst.network.sfs_eligible) sfs.push_back(inst.network.nodes.at(l));
  net["sfs_eligible"] = sfs;
  json edges = json::array();
  for (const auto& e : inst.network.ship_edges) {
    edges.push_back({{"node", inst.network.nodes.at(e.node)}, {"zone", inst.network.zones.at(e.zone)}, {"days", e.days}});
  }
  net["ship_edges"] = edges;
  doc["network"] = net;

  json econ;
  econ["walkin_price"] = matrix_json(inst.econ.walkin_price);
  econ["walkin_penalty"] = matrix_json(inst.econ.walkin_penalty);
  econ["online_price"] = inst.econ.online_price;
  econ["online_penalty"] = inst.econ.online_penalty;
  econ["holding"] = inst.econ.holding;
  econ["fulfill_cost"] = matrix_json(inst.econ.fulfill_cost);
  econ["purchase_cost"] = inst.econ.purchase_cost;
  if (inst.econ.reposition_cost) econ["reposition_cost"] = matrix_json(*inst.econ.reposition_cost);
  doc["econ"] = econ;

  json inv;
  inv["pipeline"] = matrix_json(inst.inventory.pipeline);
  inv["lead_time"] = inst.inventory.lead_time;
  if (inst.inventory.reposition_lead) inv["reposition_lead"] = *inst.inventory.reposition_lead;
  doc["inventory"] = inv;

  json rules = json::object();
  if (inst.rules.transport_capacity) rules["transport_capacity"] = matrix_json(*inst.rules.transport_capacity);
  if (inst.rules.fulfillment_capacity) rules["fulfillment_capacity"] = matrix_json(*inst.rules.fulfillment_capacity);
  if (inst.rules.service_window) {
    rules["service_window"] = {{"fraction", inst.rules.service_window->fraction},
                               {"day_threshold", inst.rules.service_window->day_threshold}};
  }
  doc["business_rules"] = rules;
  return doc.dump(2) + "\n";
}

Instance load_instance(const std::string& path) { return parse_instance(detail::read_file(path), path); }

void save_instance(const Instance& instance, const std::string& path) {
  detail::write_file(path, dump_instance(instance));
}

}  // namespace bioinv
