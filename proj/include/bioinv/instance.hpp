#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bioinv {

/// Row-major dense table; outer index is usually the period.
using Matrix = std::vector<std::vector<double>>;

Matrix zeros(std::size_t rows, std::size_t cols);

enum class NodeKind { store, warehouse };

struct ShipEdge {
  std::size_t node = 0;
  std::size_t zone = 0;
  double days = 0.0;
};

struct Network {
  std::vector<std::string> nodes;
  std::vector<NodeKind> kinds;  // parallel to nodes
  std::vector<std::string> zones;
  std::string supplier = "S";
  std::vector<std::size_t> sfs_eligible;  // node indices allowed to ship online orders
  std::vector<ShipEdge> ship_edges;
};

struct EconParams {
  Matrix walkin_price;    // [t][l]
  Matrix walkin_penalty;  // [t][l]
  std::vector<double> online_price;    // [t]
  std::vector<double> online_penalty;  // [t]
  std::vector<double> holding;         // [l]
  Matrix fulfill_cost;                 // [l][z]
  std::vector<double> purchase_cost;   // [l]
  std::optional<Matrix> reposition_cost;  // [from][to]
};

struct InventoryState {
  Matrix pipeline;               // [l][j], j = 0..lead_time[l]; j = 0 is on hand
  std::vector<int> lead_time;    // [l]
  std::optional<std::vector<std::vector<int>>> reposition_lead;  // [from][to]
};

struct ServiceWindow {
  double fraction = 0.0;
  double day_threshold = 0.0;
};

/// Optional constraint generators; all disabled by default.
struct BusinessRules {
  std::optional<Matrix> transport_capacity;    // [t][l], bound on x
  std::optional<Matrix> fulfillment_capacity;  // [t][l], bound on the sum of y over zones
  std::optional<ServiceWindow> service_window;
};

struct Instance {
  std::string name;
  Network network;
  EconParams econ;
  InventoryState inventory;
  int horizon = 1;
  BusinessRules rules;

  [[nodiscard]] std::size_t num_nodes() const { return network.nodes.size(); }
  [[nodiscard]] std::size_t num_zones() const { return network.zones.size(); }
  [[nodiscard]] std::size_t periods() const { return static_cast<std::size_t>(horizon); }

  /// Ship edges whose origin is SFS eligible; these carry the y variables.
  [[nodiscard]] std::vector<ShipEdge> fulfillment_edges() const;

  /// Pipeline quantity for node l arriving j periods from now (0 outside the pipeline).
  [[nodiscard]] double pipeline_at(std::size_t l, std::size_t j) const;

  /// Units available at node l in period t before any decision:
  /// on-hand at t = 0 plus scheduled pipeline arrivals.
  [[nodiscard]] double scheduled_supply(std::size_t t, std::size_t l) const;
};

class DimensionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Throws DimensionError naming the first badly shaped array.
void check_dimensions(const Instance& instance);

struct Violation {
  std::string rule;    // e.g. "service_priority"
  std::string detail;  // indices and values
};

/// Invariant violations of a dimensionally valid instance.  Dimension problems are
/// reported as violations too rather than thrown.
std::vector<Violation> validate_instance(const Instance& instance);

/// Smallest instance used in docs and tests: one store, no zones, T = 1.
Instance single_store_instance(double price, double penalty, double purchase_cost,
                               double holding = 0.0);

}  // namespace bioinv
