#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "sstvrp/common.hpp"

namespace sstvrp {

struct Node {
  NodeId id = -1;
  double x = 0.0;  // miles
  double y = 0.0;
};

// Link travel time by departure minute. Either a single constant or an
// explicit per-minute table covering [0, T).
class TravelTimeProfile {
 public:
  static TravelTimeProfile constant(Minute tt) {
    TravelTimeProfile p;
    p.constant_ = tt;
    return p;
  }
  static TravelTimeProfile table(std::vector<Minute> values) {
    TravelTimeProfile p;
    p.values_ = std::move(values);
    return p;
  }

  bool is_constant() const { return values_.empty(); }

  Minute at(Minute t) const {
    if (values_.empty()) return constant_;
    if (t < static_cast<Minute>(values_.size())) return values_[t];
    return values_.back();
  }

  const std::vector<Minute>& values() const { return values_; }
  Minute min_value() const;

 private:
  std::vector<Minute> values_;
  Minute constant_ = 1;
};

struct Link {
  NodeId from = -1;
  NodeId to = -1;
  double distance = 0.0;  // miles
  TravelTimeProfile travel_time = TravelTimeProfile::constant(1);
};

struct PhysicalNetwork {
  std::vector<Node> nodes;
  std::vector<Link> links;
  // True when the links form the all-pairs Euclidean closure (planar
  // instances); lets per-cluster solves restrict to relevant hosts.
  bool complete_metric = false;

  void index_links();
  int link_between(NodeId from, NodeId to) const;  // index into links, -1 if none
  const std::vector<int>& links_out(NodeId from) const;

 private:
  std::unordered_map<std::int64_t, int> link_index_;
  std::vector<std::vector<int>> out_links_;
  static std::int64_t key(NodeId a, NodeId b) {
    return (static_cast<std::int64_t>(a) << 32) | static_cast<std::uint32_t>(b);
  }
};

struct PassengerRequest {
  int id = -1;
  NodeId origin = -1;
  NodeId destination = -1;
  Minute depart_earliest = 0;  // a
  Minute depart_latest = 0;    // b
  Minute arrive_earliest = 0;  // a'
  Minute arrive_latest = 0;    // b'
  int load = 1;
};

struct VehicleSpec {
  int id = -1;
  NodeId origin_depot = -1;
  NodeId destination_depot = -1;
  Minute earliest_departure = 0;  // fixed 0
  Minute latest_arrival = 0;      // fixed T
  int capacity = 1;
};

// Occupancy-dependent multiplier on the distance-cost term of one link
// (HOV/HOT-style overrides). Indexed by onboard capacity units, last entry
// extends.
struct LoadCostOverride {
  int link = -1;
  std::vector<double> distance_multiplier_by_occupancy;

  double multiplier(int occupancy) const {
    if (distance_multiplier_by_occupancy.empty()) return 1.0;
    const int i = std::min<int>(occupancy,
                                static_cast<int>(distance_multiplier_by_occupancy.size()) - 1);
    return distance_multiplier_by_occupancy[std::max(i, 0)];
  }
};

struct CostConfig {
  double value_of_time = 1.0;      // $/min
  double value_of_distance = 1.0;  // $/mile
  Money vehicle_activation_cost = 10000.0;
  Money cluster_open_cost = 10000.0;  // M in the clustering objective
  Minute horizon = 1000;              // T; one-minute step
  std::vector<LoadCostOverride> load_overrides;

  const LoadCostOverride* override_for(int link) const {
    for (const auto& o : load_overrides)
      if (o.link == link) return &o;
    return nullptr;
  }
};

struct Instance {
  std::string name;
  PhysicalNetwork network;
  NodeId depot = -1;
  std::vector<PassengerRequest> passengers;
  int vehicle_capacity = 1;
  Minute horizon = 1000;
  int window_class = 60;  // nominal window length (file header field)
  bool unit_loads = false;

  VehicleSpec vehicle_template() const {
    VehicleSpec v;
    v.id = 1;
    v.origin_depot = depot;
    v.destination_depot = depot;
    v.earliest_departure = 0;
    v.latest_arrival = horizon;
    v.capacity = vehicle_capacity;
    return v;
  }

  void validate() const;  // throws StructuralError on an invariant violation
};

enum class NodeKind : std::uint8_t {
  Physical,
  PickupDummy,
  DropoffDummy,
  DepotOrigin,
  DepotDestination,
};

struct AugmentedNode {
  NodeId id = -1;
  NodeKind kind = NodeKind::Physical;
  NodeId host = -1;     // physical node this node is attached to (self for physical)
  int passenger = -1;   // owning request for activity dummies
  Minute window_lo = 0; // service window for activity dummies, [0, T] otherwise
  Minute window_hi = 0;
};

// Physical network plus per-passenger pickup/drop-off dummies and one
// depot-origin/depot-destination dummy pair, each attached to its host by
// zero-length connectors. Waiting arcs exist at every dummy node.
class AugmentedNetwork {
 public:
  const Instance* instance = nullptr;
  std::vector<AugmentedNode> nodes;  // physical nodes first, same ids
  int physical_count = 0;
  NodeId depot_origin = -1;
  NodeId depot_destination = -1;
  std::vector<NodeId> pickup_dummy;   // per passenger index
  std::vector<NodeId> dropoff_dummy;  // per passenger index

  bool is_physical(NodeId i) const { return i < physical_count; }
  bool has_waiting_arc(NodeId i) const { return !is_physical(i); }
  const AugmentedNode& node(NodeId i) const { return nodes[static_cast<size_t>(i)]; }

  // Travel time of arc (i, j) departing at t. Physical links read their
  // profile; waiting arcs take one minute; connectors take zero.
  Minute travel_time(NodeId i, NodeId j, Minute t) const;

  // Routing cost of arc (i, j, t, t2) with the given onboard occupancy.
  // Waiting and connector arcs cost zero.
  Money arc_cost(NodeId i, NodeId j, Minute t, Minute t2, int occupancy,
                 const CostConfig& cfg) const;

  bool is_connector(NodeId i, NodeId j) const;
};

AugmentedNetwork build_augmented_network(const Instance& instance);

double euclidean(const Node& a, const Node& b);

}  // namespace sstvrp
