#include "sstvrp/model.hpp"

#include <algorithm>
#include <cmath>

namespace sstvrp {

Minute TravelTimeProfile::min_value() const {
  if (values_.empty()) return constant_;
  return *std::min_element(values_.begin(), values_.end());
}

void PhysicalNetwork::index_links() {
  link_index_.clear();
  out_links_.assign(nodes.size(), {});
  for (int k = 0; k < static_cast<int>(links.size()); ++k) {
    const Link& l = links[k];
    link_index_[key(l.from, l.to)] = k;
    out_links_[static_cast<size_t>(l.from)].push_back(k);
  }
}

int PhysicalNetwork::link_between(NodeId from, NodeId to) const {
  auto it = link_index_.find(key(from, to));
  return it == link_index_.end() ? -1 : it->second;
}

const std::vector<int>& PhysicalNetwork::links_out(NodeId from) const {
  return out_links_[static_cast<size_t>(from)];
}

double euclidean(const Node& a, const Node& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void Instance::validate() const {
  const int node_count = static_cast<int>(network.nodes.size());
  auto check_node = [&](NodeId id, const std::string& what) {
    if (id < 0 || id >= node_count)
      throw StructuralError(what + " references nonexistent node " + std::to_string(id));
  };
  check_node(depot, "depot");
  for (const Link& l : network.links) {
    check_node(l.from, "link");
    check_node(l.to, "link");
    if (l.travel_time.min_value() < 1)
      throw StructuralError("link travel time below one minute");
  }
  for (const PassengerRequest& p : passengers) {
    check_node(p.origin, "passenger " + std::to_string(p.id));
    check_node(p.destination, "passenger " + std::to_string(p.id));
    if (p.origin == p.destination)
      throw StructuralError("passenger " + std::to_string(p.id) +
                            " has identical origin and destination");
    if (p.depart_earliest > p.depart_latest || p.arrive_earliest > p.arrive_latest)
      throw StructuralError("passenger " + std::to_string(p.id) + " has an empty window");
    if (p.depart_earliest < 0 || p.depart_latest > horizon || p.arrive_earliest < 0 ||
        p.arrive_latest > horizon)
      throw StructuralError("passenger " + std::to_string(p.id) +
                            " window outside the horizon");
    if (p.load < 1) throw StructuralError("passenger load must be positive");
  }
  if (horizon < 1) throw StructuralError("horizon must be positive");
}

AugmentedNetwork build_augmented_network(const Instance& instance) {
  instance.validate();
  AugmentedNetwork net;
  net.instance = &instance;
  net.physical_count = static_cast<int>(instance.network.nodes.size());
  net.nodes.reserve(instance.network.nodes.size() + 2 * instance.passengers.size() + 2);
  for (const Node& n : instance.network.nodes) {
    AugmentedNode a;
    a.id = n.id;
    a.kind = NodeKind::Physical;
    a.host = n.id;
    a.window_lo = 0;
    a.window_hi = instance.horizon;
    net.nodes.push_back(a);
  }
  auto add_dummy = [&](NodeKind kind, NodeId host, int passenger, Minute lo, Minute hi) {
    AugmentedNode a;
    a.id = static_cast<NodeId>(net.nodes.size());
    a.kind = kind;
    a.host = host;
    a.passenger = passenger;
    a.window_lo = lo;
    a.window_hi = hi;
    net.nodes.push_back(a);
    return a.id;
  };
  net.depot_origin =
      add_dummy(NodeKind::DepotOrigin, instance.depot, -1, 0, instance.horizon);
  net.depot_destination =
      add_dummy(NodeKind::DepotDestination, instance.depot, -1, 0, instance.horizon);
  for (int j = 0; j < static_cast<int>(instance.passengers.size()); ++j) {
    const PassengerRequest& p = instance.passengers[j];
    net.pickup_dummy.push_back(add_dummy(NodeKind::PickupDummy, p.origin, j,
                                         p.depart_earliest, p.depart_latest));
    net.dropoff_dummy.push_back(add_dummy(NodeKind::DropoffDummy, p.destination, j,
                                          p.arrive_earliest, p.arrive_latest));
  }
  return net;
}

bool AugmentedNetwork::is_connector(NodeId i, NodeId j) const {
  if (i == j) return false;
  const AugmentedNode& a = node(i);
  const AugmentedNode& b = node(j);
  if (!is_physical(i) && is_physical(j)) return a.host == j;
  if (is_physical(i) && !is_physical(j)) return b.host == i;
  // depot-origin -> depot-destination idle arc
  return a.kind == NodeKind::DepotOrigin && b.kind == NodeKind::DepotDestination;
}

Minute AugmentedNetwork::travel_time(NodeId i, NodeId j, Minute t) const {
  if (t < 0 || t >= instance->horizon)
    throw DomainError("departure time outside the horizon");
  if (i == j) {
    if (!has_waiting_arc(i)) throw DomainError("no waiting arc at a physical node");
    return 1;
  }
  if (is_connector(i, j)) return 0;
  if (is_physical(i) && is_physical(j)) {
    const int k = instance->network.link_between(i, j);
    if (k < 0) throw DomainError("no link between the given nodes");
    return instance->network.links[static_cast<size_t>(k)].travel_time.at(t);
  }
  throw DomainError("no arc between the given nodes");
}

Money AugmentedNetwork::arc_cost(NodeId i, NodeId j, Minute t, Minute t2, int occupancy,
                                 const CostConfig& cfg) const {
  if (i == j) return 0.0;          // waiting
  if (is_connector(i, j)) return 0.0;
  const int k = instance->network.link_between(i, j);
  if (k < 0) throw DomainError("no link between the given nodes");
  const Link& l = instance->network.links[static_cast<size_t>(k)];
  double mult = 1.0;
  if (const LoadCostOverride* o = cfg.override_for(k)) mult = o->multiplier(occupancy);
  return quantize_cost(cfg.value_of_time * (t2 - t) +
                       mult * cfg.value_of_distance * l.distance);
}

}  // namespace sstvrp
