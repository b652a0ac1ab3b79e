#include "sstvrp/dp.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>

namespace sstvrp {

namespace {

void check_fleet(const std::vector<VehicleSpec>& fleet, const Instance& inst) {
  if (fleet.empty()) throw DomainError("cluster fleet is empty");
  const VehicleSpec& first = fleet.front();
  for (const VehicleSpec& v : fleet) {
    if (v.capacity != first.capacity || v.origin_depot != first.origin_depot ||
        v.destination_depot != first.destination_depot ||
        v.earliest_departure != 0 || v.latest_arrival != inst.horizon)
      throw DomainError("cluster vehicles must be identical with horizon [0, T]");
  }
  if (first.origin_depot != inst.depot || first.destination_depot != inst.depot)
    throw DomainError("vehicle depots must match the instance depot");
}

}  // namespace

ClusterProblem build_cluster_problem(const AugmentedNetwork& net,
                                     std::vector<int> member_passengers,
                                     const std::vector<VehicleSpec>& fleet,
                                     const CostConfig& cfg) {
  const Instance& inst = *net.instance;
  check_fleet(fleet, inst);
  std::sort(member_passengers.begin(), member_passengers.end());
  member_passengers.erase(
      std::unique(member_passengers.begin(), member_passengers.end()),
      member_passengers.end());
  const int n = static_cast<int>(member_passengers.size());
  if (n > kMaxClusterSize) throw DomainError("cluster exceeds the state-encoding limit");
  for (int j : member_passengers)
    if (j < 0 || j >= static_cast<int>(inst.passengers.size()))
      throw DomainError("cluster references an unknown passenger");

  ClusterProblem pb;
  pb.net = &net;
  pb.cfg = cfg;
  pb.cfg.horizon = inst.horizon;
  pb.members = std::move(member_passengers);
  pb.capacity = fleet.front().capacity;
  pb.vehicle_count = static_cast<int>(fleet.size());
  pb.horizon = inst.horizon;
  pb.activation_cost = quantize_cost(cfg.vehicle_activation_cost);
  for (int j : pb.members) pb.loads.push_back(inst.passengers[static_cast<size_t>(j)].load);

  pb.state_count = static_cast<StateIndex>(pow3(n));
  pb.all_served = pb.state_count - 1;
  pb.occupancy_by_state.resize(static_cast<size_t>(pb.state_count));
  pb.exterior_by_state.resize(static_cast<size_t>(pb.state_count));
  pb.digit.assign(static_cast<size_t>(n), std::vector<std::uint8_t>());
  for (int m = 0; m < n; ++m)
    pb.digit[static_cast<size_t>(m)].resize(static_cast<size_t>(pb.state_count));
  for (StateIndex s = 0; s < pb.state_count; ++s) {
    int occ = 0;
    bool ext = true;
    StateIndex rest = s;
    for (int m = 0; m < n; ++m) {
      const std::uint8_t d = static_cast<std::uint8_t>(rest % 3);
      rest /= 3;
      pb.digit[static_cast<size_t>(m)][static_cast<size_t>(s)] = d;
      if (d == 1) {
        occ += pb.loads[static_cast<size_t>(m)];
        ext = false;
      }
    }
    pb.occupancy_by_state[static_cast<size_t>(s)] = occ;
    pb.exterior_by_state[static_cast<size_t>(s)] = ext ? 1 : 0;
  }

  // Physical nodes the sweep may move through. Complete-metric instances only
  // need the relevant hosts (direct links dominate any detour); road networks
  // keep everything.
  std::set<NodeId> hosts;
  hosts.insert(inst.depot);
  for (int j : pb.members) {
    hosts.insert(inst.passengers[static_cast<size_t>(j)].origin);
    hosts.insert(inst.passengers[static_cast<size_t>(j)].destination);
  }
  std::vector<NodeId> physical;
  if (inst.network.complete_metric) {
    physical.assign(hosts.begin(), hosts.end());
  } else {
    for (const Node& node : inst.network.nodes) physical.push_back(node.id);
  }

  pb.aug_to_compact.assign(net.nodes.size(), -1);
  auto add_compact = [&](NodeId aug) {
    pb.aug_to_compact[static_cast<size_t>(aug)] = static_cast<int>(pb.compact_to_aug.size());
    pb.compact_to_aug.push_back(aug);
    return pb.aug_to_compact[static_cast<size_t>(aug)];
  };
  for (NodeId v : physical) add_compact(v);
  pb.depot_host_c = pb.aug_to_compact[static_cast<size_t>(inst.depot)];
  pb.depot_origin_c = add_compact(net.depot_origin);
  pb.depot_dest_c = add_compact(net.depot_destination);
  for (int m = 0; m < n; ++m) {
    const int j = pb.members[static_cast<size_t>(m)];
    pb.pickup_c.push_back(add_compact(net.pickup_dummy[static_cast<size_t>(j)]));
    pb.dropoff_c.push_back(add_compact(net.dropoff_dummy[static_cast<size_t>(j)]));
  }
  pb.node_count = static_cast<int>(pb.compact_to_aug.size());
  if (pb.node_count >= 65535 || pb.horizon >= 65535 || pb.state_count >= 65535)
    throw DomainError("cluster dimensions exceed the packed-label limits");

  // Arc order makes a single pass per (t, state) slice sufficient: exits from
  // dummies resolve before anything reads their hosts, and the depot entry
  // reads hosts last. Moves advance time; entries advance the state index.
  auto& arcs = pb.arcs;
  {
    ClusterArc a;
    a.kind = ArcKind::IdleBypass;
    a.from = pb.depot_origin_c;
    a.to = pb.depot_dest_c;
    arcs.push_back(a);
  }
  {
    ClusterArc a;
    a.kind = ArcKind::DepotExit;
    a.from = pb.depot_origin_c;
    a.to = pb.depot_host_c;
    arcs.push_back(a);
  }
  for (int m = 0; m < n; ++m) {
    const PassengerRequest& p = inst.passengers[static_cast<size_t>(pb.members[static_cast<size_t>(m)])];
    ClusterArc a;
    a.kind = ArcKind::DummyExit;
    a.member = m;
    a.from = pb.pickup_c[static_cast<size_t>(m)];
    a.to = pb.aug_to_compact[static_cast<size_t>(p.origin)];
    arcs.push_back(a);
    a.from = pb.dropoff_c[static_cast<size_t>(m)];
    a.to = pb.aug_to_compact[static_cast<size_t>(p.destination)];
    arcs.push_back(a);
  }
  for (NodeId v : physical) {
    for (int k : inst.network.links_out(v)) {
      const Link& l = inst.network.links[static_cast<size_t>(k)];
      if (pb.aug_to_compact[static_cast<size_t>(l.to)] < 0 ||
          !net.is_physical(l.to))
        continue;
      ClusterArc a;
      a.kind = ArcKind::Move;
      a.from = pb.aug_to_compact[static_cast<size_t>(l.from)];
      a.to = pb.aug_to_compact[static_cast<size_t>(l.to)];
      a.link = k;
      a.distance = l.distance;
      a.has_override = cfg.override_for(k) != nullptr;
      if (l.travel_time.is_constant() && !a.has_override) {
        a.constant = true;
        a.tt_const = l.travel_time.at(0);
        a.cost_const = quantize_cost(cfg.value_of_time * a.tt_const +
                                     cfg.value_of_distance * l.distance);
      } else {
        a.tt_by_minute.resize(static_cast<size_t>(pb.horizon));
        if (!a.has_override) a.cost_by_minute.resize(static_cast<size_t>(pb.horizon));
        for (Minute t = 0; t < pb.horizon; ++t) {
          const Minute tt = l.travel_time.at(t);
          a.tt_by_minute[static_cast<size_t>(t)] = tt;
          if (!a.has_override)
            a.cost_by_minute[static_cast<size_t>(t)] = quantize_cost(
                cfg.value_of_time * tt + cfg.value_of_distance * l.distance);
        }
      }
      arcs.push_back(a);
    }
  }
  for (int m = 0; m < n; ++m) {
    const PassengerRequest& p = inst.passengers[static_cast<size_t>(pb.members[static_cast<size_t>(m)])];
    {
      ClusterArc a;
      a.kind = ArcKind::PickupEntry;
      a.member = m;
      a.from = pb.aug_to_compact[static_cast<size_t>(p.origin)];
      a.to = pb.pickup_c[static_cast<size_t>(m)];
      a.window_lo = p.depart_earliest;
      a.window_hi = p.depart_latest;
      arcs.push_back(a);
    }
    {
      ClusterArc a;
      a.kind = ArcKind::DropoffEntry;
      a.member = m;
      a.from = pb.aug_to_compact[static_cast<size_t>(p.destination)];
      a.to = pb.dropoff_c[static_cast<size_t>(m)];
      a.window_lo = p.arrive_earliest;
      a.window_hi = p.arrive_latest;
      arcs.push_back(a);
    }
  }
  {
    ClusterArc a;
    a.kind = ArcKind::DepotEntry;
    a.from = pb.depot_host_c;
    a.to = pb.depot_dest_c;
    arcs.push_back(a);
  }
  {
    ClusterArc a;
    a.kind = ArcKind::Wait;
    a.from = pb.depot_origin_c;
    a.to = pb.depot_origin_c;
    arcs.push_back(a);
    a.from = a.to = pb.depot_dest_c;
    arcs.push_back(a);
    for (int m = 0; m < n; ++m) {
      a.from = a.to = pb.pickup_c[static_cast<size_t>(m)];
      arcs.push_back(a);
      a.from = a.to = pb.dropoff_c[static_cast<size_t>(m)];
      arcs.push_back(a);
    }
  }
  return pb;
}

BlockLabels::BlockLabels(int node_count, StateIndex state_count, Minute horizon)
    : node_count_(node_count),
      state_count_(state_count),
      horizon_(horizon),
      slices_(static_cast<size_t>(horizon) + 1) {}

BlockLabels::Slice& BlockLabels::ensure(Minute t) {
  auto& slot = slices_[static_cast<size_t>(t)];
  if (!slot) {
    slot = std::make_unique<Slice>();
    const size_t slots = static_cast<size_t>(node_count_) * static_cast<size_t>(state_count_);
    slot->cost.assign(slots, money_infinity());
    slot->pred.assign(slots, PackedPred{});
    slot->touched.assign((static_cast<size_t>(state_count_) + 63) / 64, 0);
    allocated_bytes_ +=
        slots * (sizeof(Money) + sizeof(PackedPred)) + slot->touched.size() * 8;
  }
  return *slot;
}

Money BlockLabels::cost(int node, Minute t, StateIndex s) const {
  const auto& slot = slices_[static_cast<size_t>(t)];
  if (!slot) return money_infinity();
  return slot->cost[static_cast<size_t>(s) * static_cast<size_t>(node_count_) +
                    static_cast<size_t>(node)];
}

PackedPred BlockLabels::pred(int node, Minute t, StateIndex s) const {
  const auto& slot = slices_[static_cast<size_t>(t)];
  if (!slot) return PackedPred{};
  return slot->pred[static_cast<size_t>(s) * static_cast<size_t>(node_count_) +
                    static_cast<size_t>(node)];
}

Label BlockLabels::label_view(int node, Minute t, StateIndex s, int vehicle_index) const {
  Label out;
  out.cost = cost(node, t, s);
  if (out.cost == money_infinity()) return out;  // sentinels per initialization
  const PackedPred p = pred(node, t, s);
  if (p.flags == kPredNone) return out;
  out.pred_node = p.node;
  out.pred_time = p.time;
  out.pred_state = p.state;
  out.pred_vehicle = p.flags == kPredHandover ? vehicle_index - 1 : vehicle_index;
  return out;
}

const Money* BlockLabels::cost_row(Minute t, StateIndex s) const {
  const auto& slot = slices_[static_cast<size_t>(t)];
  if (!slot) return nullptr;
  return &slot->cost[static_cast<size_t>(s) * static_cast<size_t>(node_count_)];
}

bool BlockLabels::state_touched(Minute t, StateIndex s) const {
  const auto& slot = slices_[static_cast<size_t>(t)];
  if (!slot) return false;
  return (slot->touched[static_cast<size_t>(s) >> 6] >>
          (static_cast<size_t>(s) & 63)) & 1;
}

bool BlockLabels::relax(int node, Minute t, StateIndex s, Money c, PackedPred p) {
  Slice& slot = ensure(t);
  const size_t i = static_cast<size_t>(s) * static_cast<size_t>(node_count_) +
                   static_cast<size_t>(node);
  if (!(c < slot.cost[i])) return false;
  slot.cost[i] = c;
  slot.pred[i] = p;
  slot.touched[static_cast<size_t>(s) >> 6] |= std::uint64_t{1} << (static_cast<size_t>(s) & 63);
  return true;
}

void BlockLabels::poke(int node, Minute t, StateIndex s, Money c, PackedPred p) {
  Slice& slot = ensure(t);
  const size_t i = static_cast<size_t>(s) * static_cast<size_t>(node_count_) +
                   static_cast<size_t>(node);
  slot.cost[i] = c;
  slot.pred[i] = p;
  slot.touched[static_cast<size_t>(s) >> 6] |= std::uint64_t{1} << (static_cast<size_t>(s) & 63);
}

namespace {

// Applies `f(arc, target_node, t2, s2, candidate_cost)` for every relaxation
// available from slice row (t, s). Shared by the sweep and the convergence
// check so the two can never disagree on arc semantics.
template <class F>
inline void scan_arcs_at(const ClusterProblem& pb, Minute t, StateIndex s,
                         const Money* row, std::span<const StateIndex> p3, F&& f) {
  const Minute T = pb.horizon;
  for (const ClusterArc& a : pb.arcs) {
    const Money c0 = row[a.from];
    if (!(c0 < money_infinity())) continue;
    switch (a.kind) {
      case ArcKind::Wait:
        if (t < T) f(a, a.to, t + 1, s, c0);
        break;
      case ArcKind::IdleBypass:
      case ArcKind::DummyExit:
        f(a, a.to, t, s, c0);
        break;
      case ArcKind::DepotExit:
        f(a, a.to, t, s, c0 + pb.activation_cost);
        break;
      case ArcKind::DepotEntry:
        if (pb.exterior_by_state[static_cast<size_t>(s)]) f(a, a.to, t, s, c0);
        break;
      case ArcKind::PickupEntry: {
        if (t < a.window_lo || t > a.window_hi) break;
        if (pb.digit[static_cast<size_t>(a.member)][static_cast<size_t>(s)] != 0) break;
        if (pb.occupancy_by_state[static_cast<size_t>(s)] +
                pb.loads[static_cast<size_t>(a.member)] >
            pb.capacity)
          break;
        f(a, a.to, t, s + p3[static_cast<size_t>(a.member)], c0);
        break;
      }
      case ArcKind::DropoffEntry: {
        if (t < a.window_lo || t > a.window_hi) break;
        if (pb.digit[static_cast<size_t>(a.member)][static_cast<size_t>(s)] != 1) break;
        f(a, a.to, t, s + p3[static_cast<size_t>(a.member)], c0);
        break;
      }
      case ArcKind::Move: {
        if (t >= T) break;
        Minute tt;
        Money mc;
        if (a.constant) {
          tt = a.tt_const;
          mc = a.cost_const;
        } else if (!a.has_override) {
          tt = a.tt_by_minute[static_cast<size_t>(t)];
          mc = a.cost_by_minute[static_cast<size_t>(t)];
        } else {
          tt = a.tt_by_minute.empty() ? 0 : a.tt_by_minute[static_cast<size_t>(t)];
          const LoadCostOverride* o = pb.cfg.override_for(a.link);
          const double mult =
              o ? o->multiplier(pb.occupancy_by_state[static_cast<size_t>(s)]) : 1.0;
          mc = quantize_cost(pb.cfg.value_of_time * tt +
                             mult * pb.cfg.value_of_distance * a.distance);
        }
        const Minute t2 = t + tt;
        if (t2 > T) break;
        f(a, a.to, t2, s, c0 + mc);
        break;
      }
    }
  }
}

std::array<StateIndex, kMaxClusterSize> pow3_table(int n) {
  std::array<StateIndex, kMaxClusterSize> p3{};
  for (int m = 0; m < n; ++m) p3[static_cast<size_t>(m)] = static_cast<StateIndex>(pow3(m));
  return p3;
}

}  // namespace

BlockLabels run_block_sweep(const ClusterProblem& pb, std::span<const Money> seed,
                            bool first_block) {
  BlockLabels labels(pb.node_count, pb.state_count, pb.horizon);
  for (StateIndex s = 0; s < pb.state_count; ++s) {
    const Money c = seed[static_cast<size_t>(s)];
    if (c < money_infinity()) {
      PackedPred p;
      if (first_block) {
        p.flags = kPredNone;
      } else {
        p.flags = kPredHandover;
        p.node = static_cast<std::uint16_t>(pb.depot_dest_c);
        p.time = static_cast<std::uint16_t>(pb.horizon);
        p.state = static_cast<std::uint16_t>(s);
      }
      labels.relax(pb.depot_origin_c, 0, s, c, p);
    }
  }

  const auto p3 = pow3_table(static_cast<int>(pb.members.size()));
  const std::span<const StateIndex> p3s(p3.data(), pb.members.size());
  for (Minute t = 0; t <= pb.horizon; ++t) {
    if (!labels.slice_exists(t)) continue;
    for (StateIndex s = 0; s < pb.state_count; ++s) {
      if (!labels.state_touched(t, s)) continue;
      // Row pointer stays valid: same-slice relaxations reuse the allocation.
      const Money* row = labels.cost_row(t, s);
      scan_arcs_at(pb, t, s, row, p3s,
                   [&](const ClusterArc& a, int to, Minute t2, StateIndex s2, Money c) {
                     labels.relax(to, t2, s2,c,
                                  PackedPred{static_cast<std::uint16_t>(a.from),
                                             static_cast<std::uint16_t>(t),
                                             static_cast<std::uint16_t>(s), kPredNormal});
                   });
    }
  }
  return labels;
}

bool bellman_converged(const ClusterProblem& pb, const BlockLabels& labels) {
  const auto p3 = pow3_table(static_cast<int>(pb.members.size()));
  const std::span<const StateIndex> p3s(p3.data(), pb.members.size());
  bool converged = true;
  std::vector<Money> row(static_cast<size_t>(pb.node_count));
  for (Minute t = 0; t <= pb.horizon && converged; ++t) {
    if (!labels.slice_exists(t)) continue;
    for (StateIndex s = 0; s < pb.state_count && converged; ++s) {
      if (!labels.state_touched(t, s)) continue;
      for (int v = 0; v < pb.node_count; ++v)
        row[static_cast<size_t>(v)] = labels.cost(v, t, s);
      scan_arcs_at(pb, t, s, row.data(), p3s,
                   [&](const ClusterArc&, int to, Minute t2, StateIndex s2, Money c) {
                     if (c < labels.cost(to, t2, s2)) converged = false;
                   });
    }
  }
  return converged;
}

namespace {

struct Vertex {
  int node;
  Minute t;
  StateIndex s;
};

}  // namespace

BlockRoute extract_block_route(const ClusterProblem& pb, const BlockLabels& labels,
                               StateIndex end_state) {
  const AugmentedNetwork& net = *pb.net;
  const Minute T = pb.horizon;
  if (labels.cost(pb.depot_dest_c, T, end_state) == money_infinity())
    throw StructuralError("terminal vertex carries no label");

  std::vector<Vertex> path;
  Vertex cur{pb.depot_dest_c, T, end_state};
  while (true) {
    path.push_back(cur);
    if (labels.cost(cur.node, cur.t, cur.s) == money_infinity())
      throw StructuralError("broken predecessor chain");
    const PackedPred p = labels.pred(cur.node, cur.t, cur.s);
    if (p.flags != kPredNormal) {
      if (cur.node != pb.depot_origin_c || cur.t != 0)
        throw StructuralError("predecessor chain did not reach the opening layer");
      break;
    }
    cur = Vertex{p.node, static_cast<Minute>(p.time), static_cast<StateIndex>(p.state)};
  }
  std::reverse(path.begin(), path.end());

  BlockRoute out;
  out.opening_state = path.front().s;
  out.cost = quantize_cost(labels.cost(pb.depot_dest_c, T, end_state) -
                           labels.cost(pb.depot_origin_c, 0, out.opening_state));

  auto aug = [&](int c) { return pb.compact_to_aug[static_cast<size_t>(c)]; };
  auto member_of_compact = [&](int c) {
    for (size_t m = 0; m < pb.pickup_c.size(); ++m) {
      if (pb.pickup_c[m] == c) return std::pair<int, bool>{static_cast<int>(m), true};
      if (pb.dropoff_c[m] == c) return std::pair<int, bool>{static_cast<int>(m), false};
    }
    return std::pair<int, bool>{-1, false};
  };

  std::vector<RouteEvent>& ev = out.events;
  for (size_t i = 0; i + 1 < path.size(); ++i) {
    const Vertex& u = path[i];
    const Vertex& v = path[i + 1];
    if (u.node == v.node && v.t == u.t + 1) {  // waiting
      if (!ev.empty() && ev.back().type == EventType::Wait &&
          ev.back().node == aug(u.node) && ev.back().t_end == u.t) {
        ev.back().t_end = v.t;
      } else {
        ev.push_back({EventType::Wait, aug(u.node), -1, u.t, v.t, -1, 0.0});
      }
      continue;
    }
    if (u.node == pb.depot_origin_c && v.node == pb.depot_dest_c) {
      ev.push_back({EventType::DepartIdle, aug(u.node), aug(v.node), u.t, v.t, -1, 0.0});
      ev.push_back({EventType::ArriveDepot, aug(v.node), -1, v.t, v.t, -1, 0.0});
      continue;
    }
    if (u.node == pb.depot_origin_c) {
      ev.push_back({EventType::DepartDepot, aug(v.node), -1, u.t, v.t, -1,
                    pb.activation_cost});
      continue;
    }
    if (v.node == pb.depot_dest_c) {
      ev.push_back({EventType::ArriveDepot, aug(v.node), -1, v.t, v.t, -1, 0.0});
      continue;
    }
    if (v.s != u.s) {  // pickup / drop-off entry
      const auto [m, is_pickup] = member_of_compact(v.node);
      if (m < 0) throw StructuralError("state change off an activity dummy");
      const int passenger_id =
          net.instance->passengers[static_cast<size_t>(pb.members[static_cast<size_t>(m)])].id;
      ev.push_back({is_pickup ? EventType::Pickup : EventType::Dropoff, aug(v.node), -1,
                    v.t, v.t, passenger_id, 0.0});
      if (is_pickup) ++out.pickups;
      continue;
    }
    if (net.is_physical(aug(u.node)) && net.is_physical(aug(v.node))) {
      const Money c = net.arc_cost(aug(u.node), aug(v.node), u.t, v.t,
                                   pb.occupancy_by_state[static_cast<size_t>(u.s)], pb.cfg);
      ev.push_back({EventType::Move, aug(u.node), aug(v.node), u.t, v.t, -1, c});
      continue;
    }
    // dummy exit connectors carry no event
  }

  Money sum = 0.0;
  for (const RouteEvent& e : ev) sum += e.cost;
  if (sum != out.cost) throw StructuralError("route events do not add up to the label cost");
  return out;
}

ClusterSolution solve_cluster(const AugmentedNetwork& net,
                              const std::vector<int>& member_passengers,
                              const std::vector<VehicleSpec>& fleet, const CostConfig& cfg) {
  ClusterProblem pb = build_cluster_problem(net, member_passengers, fleet, cfg);
  const int blocks = pb.vehicle_count;
  const StateIndex S = pb.state_count;
  const Money inf = money_infinity();

  ClusterSolution sol;
  sol.members = pb.members;

  std::vector<std::vector<Money>> frontiers(
      static_cast<size_t>(blocks) + 1, std::vector<Money>(static_cast<size_t>(S), inf));
  frontiers[0][0] = 0.0;  // all-zeros opening state, Algorithm-1 seeding

  for (int u = 0; u < blocks; ++u) {
    BlockLabels labels = run_block_sweep(pb, frontiers[static_cast<size_t>(u)], u == 0);
    sol.label_bytes_peak = std::max(sol.label_bytes_peak, labels.allocated_bytes());
    for (StateIndex s = 0; s < S; ++s) {
      if (pb.exterior_by_state[static_cast<size_t>(s)])
        frontiers[static_cast<size_t>(u) + 1][static_cast<size_t>(s)] =
            labels.cost(pb.depot_dest_c, pb.horizon, s);
    }
  }

  const Money total = frontiers[static_cast<size_t>(blocks)][static_cast<size_t>(pb.all_served)];
  if (!(total < inf)) {
    sol.feasible = false;
    sol.total_cost = inf;
    if (pb.members.size() == 1) {
      sol.culprit_passenger =
          net.instance->passengers[static_cast<size_t>(pb.members[0])].id;
      sol.infeasible_reason = "passenger " + std::to_string(sol.culprit_passenger) +
                              " cannot be served within its windows";
      return sol;
    }
    for (int j : pb.members) {
      ClusterSolution probe = solve_cluster(net, {j}, {fleet.front()}, cfg);
      if (!probe.feasible) {
        sol.culprit_passenger = net.instance->passengers[static_cast<size_t>(j)].id;
        sol.infeasible_reason = "passenger " + std::to_string(sol.culprit_passenger) +
                                " cannot be served within its windows";
        return sol;
      }
    }
    sol.infeasible_reason = "jointly infeasible";
    return sol;
  }

  // Extraction pass, last block first; each block is re-swept from its stored
  // opening frontier so only one block's labels are ever resident.
  std::vector<BlockRoute> routes(static_cast<size_t>(blocks));
  StateIndex end_state = pb.all_served;
  for (int u = blocks - 1; u >= 0; --u) {
    BlockLabels labels = run_block_sweep(pb, frontiers[static_cast<size_t>(u)], u == 0);
    sol.label_bytes_peak = std::max(sol.label_bytes_peak, labels.allocated_bytes());
    routes[static_cast<size_t>(u)] = extract_block_route(pb, labels, end_state);
    end_state = routes[static_cast<size_t>(u)].opening_state;
  }
  if (end_state != 0) throw StructuralError("first block does not open at all-zeros");

  sol.feasible = true;
  sol.total_cost = total;
  Money check = 0.0;
  for (int u = 0; u < blocks; ++u) {
    BlockRoute& br = routes[static_cast<size_t>(u)];
    VehicleRoute vr;
    vr.vehicle_id = fleet[static_cast<size_t>(u)].id;
    vr.cost = br.cost;
    vr.pickups = br.pickups;
    vr.events = std::move(br.events);
    if (u + 1 < blocks) {
      const StateIndex handed = routes[static_cast<size_t>(u) + 1].opening_state;
      vr.events.push_back({EventType::Handover, net.depot_destination, net.depot_origin,
                           pb.horizon, 0, -1, 0.0});
      sol.handover_states.push_back(handed);
    }
    if (vr.pickups > 0) ++sol.used_vehicles;
    check += vr.cost;
    sol.vehicles.push_back(std::move(vr));
  }
  if (check != total) throw StructuralError("block costs do not add up to the optimum");
  return sol;
}

FlowBalanceReport validate_flow_balance(const ClusterSolution& sol,
                                        const AugmentedNetwork& net) {
  FlowBalanceReport rep;
  if (!sol.feasible) {
    rep.ok = false;
    rep.violation = "solution is infeasible";
    return rep;
  }
  const Instance& inst = *net.instance;
  const Minute T = inst.horizon;
  const int n = static_cast<int>(sol.members.size());
  const StateIndex all_served = static_cast<StateIndex>(pow3(n) - 1);

  // member index by instance passenger id
  std::map<int, int> member_by_id;
  for (int m = 0; m < n; ++m)
    member_by_id[inst.passengers[static_cast<size_t>(sol.members[static_cast<size_t>(m)])].id] = m;

  struct VKey {
    int vehicle;
    NodeId node;
    Minute t;
    StateIndex s;
    auto operator<=>(const VKey&) const = default;
  };
  std::map<VKey, std::pair<int, int>> degree;  // in, out
  auto arc = [&](const VKey& a, const VKey& b) {
    degree[a].second++;
    degree[b].first++;
  };

  std::vector<StateIndex> opening(static_cast<size_t>(sol.vehicles.size()), 0);
  for (size_t u = 1; u < sol.vehicles.size(); ++u)
    opening[u] = sol.handover_states[u - 1];

  std::vector<StateIndex> ending(sol.vehicles.size(), 0);
  for (size_t u = 0; u < sol.vehicles.size(); ++u) {
    const VehicleRoute& vr = sol.vehicles[u];
    NodeId pos = net.depot_origin;
    Minute t = 0;
    StateIndex s = opening[u];
    auto here = [&]() { return VKey{static_cast<int>(u), pos, t, s}; };
    auto ensure_host = [&](NodeId host) -> bool {
      if (pos == host) return true;
      const AugmentedNode& cur = net.node(pos);
      if (!net.is_physical(pos) && cur.host == host) {
        VKey a = here();
        pos = host;
        arc(a, here());
        return true;
      }
      return false;
    };
    for (const RouteEvent& e : vr.events) {
      switch (e.type) {
        case EventType::Wait: {
          for (Minute w = e.t_begin; w < e.t_end; ++w) {
            VKey a = here();
            t = w + 1;
            arc(a, here());
          }
          break;
        }
        case EventType::DepartIdle: {
          VKey a = here();
          pos = net.depot_destination;
          arc(a, here());
          break;
        }
        case EventType::DepartDepot: {
          VKey a = here();
          pos = inst.depot;
          arc(a, here());
          break;
        }
        case EventType::Move: {
          if (!ensure_host(e.node)) {
            rep.ok = false;
            rep.violation = "route discontinuity before a move";
            return rep;
          }
          VKey a = here();
          pos = e.to_node;
          t = e.t_end;
          arc(a, here());
          break;
        }
        case EventType::Pickup:
        case EventType::Dropoff: {
          auto it = member_by_id.find(e.passenger);
          if (it == member_by_id.end()) {
            rep.ok = false;
            rep.violation = "event references a passenger outside the cluster";
            return rep;
          }
          const int m = it->second;
          const NodeId dummy = e.type == EventType::Pickup
                                   ? net.pickup_dummy[static_cast<size_t>(sol.members[static_cast<size_t>(m)])]
                                   : net.dropoff_dummy[static_cast<size_t>(sol.members[static_cast<size_t>(m)])];
          if (!ensure_host(net.node(dummy).host)) {
            rep.ok = false;
            rep.violation = "route discontinuity before a service event";
            return rep;
          }
          VKey a = here();
          pos = dummy;
          s = static_cast<StateIndex>(s + pow3(m));
          arc(a, here());
          break;
        }
        case EventType::ArriveDepot: {
          if (!ensure_host(inst.depot)) {
            rep.ok = false;
            rep.violation = "route discontinuity before the depot arrival";
            return rep;
          }
          VKey a = here();
          pos = net.depot_destination;
          arc(a, here());
          break;
        }
        case EventType::Handover:
          break;  // handled below from handover_states
      }
    }
    if (pos != net.depot_destination || t != T) {
      rep.ok = false;
      rep.violation = "vehicle " + std::to_string(vr.vehicle_id) +
                      " does not end at the destination depot at T";
      return rep;
    }
    ending[u] = s;
  }

  // Handover equality across exterior layers (state preserved, time reset).
  for (size_t u = 0; u + 1 < sol.vehicles.size(); ++u) {
    if (ending[u] != opening[u + 1]) {
      rep.ok = false;
      rep.violation = "handover after vehicle " +
                      std::to_string(sol.vehicles[u].vehicle_id) +
                      " changes the service state";
      return rep;
    }
    arc(VKey{static_cast<int>(u), net.depot_destination, T, ending[u]},
        VKey{static_cast<int>(u) + 1, net.depot_origin, 0, opening[u + 1]});
  }

  const VKey source{0, net.depot_origin, 0, 0};
  const VKey sink{static_cast<int>(sol.vehicles.size()) - 1, net.depot_destination, T,
                  all_served};
  for (const auto& [key, deg] : degree) {
    int balance = deg.second - deg.first;  // out - in
    int expect = 0;
    if (key == source) expect = 1;
    if (key == sink) expect = -1;
    if (balance != expect) {
      rep.ok = false;
      rep.violation = "flow imbalance at vehicle " + std::to_string(key.vehicle) +
                      ", node " + std::to_string(key.node) + ", t=" +
                      std::to_string(key.t) + ", state=" + std::to_string(key.s);
      return rep;
    }
  }
  if (degree.find(source) == degree.end() || degree.find(sink) == degree.end()) {
    rep.ok = false;
    rep.violation = "source or sink vertex missing from the flow";
    return rep;
  }
  return rep;
}

std::int64_t memory_estimate(int alpha, std::int64_t t_size, std::int64_t a_size) {
  if (alpha < 1) throw DomainError("alpha must be at least 1");
  if (t_size < 1 || a_size < 1) throw DomainError("sizes must be positive");
  __int128 v = 5;
  v *= alpha;
  for (int i = 0; i < alpha; ++i) v *= 3;
  v *= t_size;
  v *= a_size;
  if (v > static_cast<__int128>(std::numeric_limits<std::int64_t>::max()))
    throw DomainError("memory estimate overflows");
  return static_cast<std::int64_t>(v);
}

int max_alpha(std::int64_t budget_bytes) {
  constexpr std::int64_t kReference = 1000;
  if (budget_bytes < memory_estimate(1, kReference, kReference))
    throw DomainError("budget below the alpha = 1 requirement");
  int alpha = 1;
  while (alpha < kMaxClusterSize * 3 &&
         memory_estimate(alpha + 1, kReference, kReference) <= budget_bytes)
    ++alpha;
  return alpha;
}

}  // namespace sstvrp
