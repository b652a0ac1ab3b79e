#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "sstvrp/model.hpp"
#include "sstvrp/service_state.hpp"

namespace sstvrp {

enum class EventType : std::uint8_t {
  DepartDepot,  // leave the origin depot toward the network (activation charged)
  DepartIdle,   // origin depot straight to destination depot, vehicle unused
  Move,         // physical link traversal
  Wait,         // self-loop minutes at a dummy node
  Pickup,
  Dropoff,
  ArriveDepot,
  Handover,     // state carried to the next vehicle block
};

struct RouteEvent {
  EventType type{};
  NodeId node = -1;     // position (augmented id; Move: from-host)
  NodeId to_node = -1;  // Move: to-host
  Minute t_begin = 0;
  Minute t_end = 0;
  int passenger = -1;   // instance passenger id for Pickup/Dropoff
  Money cost = 0.0;
};

struct VehicleRoute {
  int vehicle_id = -1;
  std::vector<RouteEvent> events;
  Money cost = 0.0;
  int pickups = 0;
};

struct ClusterSolution {
  bool feasible = false;
  std::string infeasible_reason;
  int culprit_passenger = -1;  // instance passenger id, -1 when not determinable
  std::vector<int> members;    // passenger indexes, sorted (state digit order)
  std::vector<VehicleRoute> vehicles;
  std::vector<StateIndex> handover_states;  // one per block boundary
  Money total_cost = 0.0;
  int used_vehicles = 0;
  std::size_t label_bytes_peak = 0;
};

// The spec's five-field label view.
struct Label {
  Money cost = 0.0;
  int pred_node = -1;
  Minute pred_time = kNoTime;
  StateIndex pred_state = -1;
  int pred_vehicle = -1;
};

enum class ArcKind : std::uint8_t {
  IdleBypass,    // depot-origin dummy -> depot-destination dummy
  DepotExit,     // depot-origin dummy -> depot host (activation charged)
  DummyExit,     // activity dummy -> host
  Move,          // physical link
  PickupEntry,   // host -> pickup dummy, flips 0 -> 1
  DropoffEntry,  // host -> drop-off dummy, flips 1 -> 2
  DepotEntry,    // depot host -> depot-destination dummy, exterior states only
  Wait,          // dummy self-loop
};

struct ClusterArc {
  ArcKind kind{};
  int from = -1;  // compact node ids
  int to = -1;
  int member = -1;           // member index for entry arcs
  Minute window_lo = 0, window_hi = 0;
  int link = -1;             // physical link for Move
  bool constant = false;
  Minute tt_const = 0;
  Money cost_const = 0.0;
  std::vector<Minute> tt_by_minute;   // Move arcs with table profiles
  std::vector<Money> cost_by_minute;
  bool has_override = false;
  double distance = 0.0;
};

// Per-cluster view of the hyper network: compact node ids over the depot
// dummies, the members' activity dummies, and the physical nodes the sweep
// may use; arcs listed in an order that makes one pass per (t, state)
// sufficient (same-slice connectors resolve before anything reads them).
struct ClusterProblem {
  const AugmentedNetwork* net = nullptr;
  CostConfig cfg;
  std::vector<int> members;  // passenger indexes, sorted
  std::vector<int> loads;
  int capacity = 0;
  int vehicle_count = 0;
  Minute horizon = 0;
  StateIndex state_count = 1;
  StateIndex all_served = 0;
  std::vector<int> occupancy_by_state;
  std::vector<std::uint8_t> exterior_by_state;
  std::vector<std::vector<std::uint8_t>> digit;  // [member][state]
  std::vector<NodeId> compact_to_aug;
  std::vector<int> aug_to_compact;
  int node_count = 0;
  int depot_origin_c = -1, depot_dest_c = -1, depot_host_c = -1;
  std::vector<int> pickup_c, dropoff_c;  // per member
  std::vector<ClusterArc> arcs;
  Money activation_cost = 0.0;
};

ClusterProblem build_cluster_problem(const AugmentedNetwork& net,
                                     std::vector<int> member_passengers,
                                     const std::vector<VehicleSpec>& fleet,
                                     const CostConfig& cfg);

struct PackedPred {
  std::uint16_t node = 0;
  std::uint16_t time = 0;
  std::uint16_t state = 0;
  std::uint8_t flags = 0;  // kPredNone / kPredNormal / kPredHandover
};

constexpr std::uint8_t kPredNone = 0;      // block-1 source, Algorithm-1 sentinel
constexpr std::uint8_t kPredNormal = 1;
constexpr std::uint8_t kPredHandover = 2;  // seeded from the previous block

// Labels of one vehicle block; time slices allocate on first write.
class BlockLabels {
 public:
  BlockLabels(int node_count, StateIndex state_count, Minute horizon);

  Money cost(int node, Minute t, StateIndex s) const;
  PackedPred pred(int node, Minute t, StateIndex s) const;
  Label label_view(int node, Minute t, StateIndex s, int vehicle_index) const;
  bool relax(int node, Minute t, StateIndex s, Money cost, PackedPred pred);
  void poke(int node, Minute t, StateIndex s, Money cost, PackedPred pred);  // test hook

  bool slice_exists(Minute t) const { return slices_[static_cast<size_t>(t)] != nullptr; }
  bool state_touched(Minute t, StateIndex s) const;
  // Contiguous per-node costs of one (t, state) row; nullptr when the slice
  // was never written.
  const Money* cost_row(Minute t, StateIndex s) const;
  std::size_t allocated_bytes() const { return allocated_bytes_; }

  int node_count() const { return node_count_; }
  StateIndex state_count() const { return state_count_; }
  Minute horizon() const { return horizon_; }

 private:
  struct Slice {
    std::vector<Money> cost;
    std::vector<PackedPred> pred;
    std::vector<std::uint64_t> touched;
  };
  Slice& ensure(Minute t);
  int node_count_;
  StateIndex state_count_;
  Minute horizon_;
  std::vector<std::unique_ptr<Slice>> slices_;
  std::size_t allocated_bytes_ = 0;
};

// Forward sweep of one block (Bellman relaxation in (t, state, arc) order).
// `seed` holds the opening-layer costs per state (money_infinity() = absent).
BlockLabels run_block_sweep(const ClusterProblem& problem, std::span<const Money> seed,
                            bool first_block);

// True when no arc can still improve any label (the Bellman condition holds
// network-wide). Exposed for property tests.
bool bellman_converged(const ClusterProblem& problem, const BlockLabels& labels);

struct BlockRoute {
  std::vector<RouteEvent> events;
  StateIndex opening_state = 0;
  Money cost = 0.0;  // terminal label minus the seed cost
  int pickups = 0;
};

// Backtracks the packed predecessors from (depot destination, T, end_state)
// to the opening layer. Throws StructuralError on a broken chain.
BlockRoute extract_block_route(const ClusterProblem& problem, const BlockLabels& labels,
                               StateIndex end_state);

// Algorithm: sequential vehicle blocks over the cluster's state-space-time
// network, exterior-layer handover between blocks, answer read at
// (depot destination, T, all-served) of the last block.
ClusterSolution solve_cluster(const AugmentedNetwork& net,
                              const std::vector<int>& member_passengers,
                              const std::vector<VehicleSpec>& fleet,
                              const CostConfig& cfg);

struct FlowBalanceReport {
  bool ok = true;
  std::string violation;  // first violated vertex / constraint
};

// Rebuilds the vertex flow of a solution and checks source/sink unit flow,
// conservation at interior vertexes, and state equality across handovers.
FlowBalanceReport validate_flow_balance(const ClusterSolution& solution,
                                        const AugmentedNetwork& net);

// Label-slot bytes of the five-field label table: 5 * alpha * 3^alpha *
// t_size * a_size.
std::int64_t memory_estimate(int alpha, std::int64_t t_size, std::int64_t a_size);

// Largest alpha whose estimate at the reference sizes (t = a = 10^3) fits the
// budget. Throws DomainError when even alpha = 1 does not fit.
int max_alpha(std::int64_t budget_bytes);

}  // namespace sstvrp
