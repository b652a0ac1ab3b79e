#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sstvrp/common.hpp"

namespace sstvrp {

// Cumulative service states: one base-3 digit per passenger of a cluster,
// little-endian (passenger 0 is the lowest digit). 0 = waiting, 1 = onboard,
// 2 = delivered.
using StateIndex = std::int32_t;

// Largest per-cluster passenger count the state encoding supports.
constexpr int kMaxClusterSize = 10;

std::int64_t pow3(int k);

StateIndex encode_state(std::span<const std::uint8_t> statuses);
std::vector<std::uint8_t> decode_state(StateIndex index, int n);

inline int status_of(StateIndex index, int passenger) {
  return static_cast<int>((index / pow3(passenger)) % 3);
}

// Total load of the passengers currently onboard (status 1).
int occupancy(StateIndex index, std::span<const int> loads);

// True when no passenger is onboard; only these states may cross a block
// boundary (opening/ending layers).
bool is_exterior(StateIndex index, int n);

struct StateCounts {
  std::int64_t interior;  // 3^n
  std::int64_t exterior;  // 2^n
};
StateCounts count_states(int n);

enum class ServiceEvent : std::uint8_t { None, Pickup, Dropoff };

// Where a transition may fire.
struct NodeContext {
  enum Kind : std::uint8_t { Other, PickupOf, DropoffOf } kind = Other;
  int passenger = -1;

  static NodeContext other() { return {}; }
  static NodeContext pickup(int j) { return {PickupOf, j}; }
  static NodeContext dropoff(int j) { return {DropoffOf, j}; }
};

struct Transition {
  StateIndex from = 0;
  StateIndex to = 0;
  ServiceEvent event = ServiceEvent::None;
  int passenger = -1;
};

// Transitions available from `state` at the given node: the identity, plus
// the single pickup/drop-off the node hosts when precedence and capacity
// allow it.
std::vector<Transition> feasible_transitions(StateIndex state, const NodeContext& where,
                                             int capacity, std::span<const int> loads);

// Number of states reachable from all-zeros under unit loads and the given
// capacity: sum over k<=capacity of C(n,k) * 2^(n-k).
std::int64_t reachable_state_count_unit_loads(int n, int capacity);

}  // namespace sstvrp
