#include "sstvrp/service_state.hpp"

namespace sstvrp {

std::int64_t pow3(int k) {
  std::int64_t p = 1;
  for (int i = 0; i < k; ++i) p *= 3;
  return p;
}

StateIndex encode_state(std::span<const std::uint8_t> statuses) {
  if (statuses.size() > kMaxClusterSize) throw DomainError("state vector too long");
  std::int64_t index = 0;
  std::int64_t weight = 1;
  for (std::uint8_t k : statuses) {
    if (k > 2) throw DomainError("passenger status outside {0,1,2}");
    index += k * weight;
    weight *= 3;
  }
  return static_cast<StateIndex>(index);
}

std::vector<std::uint8_t> decode_state(StateIndex index, int n) {
  if (index < 0 || index >= pow3(n)) throw DomainError("state index out of range");
  std::vector<std::uint8_t> k(static_cast<size_t>(n));
  for (int j = 0; j < n; ++j) {
    k[static_cast<size_t>(j)] = static_cast<std::uint8_t>(index % 3);
    index /= 3;
  }
  return k;
}

int occupancy(StateIndex index, std::span<const int> loads) {
  int total = 0;
  for (size_t j = 0; j < loads.size(); ++j) {
    if (index % 3 == 1) total += loads[j];
    index /= 3;
  }
  return total;
}

bool is_exterior(StateIndex index, int n) {
  for (int j = 0; j < n; ++j) {
    if (index % 3 == 1) return false;
    index /= 3;
  }
  return true;
}

StateCounts count_states(int n) {
  std::int64_t interior = 1;
  std::int64_t exterior = 1;
  for (int i = 0; i < n; ++i) {
    interior *= 3;
    exterior *= 2;
  }
  return {interior, exterior};
}

std::vector<Transition> feasible_transitions(StateIndex state, const NodeContext& where,
                                             int capacity, std::span<const int> loads) {
  std::vector<Transition> out;
  out.push_back({state, state, ServiceEvent::None, -1});
  if (where.kind == NodeContext::PickupOf) {
    const int j = where.passenger;
    if (status_of(state, j) == 0 &&
        occupancy(state, loads) + loads[static_cast<size_t>(j)] <= capacity) {
      out.push_back({state, static_cast<StateIndex>(state + pow3(j)),
                     ServiceEvent::Pickup, j});
    }
  } else if (where.kind == NodeContext::DropoffOf) {
    const int j = where.passenger;
    if (status_of(state, j) == 1) {
      out.push_back({state, static_cast<StateIndex>(state + pow3(j)),
                     ServiceEvent::Dropoff, j});
    }
  }
  return out;
}

std::int64_t reachable_state_count_unit_loads(int n, int capacity) {
  // sum_{k=0}^{cap} C(n,k) * 2^(n-k)
  std::int64_t total = 0;
  for (int k = 0; k <= std::min(n, capacity); ++k) {
    std::int64_t binom = 1;
    for (int i = 0; i < k; ++i) binom = binom * (n - i) / (i + 1);
    std::int64_t twos = 1;
    for (int i = 0; i < n - k; ++i) twos *= 2;
    total += binom * twos;
  }
  return total;
}

}  // namespace sstvrp
