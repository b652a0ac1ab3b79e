#pragma once

#include <optional>
#include <vector>

#include "sstvrp/common.hpp"

namespace sstvrp {

// Successive-shortest-path min-cost flow with Johnson potentials. Costs must
// be nonnegative; capacities and supplies integral.
class MinCostFlow {
 public:
  explicit MinCostFlow(int node_count);

  // Returns the arc handle (index of the forward arc).
  int add_arc(int from, int to, int capacity, Money cost);

  void set_supply(int node, int supply);  // positive = source, negative = demand

  // Routes all supply to all demand; returns the total cost, or nullopt when
  // some demand cannot be met. Total supply must equal total demand.
  std::optional<Money> solve();

  int flow_on(int arc_handle) const;

 private:
  struct Edge {
    int to;
    int capacity;
    Money cost;
    int rev;  // index of the reverse edge in graph_[to]
  };
  std::vector<std::vector<Edge>> graph_;
  std::vector<std::pair<int, int>> arc_ref_;  // handle -> (node, edge index)
  std::vector<int> supply_;
};

}  // namespace sstvrp
