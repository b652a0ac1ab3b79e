#include "sstvrp/mincostflow.hpp"

#include <limits>
#include <queue>

namespace sstvrp {

MinCostFlow::MinCostFlow(int node_count)
    : graph_(static_cast<size_t>(node_count)), supply_(static_cast<size_t>(node_count), 0) {}

int MinCostFlow::add_arc(int from, int to, int capacity, Money cost) {
  Edge fwd{to, capacity, cost, static_cast<int>(graph_[static_cast<size_t>(to)].size())};
  Edge bwd{from, 0, -cost, static_cast<int>(graph_[static_cast<size_t>(from)].size())};
  graph_[static_cast<size_t>(from)].push_back(fwd);
  graph_[static_cast<size_t>(to)].push_back(bwd);
  arc_ref_.emplace_back(from, static_cast<int>(graph_[static_cast<size_t>(from)].size()) - 1);
  return static_cast<int>(arc_ref_.size()) - 1;
}

void MinCostFlow::set_supply(int node, int supply) {
  supply_[static_cast<size_t>(node)] = supply;
}

std::optional<Money> MinCostFlow::solve() {
  const int n = static_cast<int>(graph_.size());
  const Money inf = money_infinity();
  std::vector<Money> potential(static_cast<size_t>(n), 0.0);
  std::vector<int> excess = supply_;

  // Virtual super source/sink over nodes with nonzero balance.
  std::vector<int> sources, sinks;
  for (int v = 0; v < n; ++v) {
    if (excess[static_cast<size_t>(v)] > 0) sources.push_back(v);
    if (excess[static_cast<size_t>(v)] < 0) sinks.push_back(v);
  }

  Money total_cost = 0.0;
  std::vector<Money> dist(static_cast<size_t>(n));
  std::vector<int> pred_node(static_cast<size_t>(n));
  std::vector<int> pred_edge(static_cast<size_t>(n));

  auto remaining_supply = [&]() {
    int s = 0;
    for (int v : sources) s += std::max(excess[static_cast<size_t>(v)], 0);
    return s;
  };

  while (remaining_supply() > 0) {
    // Dijkstra over reduced costs from all active sources at once.
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(pred_node.begin(), pred_node.end(), -1);
    using Item = std::pair<Money, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    for (int v : sources) {
      if (excess[static_cast<size_t>(v)] > 0) {
        dist[static_cast<size_t>(v)] = 0.0;
        heap.emplace(0.0, v);
      }
    }
    while (!heap.empty()) {
      auto [d, v] = heap.top();
      heap.pop();
      if (d > dist[static_cast<size_t>(v)]) continue;
      for (int e = 0; e < static_cast<int>(graph_[static_cast<size_t>(v)].size()); ++e) {
        const Edge& edge = graph_[static_cast<size_t>(v)][static_cast<size_t>(e)];
        if (edge.capacity <= 0) continue;
        const Money nd = d + edge.cost + potential[static_cast<size_t>(v)] -
                         potential[static_cast<size_t>(edge.to)];
        if (nd < dist[static_cast<size_t>(edge.to)]) {
          dist[static_cast<size_t>(edge.to)] = nd;
          pred_node[static_cast<size_t>(edge.to)] = v;
          pred_edge[static_cast<size_t>(edge.to)] = e;
          heap.emplace(nd, edge.to);
        }
      }
    }

    int target = -1;
    Money best = inf;
    for (int v : sinks) {
      if (excess[static_cast<size_t>(v)] < 0 && dist[static_cast<size_t>(v)] < best) {
        best = dist[static_cast<size_t>(v)];
        target = v;
      }
    }
    if (target < 0) return std::nullopt;  // demand unreachable

    for (int v = 0; v < n; ++v) {
      if (dist[static_cast<size_t>(v)] < inf)
        potential[static_cast<size_t>(v)] += dist[static_cast<size_t>(v)];
    }

    // Bottleneck along the path.
    int push = -excess[static_cast<size_t>(target)];
    int v = target;
    while (pred_node[static_cast<size_t>(v)] >= 0) {
      const int u = pred_node[static_cast<size_t>(v)];
      const Edge& e = graph_[static_cast<size_t>(u)][static_cast<size_t>(
          pred_edge[static_cast<size_t>(v)])];
      push = std::min(push, e.capacity);
      v = u;
    }
    push = std::min(push, excess[static_cast<size_t>(v)]);

    v = target;
    while (pred_node[static_cast<size_t>(v)] >= 0) {
      const int u = pred_node[static_cast<size_t>(v)];
      Edge& e = graph_[static_cast<size_t>(u)][static_cast<size_t>(
          pred_edge[static_cast<size_t>(v)])];
      e.capacity -= push;
      graph_[static_cast<size_t>(e.to)][static_cast<size_t>(e.rev)].capacity += push;
      total_cost += e.cost * push;
      v = u;
    }
    excess[static_cast<size_t>(v)] -= push;
    excess[static_cast<size_t>(target)] += push;
  }

  for (int v : sinks)
    if (excess[static_cast<size_t>(v)] < 0) return std::nullopt;
  return quantize_cost(total_cost);
}

int MinCostFlow::flow_on(int arc_handle) const {
  const auto& [node, index] = arc_ref_[static_cast<size_t>(arc_handle)];
  const Edge& fwd = graph_[static_cast<size_t>(node)][static_cast<size_t>(index)];
  // Residual on the reverse edge equals the pushed flow.
  return graph_[static_cast<size_t>(fwd.to)][static_cast<size_t>(fwd.rev)].capacity;
}

}  // namespace sstvrp
