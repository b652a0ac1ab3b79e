#include "sstvrp/tdsp.hpp"

#include <algorithm>

namespace sstvrp {

TdspResult::TdspResult(const PhysicalNetwork* net, NodeId source, Minute ready,
                       Minute horizon)
    : net_(net), source_(source), ready_(ready), horizon_(horizon) {
  const size_t slots = net->nodes.size() * static_cast<size_t>(horizon + 1);
  cost_.assign(slots, money_infinity());
  pred_node_.assign(slots, -1);
  pred_time_.assign(slots, kNoTime);
}

Money TdspResult::cost_at(NodeId node, Minute t) const {
  if (t < 0 || t > horizon_) return money_infinity();
  return cost_[idx(node, t)];
}

Money TdspResult::cheapest_cost_by(NodeId node, Minute deadline) const {
  Money best = money_infinity();
  for (Minute t = 0; t <= std::min(deadline, horizon_); ++t)
    best = std::min(best, cost_[idx(node, t)]);
  return best;
}

Minute TdspResult::earliest_arrival(NodeId node) const {
  for (Minute t = 0; t <= horizon_; ++t)
    if (cost_[idx(node, t)] < money_infinity()) return t;
  return kNoTime;
}

Minute TdspResult::cheapest_arrival_by(NodeId node, Minute deadline) const {
  const Money best = cheapest_cost_by(node, deadline);
  if (best == money_infinity()) return kNoTime;
  for (Minute t = std::min(deadline, horizon_); t >= 0; --t)
    if (cost_[idx(node, t)] == best) return t;
  return kNoTime;
}

std::vector<std::pair<NodeId, Minute>> TdspResult::path_to(NodeId node, Minute t) const {
  std::vector<std::pair<NodeId, Minute>> path;
  if (t < 0 || t > horizon_ || cost_[idx(node, t)] == money_infinity()) return path;
  NodeId v = node;
  Minute tv = t;
  while (v >= 0) {
    path.emplace_back(v, tv);
    const size_t i = idx(v, tv);
    const NodeId pv = pred_node_[i];
    const Minute pt = pred_time_[i];
    v = pv;
    tv = pt;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

TdspResult td_reach(const PhysicalNetwork& net, NodeId source, Minute ready,
                    const CostConfig& cfg) {
  TdspResult r(&net, source, ready, cfg.horizon);
  for (Minute t = std::max<Minute>(ready, 0); t <= cfg.horizon; ++t)
    r.cost_[r.idx(source, t)] = 0.0;

  // Single ascending sweep: every link advances time by at least one minute.
  for (Minute t = std::max<Minute>(ready, 0); t <= cfg.horizon; ++t) {
    for (NodeId v = 0; v < static_cast<NodeId>(net.nodes.size()); ++v) {
      const Money base = r.cost_[r.idx(v, t)];
      if (base == money_infinity()) continue;
      if (t >= cfg.horizon) continue;  // profiles cover [0, T)
      for (int k : net.links_out(v)) {
        const Link& l = net.links[static_cast<size_t>(k)];
        const Minute tt = l.travel_time.at(t);
        const Minute t2 = t + tt;
        if (t2 > cfg.horizon) continue;
        double mult = 1.0;
        if (const LoadCostOverride* o = cfg.override_for(k)) mult = o->multiplier(0);
        const Money c = base + quantize_cost(cfg.value_of_time * tt +
                                             mult * cfg.value_of_distance * l.distance);
        const size_t i2 = r.idx(l.to, t2);
        if (c < r.cost_[i2]) {
          r.cost_[i2] = c;
          r.pred_node_[i2] = v;
          r.pred_time_[i2] = t;
        }
      }
    }
  }
  return r;
}

}  // namespace sstvrp
