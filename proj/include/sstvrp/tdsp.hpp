#pragma once

#include <vector>

#include "sstvrp/common.hpp"
#include "sstvrp/model.hpp"

namespace sstvrp {

// Time-expanded reachability from one physical node: the vehicle may leave
// the source at any minute >= ready (waiting at the source is free) and moves
// over physical links without stopping elsewhere. One run answers
// cheapest-cost / earliest-arrival queries against any target and deadline.
class TdspResult {
 public:
  TdspResult(const PhysicalNetwork* net, NodeId source, Minute ready, Minute horizon);

  NodeId source() const { return source_; }
  Minute ready() const { return ready_; }

  Money cost_at(NodeId node, Minute t) const;
  // Cheapest cost arriving at `node` no later than `deadline`; infinity when
  // unreachable.
  Money cheapest_cost_by(NodeId node, Minute deadline) const;
  Minute earliest_arrival(NodeId node) const;  // kNoTime when unreachable
  // Arrival minute realizing cheapest_cost_by (latest such minute), kNoTime
  // when unreachable.
  Minute cheapest_arrival_by(NodeId node, Minute deadline) const;

  // Node sequence source..node of the label at (node, t); empty when the
  // label is unset.
  std::vector<std::pair<NodeId, Minute>> path_to(NodeId node, Minute t) const;

 private:
  friend TdspResult td_reach(const PhysicalNetwork&, NodeId, Minute, const CostConfig&);
  size_t idx(NodeId node, Minute t) const {
    return static_cast<size_t>(node) * static_cast<size_t>(horizon_ + 1) +
           static_cast<size_t>(t);
  }
  const PhysicalNetwork* net_;
  NodeId source_;
  Minute ready_;
  Minute horizon_;
  std::vector<Money> cost_;
  std::vector<NodeId> pred_node_;
  std::vector<Minute> pred_time_;
};

TdspResult td_reach(const PhysicalNetwork& net, NodeId source, Minute ready,
                    const CostConfig& cfg);

}  // namespace sstvrp
