#include "sstvrp/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "sstvrp/mincostflow.hpp"

namespace sstvrp {

Money space_time_distance(const Instance& inst, int j, int j2, Endpoint end,
                          const CostConfig& cfg) {
  const PassengerRequest& a = inst.passengers[static_cast<size_t>(j)];
  const PassengerRequest& b = inst.passengers[static_cast<size_t>(j2)];
  const Node& na = inst.network.nodes[static_cast<size_t>(
      end == Endpoint::Origin ? a.origin : a.destination)];
  const Node& nb = inst.network.nodes[static_cast<size_t>(
      end == Endpoint::Origin ? b.origin : b.destination)];
  const double mid_a = end == Endpoint::Origin
                           ? (a.depart_earliest + a.depart_latest) / 2.0
                           : (a.arrive_earliest + a.arrive_latest) / 2.0;
  const double mid_b = end == Endpoint::Origin
                           ? (b.depart_earliest + b.depart_latest) / 2.0
                           : (b.arrive_earliest + b.arrive_latest) / 2.0;
  return quantize_cost(cfg.value_of_distance * euclidean(na, nb) +
                       cfg.value_of_time * std::abs(mid_a - mid_b));
}

DissimilarityMatrix dissimilarity_matrix(const Instance& inst, const CostConfig& cfg) {
  const int n = static_cast<int>(inst.passengers.size());
  if (n < 1) throw DomainError("dissimilarity matrix needs at least one passenger");
  DissimilarityMatrix m;
  m.n = n;
  m.f.resize(static_cast<size_t>(n) * n);
  m.h.resize(static_cast<size_t>(n) * n);
  m.r.resize(static_cast<size_t>(n) * n);
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const size_t i = static_cast<size_t>(j) * n + k;
      m.f[i] = space_time_distance(inst, j, k, Endpoint::Origin, cfg);
      m.h[i] = space_time_distance(inst, j, k, Endpoint::Destination, cfg);
      m.r[i] = std::max(m.f[i], m.h[i]);
    }
  }
  return m;
}

void write_dissimilarity_csv(const DissimilarityMatrix& m, std::ostream& out) {
  out << "j,j2,f,h,r\n";
  for (int j = 0; j < m.n; ++j)
    for (int k = 0; k < m.n; ++k)
      out << j << ',' << k << ',' << m.f_at(j, k) << ',' << m.h_at(j, k) << ','
          << m.at(j, k) << '\n';
}

namespace {

// The search runs on the objective scaled by alpha: the relaxation charge
// y_q >= sum_j z_jq / alpha then becomes exactly open_cost per assigned slot,
// so bounds, incumbents, and fathoming compare exact dyadic values.
struct BnbContext {
  const DissimilarityMatrix* matrix;
  int n;
  int alpha;
  Money open_cost;         // unscaled M
  Money best_cost_scaled;  // alpha * objective
  std::vector<int> best_assignment;  // passenger -> seed
  std::int64_t nodes = 0;

  Money scaled_r(int j, int q) const { return matrix->at(j, q) * alpha; }
};

enum class SeedState : std::uint8_t { Free, Open, Closed };

struct TransportSolution {
  bool feasible = false;
  Money bound = 0.0;                       // relaxation value incl. forced-open charges
  std::vector<int> assignment;             // passenger -> seed
  std::vector<int> fill;                   // per seed member count
};

// LP relaxation of the assignment program with y_q >= sum_j z_jq / alpha:
// a transportation problem, solved exactly by min-cost flow (integral).
TransportSolution solve_transport(const BnbContext& ctx,
                                  const std::vector<SeedState>& state) {
  TransportSolution out;
  int open_or_free = 0;
  for (int q = 0; q < ctx.n; ++q)
    if (state[static_cast<size_t>(q)] != SeedState::Closed) ++open_or_free;
  if (static_cast<std::int64_t>(open_or_free) * ctx.alpha < ctx.n) return out;

  // nodes: 0 = source, 1 + j = passenger, 1 + n + q = seed bin, last = sink
  const int source = 0;
  const int sink = 1 + 2 * ctx.n;
  MinCostFlow flow(sink + 1);
  for (int j = 0; j < ctx.n; ++j) flow.add_arc(source, 1 + j, 1, 0.0);
  std::vector<std::vector<int>> arc_of(static_cast<size_t>(ctx.n),
                                       std::vector<int>(static_cast<size_t>(ctx.n), -1));
  for (int j = 0; j < ctx.n; ++j) {
    for (int q = 0; q < ctx.n; ++q) {
      if (state[static_cast<size_t>(q)] == SeedState::Closed) continue;
      const Money extra =
          state[static_cast<size_t>(q)] == SeedState::Free ? ctx.open_cost_per_slot : 0.0;
      arc_of[static_cast<size_t>(j)][static_cast<size_t>(q)] =
          flow.add_arc(1 + j, 1 + ctx.n + q, 1, ctx.matrix->at(j, q) + extra);
    }
  }
  for (int q = 0; q < ctx.n; ++q) {
    if (state[static_cast<size_t>(q)] == SeedState::Closed) continue;
    flow.add_arc(1 + ctx.n + q, sink, ctx.alpha, 0.0);
  }
  flow.set_supply(source, ctx.n);
  flow.set_supply(sink, -ctx.n);
  const auto cost = flow.solve();
  if (!cost) return out;

  out.feasible = true;
  out.bound = *cost;
  for (int q = 0; q < ctx.n; ++q)
    if (state[static_cast<size_t>(q)] == SeedState::Open) out.bound += ctx.open_cost;
  out.assignment.assign(static_cast<size_t>(ctx.n), -1);
  out.fill.assign(static_cast<size_t>(ctx.n), 0);
  for (int j = 0; j < ctx.n; ++j) {
    for (int q = 0; q < ctx.n; ++q) {
      const int h = arc_of[static_cast<size_t>(j)][static_cast<size_t>(q)];
      if (h >= 0 && flow.flow_on(h) > 0) {
        out.assignment[static_cast<size_t>(j)] = q;
        out.fill[static_cast<size_t>(q)]++;
        break;
      }
    }
  }
  return out;
}

Money true_cost(const BnbContext& ctx, const std::vector<int>& assignment,
                const std::vector<SeedState>& state) {
  Money total = 0.0;
  std::vector<bool> used(static_cast<size_t>(ctx.n), false);
  for (int j = 0; j < ctx.n; ++j) {
    total += ctx.matrix->at(j, assignment[static_cast<size_t>(j)]);
    used[static_cast<size_t>(assignment[static_cast<size_t>(j)])] = true;
  }
  for (int q = 0; q < ctx.n; ++q)
    if (used[static_cast<size_t>(q)] || state[static_cast<size_t>(q)] == SeedState::Open)
      total += ctx.open_cost;
  return total;
}

void branch(BnbContext& ctx, std::vector<SeedState>& state) {
  ++ctx.nodes;
  TransportSolution t = solve_transport(ctx, state);
  if (!t.feasible) return;
  if (!(t.bound < ctx.best_cost)) return;

  // Feasible rounding of the relaxation: open every used bin.
  const Money rounded = true_cost(ctx, t.assignment, state);
  if (rounded < ctx.best_cost) {
    ctx.best_cost = rounded;
    ctx.best_assignment = t.assignment;
  }

  // Integral in y when every used free bin is exactly full.
  int branch_q = -1;
  int branch_fill = -1;
  for (int q = 0; q < ctx.n; ++q) {
    if (state[static_cast<size_t>(q)] != SeedState::Free) continue;
    const int fill = t.fill[static_cast<size_t>(q)];
    if (fill > 0 && fill < ctx.alpha && fill > branch_fill) {
      branch_fill = fill;
      branch_q = q;
    }
  }
  if (branch_q < 0) return;  // relaxation already integral; rounding captured it

  state[static_cast<size_t>(branch_q)] = SeedState::Open;
  branch(ctx, state);
  state[static_cast<size_t>(branch_q)] = SeedState::Closed;
  branch(ctx, state);
  state[static_cast<size_t>(branch_q)] = SeedState::Free;
}

}  // namespace

Clustering assign_clusters(const DissimilarityMatrix& matrix, int max_cluster_size,
                           Money open_cost) {
  if (max_cluster_size < 1) throw DomainError("max cluster size must be at least 1");
  if (matrix.n < 1) throw DomainError("nothing to cluster");

  BnbContext ctx;
  ctx.matrix = &matrix;
  ctx.n = matrix.n;
  ctx.alpha = max_cluster_size;
  ctx.open_cost = quantize_cost(open_cost);
  ctx.open_cost_per_slot =
      std::floor(ctx.open_cost / max_cluster_size * 1048576.0) / 1048576.0;
  ctx.best_cost = money_infinity();

  std::vector<SeedState> state(static_cast<size_t>(ctx.n), SeedState::Free);
  branch(ctx, state);
  if (ctx.best_assignment.empty())
    throw StructuralError("clustering search found no assignment");

  Clustering out;
  out.nodes_explored = ctx.nodes;
  out.objective = ctx.best_cost;
  std::vector<std::vector<int>> members(static_cast<size_t>(ctx.n));
  for (int j = 0; j < ctx.n; ++j)
    members[static_cast<size_t>(ctx.best_assignment[static_cast<size_t>(j)])].push_back(j);
  for (int q = 0; q < ctx.n; ++q) {
    if (members[static_cast<size_t>(q)].empty()) continue;
    Cluster c;
    c.seed = q;
    c.members = members[static_cast<size_t>(q)];
    std::sort(c.members.begin(), c.members.end());
    c.vehicle_count = static_cast<int>(c.members.size());
    out.clusters.push_back(std::move(c));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const Cluster& a, const Cluster& b) { return a.members[0] < b.members[0]; });
  return out;
}

void write_clustering_csv(const Clustering& c, std::ostream& out) {
  out << "cluster,seed,passenger\n";
  for (size_t q = 0; q < c.clusters.size(); ++q)
    for (int j : c.clusters[q].members)
      out << q << ',' << c.clusters[q].seed << ',' << j << '\n';
}

std::vector<std::vector<VehicleSpec>> allocate_vehicles(const Clustering& clustering,
                                                        const VehicleSpec& vehicle_template) {
  std::vector<std::vector<VehicleSpec>> fleets;
  int next_id = 1;
  for (const Cluster& c : clustering.clusters) {
    std::vector<VehicleSpec> fleet;
    for (int i = 0; i < c.vehicle_count; ++i) {
      VehicleSpec v = vehicle_template;
      v.id = next_id++;
      fleet.push_back(v);
    }
    fleets.push_back(std::move(fleet));
  }
  return fleets;
}

}  // namespace sstvrp
