#pragma once

#include <iosfwd>
#include <vector>

#include "sstvrp/model.hpp"

namespace sstvrp {

enum class Endpoint { Origin, Destination };

// Space-time distance between two requests' origins (f) or destinations (h):
// value-of-distance weighted Euclidean separation plus value-of-time weighted
// gap between the window midpoints.
Money space_time_distance(const Instance& inst, int j, int j2, Endpoint end,
                          const CostConfig& cfg);

struct DissimilarityMatrix {
  int n = 0;
  std::vector<Money> f, h, r;  // row-major n x n; r = max(f, h)

  Money at(int j, int j2) const { return r[static_cast<size_t>(j) * n + j2]; }
  Money f_at(int j, int j2) const { return f[static_cast<size_t>(j) * n + j2]; }
  Money h_at(int j, int j2) const { return h[static_cast<size_t>(j) * n + j2]; }
};

DissimilarityMatrix dissimilarity_matrix(const Instance& inst, const CostConfig& cfg);

void write_dissimilarity_csv(const DissimilarityMatrix& m, std::ostream& out);

struct Cluster {
  int seed = -1;                // candidate (passenger index) the members were assigned to
  std::vector<int> members;     // passenger indexes, sorted
  int vehicle_count = 0;        // n_q
};

struct Clustering {
  std::vector<Cluster> clusters;
  Money objective = 0.0;  // sum of member-to-seed dissimilarities + open cost per cluster
  std::int64_t nodes_explored = 0;
};

// Exact optimum of the passenger-to-cluster assignment program: candidates
// are passenger-seeded, every passenger joins exactly one open cluster,
// clusters hold at most max_cluster_size members, and each open cluster
// charges open_cost. Branch and bound with a transportation-relaxation bound.
Clustering assign_clusters(const DissimilarityMatrix& matrix, int max_cluster_size,
                           Money open_cost);

void write_clustering_csv(const Clustering& c, std::ostream& out);

// n_q identical vehicles per cluster, numbered sequentially from the template.
std::vector<std::vector<VehicleSpec>> allocate_vehicles(const Clustering& clustering,
                                                        const VehicleSpec& vehicle_template);

}  // namespace sstvrp
