#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string_view>
#include <vector>

#include "gnar/network.hpp"

namespace gnar {

/// Nodes outside `sources` reachable by one out-edge from some member.
/// Throws std::out_of_range for ids that are not in the network.
std::set<NodeId> neighbor_set(const CountyNetwork& net, const std::set<NodeId>& sources);

struct StageNeighborhood {
  NodeId root;
  std::vector<std::set<NodeId>> stages;  // stages[r - 1] holds the stage-r set

  const std::set<NodeId>& stage(int r) const { return stages.at(static_cast<std::size_t>(r - 1)); }
};

StageNeighborhood stage_neighbors(const CountyNetwork& net, const NodeId& root, int r_max);

/// Index-space stage sets, each sorted ascending. Result has r_max entries.
std::vector<std::vector<std::size_t>> stage_neighbor_indices(const CountyNetwork& net,
                                                             std::size_t root, int r_max);

struct WeightedNeighbor {
  std::size_t index = 0;
  double weight = 0.0;
};

/// Normalised connection weights of `root` over its stage-r set.
///
/// Stage-1 members use their edge weight mu. Members at stage r > 1 are never
/// adjacent to the root and take mu = 1 / r, the reciprocal of their hop
/// distance. An empty stage set yields an empty result.
std::map<NodeId, double> connection_weights(const CountyNetwork& net, const NodeId& root, int r);

/// Per-node, per-stage weighted neighbour lists: table[i][r - 1].
using NeighborTable = std::vector<std::vector<std::vector<WeightedNeighbor>>>;

NeighborTable neighbor_table(const CountyNetwork& net, int max_stage);

/// Great-circle distance on a sphere of radius kEarthRadiusKm.
/// Throws std::domain_error for out-of-range coordinates.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

inline constexpr double kEarthRadiusKm = 6371.0;

/// Same edge set with weights recomputed for `mode`.
CountyNetwork reweight(const CountyNetwork& net, WeightMode mode);

/// Undirected degree -> node count.
std::map<std::size_t, std::size_t> degree_histogram(const CountyNetwork& net);

/// Restricts the network to one state's nodes. With `include_external`, nodes
/// from other states that share an edge with the state are kept and tagged
/// external, along with every edge touching an in-state node.
CountyNetwork extract_state_subnetwork(const CountyNetwork& net, std::string_view state,
                                       bool include_external);

/// rows x cols grid with horizontal and vertical edges and one diagonal per
/// cell. Diagonal orientation alternates with column parity. Each undirected
/// edge is stored as two arcs with mu = 1.
CountyNetwork triangular_lattice(int rows, int cols);

}  // namespace gnar
