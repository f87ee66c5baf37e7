#pragma once

#include <cstddef>

#include "gnar/network.hpp"

namespace gnar {

/// Graph metrics computed on the undirected view of a network.
///
/// closeness is the mean over nodes of (reach-1)/sum_dist scaled by
/// (reach-1)/(n-1), so nodes in small components are discounted. betweenness is
/// the mean node betweenness normalised by (n-1)(n-2)/2. diameter and
/// avg_shortest_path cover the largest connected component only.
struct NetworkStats {
  std::size_t node_count = 0;
  std::size_t edge_count = 0;
  double avg_degree = 0.0;
  double closeness = 0.0;
  double betweenness = 0.0;
  double clustering_coefficient = 0.0;
  double density = 0.0;
  int diameter = 0;
  double avg_shortest_path = 0.0;
  std::size_t component_count = 0;
  std::size_t largest_component_size = 0;
};

/// Throws std::invalid_argument on an empty network. Result is bit-identical
/// for any worker count.
NetworkStats network_stats(const CountyNetwork& net, unsigned workers = 1);

}  // namespace gnar
