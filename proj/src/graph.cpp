#include "gnar/graph.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gnar {

std::set<NodeId> neighbor_set(const CountyNetwork& net, const std::set<NodeId>& sources) {
  std::vector<char> in_source(net.size(), 0);
  for (const auto& id : sources) in_source[net.index_of(id)] = 1;
  std::set<NodeId> out;
  for (const auto& id : sources) {
    for (const auto& arc : net.out_arcs(net.index_of(id))) {
      if (!in_source[arc.target]) out.insert(net.node(arc.target));
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> stage_neighbor_indices(const CountyNetwork& net,
                                                             std::size_t root, int r_max) {
  if (root >= net.size()) throw std::out_of_range("node index out of range");
  if (r_max < 1) throw std::invalid_argument("r_max must be at least 1");

  // Each stage is the neighbour set of the previous one minus everything seen.
  std::vector<char> seen(net.size(), 0);
  seen[root] = 1;
  std::vector<std::vector<std::size_t>> stages;
  stages.reserve(static_cast<std::size_t>(r_max));
  std::vector<std::size_t> frontier{root};
  for (int r = 1; r <= r_max; ++r) {
    std::vector<std::size_t> next;
    for (std::size_t u : frontier) {
      for (const auto& arc : net.out_arcs(u)) {
        if (!seen[arc.target]) {
          seen[arc.target] = 1;
          next.push_back(arc.target);
        }
      }
    }
    std::sort(next.begin(), next.end());
    stages.push_back(next);
    frontier = std::move(next);
  }
  return stages;
}

StageNeighborhood stage_neighbors(const CountyNetwork& net, const NodeId& root, int r_max) {
  const auto stages = stage_neighbor_indices(net, net.index_of(root), r_max);
  StageNeighborhood out{root, {}};
  for (const auto& stage : stages) {
    std::set<NodeId> ids;
    for (std::size_t k : stage) ids.insert(net.node(k));
    out.stages.push_back(std::move(ids));
  }
  return out;
}

namespace {

std::vector<WeightedNeighbor> weights_for_stage(const CountyNetwork& net, std::size_t root,
                                                int r, const std::vector<std::size_t>& stage) {
  std::vector<WeightedNeighbor> out;
  out.reserve(stage.size());
  double total = 0.0;
  for (std::size_t k : stage) {
    const double mu = net.edge_weight(root, k).value_or(1.0 / r);
    out.push_back({k, mu});
    total += mu;
  }
  for (auto& w : out) w.weight /= total;
  return out;
}

}  // namespace

std::map<NodeId, double> connection_weights(const CountyNetwork& net, const NodeId& root, int r) {
  if (r < 1) throw std::invalid_argument("stage must be at least 1");
  const std::size_t i = net.index_of(root);
  const auto stages = stage_neighbor_indices(net, i, r);
  std::map<NodeId, double> out;
  for (const auto& w : weights_for_stage(net, i, r, stages.back())) {
    out.emplace(net.node(w.index), w.weight);
  }
  return out;
}

NeighborTable neighbor_table(const CountyNetwork& net, int max_stage) {
  NeighborTable table(net.size());
  if (max_stage < 1) return table;
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto stages = stage_neighbor_indices(net, i, max_stage);
    table[i].reserve(stages.size());
    for (int r = 1; r <= max_stage; ++r) {
      table[i].push_back(weights_for_stage(net, i, r, stages[static_cast<std::size_t>(r - 1)]));
    }
  }
  return table;
}

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  auto check = [](double lat, double lon) {
    if (!(lat >= -90.0 && lat <= 90.0) || !(lon >= -180.0 && lon <= 180.0)) {
      throw std::domain_error("coordinate out of range: (" + std::to_string(lat) + ", " +
                              std::to_string(lon) + ")");
    }
  };
  check(lat1, lon1);
  check(lat2, lon2);
  constexpr double to_rad = std::numbers::pi / 180.0;
  const double dlat = (lat2 - lat1) * to_rad;
  const double dlon = (lon2 - lon1) * to_rad;
  const double s_lat = std::sin(dlat / 2.0);
  const double s_lon = std::sin(dlon / 2.0);
  double a = s_lat * s_lat + std::cos(lat1 * to_rad) * std::cos(lat2 * to_rad) * s_lon * s_lon;
  a = std::clamp(a, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(a));
}

CountyNetwork reweight(const CountyNetwork& net, WeightMode mode) {
  std::vector<EdgeSpec> edges = net.edges();
  std::vector<NodeAttrs> attrs;
  attrs.reserve(net.size());
  for (std::size_t i = 0; i < net.size(); ++i) attrs.push_back(net.attrs(i));

  for (auto& e : edges) {
    switch (mode) {
      case WeightMode::binary:
        e.mu = 1.0;
        break;
      case WeightMode::commuters:
        if (!e.flow) {
          throw std::invalid_argument("edge " + e.from.code() + "->" + e.to.code() +
                                      " has no commuter count");
        }
        e.mu = *e.flow;
        break;
      case WeightMode::great_circle_km: {
        const auto& a = attrs[net.index_of(e.from)];
        const auto& b = attrs[net.index_of(e.to)];
        if (!a.has_coordinates() || !b.has_coordinates()) {
          throw std::invalid_argument("missing coordinates for edge " + e.from.code() + "->" +
                                      e.to.code());
        }
        e.mu = haversine_km(*a.lat, *a.lon, *b.lat, *b.lon);
        if (!(e.mu > 0.0)) {
          throw std::invalid_argument("co-located centroids on edge " + e.from.code() + "->" +
                                      e.to.code() + " give zero great-circle distance");
        }
        break;
      }
    }
  }
  return CountyNetwork(net.nodes(), std::move(attrs), edges, mode);
}

std::map<std::size_t, std::size_t> degree_histogram(const CountyNetwork& net) {
  std::map<std::size_t, std::size_t> hist;
  for (const auto& list : net.undirected_adjacency()) ++hist[list.size()];
  return hist;
}

CountyNetwork extract_state_subnetwork(const CountyNetwork& net, std::string_view state,
                                       bool include_external) {
  const std::size_t n = net.size();
  std::vector<char> inside(n, 0);
  bool any = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (net.attrs(i).state == state) {
      inside[i] = 1;
      any = true;
    }
  }
  if (!any) throw std::invalid_argument("unknown state code '" + std::string(state) + "'");

  std::vector<char> keep = inside;
  if (include_external) {
    for (std::size_t i = 0; i < n; ++i) {
      for (const auto& arc : net.out_arcs(i)) {
        if (inside[i] || inside[arc.target]) keep[i] = keep[arc.target] = 1;
      }
    }
  }

  std::vector<NodeId> nodes;
  std::vector<NodeAttrs> attrs;
  for (std::size_t i = 0; i < n; ++i) {
    if (!keep[i]) continue;
    nodes.push_back(net.node(i));
    NodeAttrs a = net.attrs(i);
    a.external = !inside[i];
    attrs.push_back(std::move(a));
  }
  std::vector<EdgeSpec> edges;
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& arc : net.out_arcs(i)) {
      const bool touches = inside[i] || inside[arc.target];
      const bool both_inside = inside[i] && inside[arc.target];
      if (include_external ? touches : both_inside) {
        edges.push_back(EdgeSpec{net.node(i), net.node(arc.target), arc.mu, arc.flow});
      }
    }
  }
  return CountyNetwork(std::move(nodes), std::move(attrs), edges, net.weight_mode());
}

CountyNetwork triangular_lattice(int rows, int cols) {
  if (rows < 2 || cols < 2) throw std::invalid_argument("lattice dimensions must be >= 2");
  const long total = static_cast<long>(rows) * cols;
  if (total > 99999) throw std::invalid_argument("lattice too large for 5-digit node ids");

  std::vector<NodeId> nodes;
  nodes.reserve(static_cast<std::size_t>(total));
  char buf[8];
  for (long k = 0; k < total; ++k) {
    std::snprintf(buf, sizeof buf, "%05ld", k);
    nodes.emplace_back(buf);
  }
  auto id = [&](int r, int c) -> const NodeId& {
    return nodes[static_cast<std::size_t>(r) * static_cast<std::size_t>(cols) +
                 static_cast<std::size_t>(c)];
  };

  std::vector<EdgeSpec> edges;
  edges.reserve(static_cast<std::size_t>(2 * (3 * total - 2 * rows - 2 * cols + 1)));
  auto link = [&](int r1, int c1, int r2, int c2) {
    edges.push_back(EdgeSpec{id(r1, c1), id(r2, c2), 1.0, std::nullopt});
    edges.push_back(EdgeSpec{id(r2, c2), id(r1, c1), 1.0, std::nullopt});
  };
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (c + 1 < cols) link(r, c, r, c + 1);
      if (r + 1 < rows) link(r, c, r + 1, c);
      if (r + 1 < rows && c + 1 < cols) {
        if (c % 2 == 0) {
          link(r, c, r + 1, c + 1);
        } else {
          link(r, c + 1, r + 1, c);
        }
      }
    }
  }
  return CountyNetwork(std::move(nodes), {}, edges, WeightMode::binary);
}

}  // namespace gnar
