#include "gnar/stats.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "gnar/parallel.hpp"

namespace gnar {
namespace {

using Adjacency = std::vector<std::vector<std::size_t>>;

// Per-source BFS results needed by the aggregates. Each chunk of sources owns
// one of these, and chunks are merged in index order afterwards.
struct ChunkTotals {
  std::vector<double> betweenness;
  std::uint64_t lcc_distance_sum = 0;
  int lcc_max_distance = 0;
};

std::vector<int> component_labels(const Adjacency& adj, std::size_t& count) {
  std::vector<int> label(adj.size(), -1);
  count = 0;
  std::vector<std::size_t> queue;
  for (std::size_t s = 0; s < adj.size(); ++s) {
    if (label[s] >= 0) continue;
    const int c = static_cast<int>(count++);
    label[s] = c;
    queue.assign(1, s);
    for (std::size_t head = 0; head < queue.size(); ++head) {
      for (std::size_t v : adj[queue[head]]) {
        if (label[v] < 0) {
          label[v] = c;
          queue.push_back(v);
        }
      }
    }
  }
  return label;
}

double local_clustering(const Adjacency& adj, std::size_t v) {
  const auto& nv = adj[v];
  const std::size_t k = nv.size();
  if (k < 2) return 0.0;
  std::size_t links = 0;
  for (std::size_t u : nv) {
    const auto& nu = adj[u];
    auto a = nv.begin();
    auto b = nu.begin();
    while (a != nv.end() && b != nu.end()) {
      if (*a < *b) {
        ++a;
      } else if (*b < *a) {
        ++b;
      } else {
        ++links;
        ++a;
        ++b;
      }
    }
  }
  // Each neighbour pair is counted from both ends.
  return static_cast<double>(links) / static_cast<double>(k * (k - 1));
}

}  // namespace

NetworkStats network_stats(const CountyNetwork& net, unsigned workers) {
  if (net.empty()) throw std::invalid_argument("network_stats: empty network");

  const Adjacency adj = net.undirected_adjacency();
  const std::size_t n = adj.size();
  NetworkStats s;
  s.node_count = n;

  std::size_t degree_sum = 0;
  for (const auto& list : adj) degree_sum += list.size();
  s.edge_count = degree_sum / 2;
  s.avg_degree = static_cast<double>(degree_sum) / static_cast<double>(n);
  s.density = n > 1 ? static_cast<double>(degree_sum) / (static_cast<double>(n) * (n - 1)) : 0.0;

  double clustering_sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) clustering_sum += local_clustering(adj, v);
  s.clustering_coefficient = clustering_sum / static_cast<double>(n);

  const auto label = component_labels(adj, s.component_count);
  std::vector<std::size_t> component_size(s.component_count, 0);
  for (int c : label) ++component_size[static_cast<std::size_t>(c)];
  const auto largest = static_cast<int>(
      std::max_element(component_size.begin(), component_size.end()) - component_size.begin());
  s.largest_component_size = component_size[static_cast<std::size_t>(largest)];

  std::vector<double> closeness(n, 0.0);
  const std::size_t chunk_count = std::min<std::size_t>(n, 64);
  std::vector<ChunkTotals> chunks(chunk_count);

  parallel_for(chunk_count, workers, [&](std::size_t chunk) {
    ChunkTotals& totals = chunks[chunk];
    totals.betweenness.assign(n, 0.0);
    const std::size_t begin = chunk * n / chunk_count;
    const std::size_t end = (chunk + 1) * n / chunk_count;

    std::vector<int> dist(n);
    std::vector<double> sigma(n);
    std::vector<double> delta(n);
    std::vector<std::size_t> order;
    order.reserve(n);

    for (std::size_t src = begin; src < end; ++src) {
      std::fill(dist.begin(), dist.end(), -1);
      std::fill(sigma.begin(), sigma.end(), 0.0);
      std::fill(delta.begin(), delta.end(), 0.0);
      order.clear();
      dist[src] = 0;
      sigma[src] = 1.0;
      order.push_back(src);
      std::uint64_t dist_sum = 0;
      for (std::size_t head = 0; head < order.size(); ++head) {
        const std::size_t u = order[head];
        dist_sum += static_cast<std::uint64_t>(dist[u]);
        for (std::size_t v : adj[u]) {
          if (dist[v] < 0) {
            dist[v] = dist[u] + 1;
            order.push_back(v);
          }
          if (dist[v] == dist[u] + 1) sigma[v] += sigma[u];
        }
      }

      const std::size_t reach = order.size();
      if (reach > 1 && n > 1) {
        const double r1 = static_cast<double>(reach - 1);
        closeness[src] = (r1 / static_cast<double>(dist_sum)) * (r1 / static_cast<double>(n - 1));
      }
      if (label[src] == largest) {
        totals.lcc_distance_sum += dist_sum;
        totals.lcc_max_distance = std::max(totals.lcc_max_distance, dist[order.back()]);
      }

      for (std::size_t k = reach; k-- > 1;) {
        const std::size_t w = order[k];
        for (std::size_t v : adj[w]) {
          if (dist[v] == dist[w] - 1) delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
        }
        totals.betweenness[w] += delta[w];
      }
    }
  });

  std::vector<double> betweenness(n, 0.0);
  std::uint64_t lcc_distance_sum = 0;
  for (const auto& totals : chunks) {
    for (std::size_t v = 0; v < n; ++v) betweenness[v] += totals.betweenness[v];
    lcc_distance_sum += totals.lcc_distance_sum;
    s.diameter = std::max(s.diameter, totals.lcc_max_distance);
  }

  double closeness_sum = 0.0;
  double betweenness_sum = 0.0;
  for (std::size_t v = 0; v < n; ++v) {
    closeness_sum += closeness[v];
    betweenness_sum += betweenness[v];
  }
  s.closeness = closeness_sum / static_cast<double>(n);
  // Each unordered pair was accumulated from both endpoints.
  if (n > 2) {
    const double scale = static_cast<double>(n - 1) * static_cast<double>(n - 2);
    s.betweenness = betweenness_sum / scale / static_cast<double>(n);
  }
  const std::size_t m = s.largest_component_size;
  if (m > 1) {
    s.avg_shortest_path =
        static_cast<double>(lcc_distance_sum) / (static_cast<double>(m) * static_cast<double>(m - 1));
  }
  return s;
}

}  // namespace gnar
