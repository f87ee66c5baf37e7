#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "gnar/node_id.hpp"

namespace gnar {

enum class WeightMode { binary, commuters, great_circle_km };

std::string_view to_string(WeightMode mode);
WeightMode parse_weight_mode(std::string_view text);

struct NodeAttrs {
  std::optional<double> lat;  // degrees
  std::optional<double> lon;  // degrees
  std::string state;          // two-digit state code
  bool external = false;      // set by state extraction for out-of-state nodes

  bool has_coordinates() const noexcept { return lat.has_value() && lon.has_value(); }
};

struct EdgeSpec {
  NodeId from;
  NodeId to;
  double mu = 1.0;
  // Original commuter count, kept so reweighting back to commuters is lossless.
  std::optional<double> flow;
};

/// Outgoing edge in index space.
struct Arc {
  std::size_t target = 0;
  double mu = 1.0;
  std::optional<double> flow;
};

/// Static directed weighted network over geographic units.
///
/// Node order is fixed at construction and defines the column order of every
/// series aligned to this network. Out-arcs of each node are sorted by target
/// index. The network is immutable, so concurrent read-only queries are safe.
class CountyNetwork {
 public:
  CountyNetwork() = default;

  /// Validates ids (unique), edges (known endpoints, no self-loops, no
  /// duplicates, finite mu > 0) and throws std::invalid_argument on violation.
  CountyNetwork(std::vector<NodeId> nodes, std::vector<NodeAttrs> attrs,
                const std::vector<EdgeSpec>& edges, WeightMode mode);

  std::size_t size() const noexcept { return nodes_.size(); }
  bool empty() const noexcept { return nodes_.empty(); }

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const NodeId& node(std::size_t index) const { return nodes_.at(index); }
  const NodeAttrs& attrs(std::size_t index) const { return attrs_.at(index); }

  std::optional<std::size_t> find(const NodeId& id) const;
  /// Throws std::out_of_range naming the id when it is not in the network.
  std::size_t index_of(const NodeId& id) const;

  std::span<const Arc> out_arcs(std::size_t index) const { return adjacency_.at(index); }
  std::optional<double> edge_weight(std::size_t from, std::size_t to) const;

  WeightMode weight_mode() const noexcept { return mode_; }
  std::size_t directed_edge_count() const noexcept { return edge_count_; }

  /// Edges in (source index, target index) order.
  std::vector<EdgeSpec> edges() const;

  /// Symmetrised, deduplicated neighbour lists; each list sorted ascending.
  std::vector<std::vector<std::size_t>> undirected_adjacency() const;

  /// FNV-1a over the ordered node codes, as 16 lowercase hex digits.
  std::string node_order_hash() const;

 private:
  std::vector<NodeId> nodes_;
  std::vector<NodeAttrs> attrs_;
  std::unordered_map<NodeId, std::size_t> index_;
  std::vector<std::vector<Arc>> adjacency_;
  std::size_t edge_count_ = 0;
  WeightMode mode_ = WeightMode::binary;
};

std::string node_order_hash(std::span<const NodeId> nodes);

}  // namespace gnar
