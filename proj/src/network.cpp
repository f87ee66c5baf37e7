#include "gnar/network.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <stdexcept>

namespace gnar {

NodeId::NodeId(std::string_view code) {
  if (code.size() != 5 ||
      !std::all_of(code.begin(), code.end(), [](unsigned char c) { return std::isdigit(c); })) {
    throw std::invalid_argument("node id must be exactly 5 decimal digits: '" +
                                std::string(code) + "'");
  }
  code_ = std::string(code);
}

NodeId NodeId::normalize(std::string_view raw) { return NodeId(normalize_fips(raw)); }

std::string normalize_fips(std::string_view raw) {
  auto first = raw.find_first_not_of(" \t\r\n\"");
  auto last = raw.find_last_not_of(" \t\r\n\"");
  if (first == std::string_view::npos) {
    throw std::invalid_argument("empty FIPS code");
  }
  std::string_view trimmed = raw.substr(first, last - first + 1);
  if (trimmed.empty() || trimmed.size() > 5 ||
      !std::all_of(trimmed.begin(), trimmed.end(),
                   [](unsigned char c) { return std::isdigit(c); })) {
    throw std::invalid_argument("invalid FIPS code: '" + std::string(raw) + "'");
  }
  return std::string(5 - trimmed.size(), '0') + std::string(trimmed);
}

std::string_view to_string(WeightMode mode) {
  switch (mode) {
    case WeightMode::binary: return "binary";
    case WeightMode::commuters: return "commuters";
    case WeightMode::great_circle_km: return "great_circle_km";
  }
  return "binary";
}

WeightMode parse_weight_mode(std::string_view text) {
  if (text == "binary") return WeightMode::binary;
  if (text == "commuters") return WeightMode::commuters;
  if (text == "great_circle_km" || text == "great_circle") return WeightMode::great_circle_km;
  throw std::invalid_argument("unknown weight mode: '" + std::string(text) + "'");
}

CountyNetwork::CountyNetwork(std::vector<NodeId> nodes, std::vector<NodeAttrs> attrs,
                             const std::vector<EdgeSpec>& edges, WeightMode mode)
    : nodes_(std::move(nodes)), attrs_(std::move(attrs)), mode_(mode) {
  if (attrs_.empty()) attrs_.resize(nodes_.size());
  if (attrs_.size() != nodes_.size()) {
    throw std::invalid_argument("node attribute count does not match node count");
  }
  index_.reserve(nodes_.size());
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!index_.emplace(nodes_[i], i).second) {
      throw std::invalid_argument("duplicate node id " + nodes_[i].code());
    }
    if (attrs_[i].state.empty()) attrs_[i].state = nodes_[i].state();
  }

  adjacency_.assign(nodes_.size(), {});
  auto endpoint = [&](const NodeId& id) {
    const auto idx = find(id);
    if (!idx) throw std::invalid_argument("edge endpoint " + id.code() + " is not a node");
    return *idx;
  };
  for (const auto& e : edges) {
    const std::size_t from = endpoint(e.from);
    const std::size_t to = endpoint(e.to);
    if (from == to) {
      throw std::invalid_argument("self-loop on node " + e.from.code());
    }
    if (!std::isfinite(e.mu) || e.mu <= 0.0) {
      throw std::invalid_argument("edge " + e.from.code() + "->" + e.to.code() +
                                  " has non-positive weight");
    }
    adjacency_[from].push_back(Arc{to, e.mu, e.flow});
  }
  for (auto& arcs : adjacency_) {
    std::sort(arcs.begin(), arcs.end(),
              [](const Arc& a, const Arc& b) { return a.target < b.target; });
    auto dup = std::adjacent_find(arcs.begin(), arcs.end(), [](const Arc& a, const Arc& b) {
      return a.target == b.target;
    });
    if (dup != arcs.end()) {
      const auto from = static_cast<std::size_t>(&arcs - adjacency_.data());
      throw std::invalid_argument("duplicate edge " + nodes_[from].code() + "->" +
                                  nodes_[dup->target].code());
    }
    edge_count_ += arcs.size();
  }
}

std::optional<std::size_t> CountyNetwork::find(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t CountyNetwork::index_of(const NodeId& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) {
    throw std::out_of_range("unknown node id " + id.code());
  }
  return it->second;
}

std::optional<double> CountyNetwork::edge_weight(std::size_t from, std::size_t to) const {
  const auto& arcs = adjacency_.at(from);
  auto it = std::lower_bound(arcs.begin(), arcs.end(), to,
                             [](const Arc& a, std::size_t t) { return a.target < t; });
  if (it == arcs.end() || it->target != to) return std::nullopt;
  return it->mu;
}

std::vector<EdgeSpec> CountyNetwork::edges() const {
  std::vector<EdgeSpec> out;
  out.reserve(edge_count_);
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    for (const auto& arc : adjacency_[i]) {
      out.push_back(EdgeSpec{nodes_[i], nodes_[arc.target], arc.mu, arc.flow});
    }
  }
  return out;
}

std::vector<std::vector<std::size_t>> CountyNetwork::undirected_adjacency() const {
  std::vector<std::vector<std::size_t>> adj(nodes_.size());
  for (std::size_t i = 0; i < adjacency_.size(); ++i) {
    for (const auto& arc : adjacency_[i]) {
      adj[i].push_back(arc.target);
      adj[arc.target].push_back(i);
    }
  }
  for (auto& list : adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return adj;
}

std::string CountyNetwork::node_order_hash() const { return gnar::node_order_hash(nodes_); }

std::string node_order_hash(std::span<const NodeId> nodes) {
  std::uint64_t h = 14695981039346656037ull;
  auto mix = [&h](unsigned char c) {
    h ^= c;
    h *= 1099511628211ull;
  };
  for (const auto& id : nodes) {
    for (char c : id.code()) mix(static_cast<unsigned char>(c));
    mix(',');
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace gnar
