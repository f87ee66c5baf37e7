#include "gnar/network_json.hpp"

#include <fstream>
#include <stdexcept>

namespace gnar {

nlohmann::json network_to_json(const CountyNetwork& net) {
  using nlohmann::json;
  json nodes = json::array();
  for (std::size_t i = 0; i < net.size(); ++i) {
    const auto& a = net.attrs(i);
    json node = {{"fips", net.node(i).code()},
                 {"lat", a.lat ? json(*a.lat) : json(nullptr)},
                 {"lon", a.lon ? json(*a.lon) : json(nullptr)},
                 {"state", a.state}};
    if (a.external) node["external"] = true;
    nodes.push_back(std::move(node));
  }
  json edges = json::array();
  for (const auto& e : net.edges()) {
    edges.push_back({{"from", e.from.code()}, {"to", e.to.code()}, {"mu", e.mu}});
  }
  return {{"nodes", std::move(nodes)},
          {"edges", std::move(edges)},
          {"weight_mode", std::string(to_string(net.weight_mode()))}};
}

CountyNetwork network_from_json(const nlohmann::json& doc) {
  const WeightMode mode = parse_weight_mode(doc.at("weight_mode").get<std::string>());
  std::vector<NodeId> nodes;
  std::vector<NodeAttrs> attrs;
  for (const auto& node : doc.at("nodes")) {
    nodes.emplace_back(node.at("fips").get<std::string>());
    NodeAttrs a;
    if (node.contains("lat") && !node["lat"].is_null()) a.lat = node["lat"].get<double>();
    if (node.contains("lon") && !node["lon"].is_null()) a.lon = node["lon"].get<double>();
    if (node.contains("state")) a.state = node["state"].get<std::string>();
    a.external = node.value("external", false);
    attrs.push_back(std::move(a));
  }
  std::vector<EdgeSpec> edges;
  for (const auto& edge : doc.at("edges")) {
    EdgeSpec e{NodeId(edge.at("from").get<std::string>()), NodeId(edge.at("to").get<std::string>()),
               edge.at("mu").get<double>(), std::nullopt};
    if (mode == WeightMode::commuters) e.flow = e.mu;
    edges.push_back(std::move(e));
  }
  return CountyNetwork(std::move(nodes), std::move(attrs), edges, mode);
}

CountyNetwork load_network(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open network file " + path.string());
  return network_from_json(nlohmann::json::parse(in));
}

}  // namespace gnar
