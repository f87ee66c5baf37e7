#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "gnar/network.hpp"

namespace gnar {

/// {nodes: [{fips, lat, lon, state[, external]}], edges: [{from, to, mu}], weight_mode}
/// Missing coordinates serialise as null. Node order is preserved.
nlohmann::json network_to_json(const CountyNetwork& net);

/// Inverse of network_to_json. Under commuters mode, mu is also taken as the
/// edge's commuter count.
CountyNetwork network_from_json(const nlohmann::json& doc);

CountyNetwork load_network(const std::filesystem::path& path);

}  // namespace gnar
