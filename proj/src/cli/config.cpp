#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "gnar/cli.hpp"

namespace gnar::cli {
namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
std::vector<T> list_value(const nlohmann::json& v) {
  if (v.is_array()) return v.get<std::vector<T>>();
  if constexpr (std::is_same_v<T, std::string>) {
    return split(v.get<std::string>(), ',');
  } else {
    std::vector<T> out;
    for (const auto& item : split(v.get<std::string>(), ',')) out.push_back(static_cast<T>(std::stod(item)));
    return out;
  }
}

}  // namespace

GnarOrder parse_order(const std::string& text) {
  const auto colon = text.find(':');
  GnarOrder order;
  try {
    order.p = std::stoi(text.substr(0, colon));
    order.s.clear();
    if (colon != std::string::npos) {
      for (const auto& part : split(text.substr(colon + 1), ',')) order.s.push_back(std::stoi(part));
    }
  } catch (const std::logic_error&) {
    throw std::invalid_argument("malformed order '" + text + "', expected p:s1,s2,...");
  }
  if (order.s.size() != static_cast<std::size_t>(order.p)) {
    throw std::invalid_argument("order '" + text + "' needs one stage per lag");
  }
  return order;
}

std::pair<int, int> parse_lattice(const std::string& text) {
  int rows = 0, cols = 0;
  char x = 0;
  std::istringstream in(text);
  if (!(in >> rows >> x >> cols) || (x != 'x' && x != 'X') || !in.eof()) {
    throw std::invalid_argument("malformed lattice size '" + text + "', expected ROWSxCOLS");
  }
  return {rows, cols};
}

RunConfig apply_config_json(RunConfig c, const nlohmann::json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, v] : doc.items()) {
    if (key == "flows") c.flows = v.get<std::string>();
    else if (key == "cases") c.cases = v.get<std::string>();
    else if (key == "deaths") c.deaths = v.get<std::string>();
    else if (key == "centroids") c.centroids = v.get<std::string>();
    else if (key == "lattice") c.lattice = parse_lattice(v.get<std::string>());
    else if (key == "states") c.states = list_value<std::string>(v);
    else if (key == "frequency") c.frequency = parse_frequency(v.get<std::string>());
    else if (key == "models") c.models = list_value<int>(v);
    else if (key == "test_periods") c.test_periods = v.get<int>();
    else if (key == "weight_mode") c.weight_mode = parse_weight_mode(v.get<std::string>());
    else if (key == "transform") c.transform = parse_transform_kind(v.get<std::string>());
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "out") c.out = v.get<std::string>();
    else if (key == "workers") c.workers = v.get<unsigned>();
    else if (key == "lenient") c.lenient = v.get<bool>();
    else if (key == "order") c.order = parse_order(v.get<std::string>());
    else if (key == "preset") c.preset = v.get<int>();
    else if (key == "alpha_mode") c.alpha_mode = parse_alpha_mode(v.get<std::string>());
    else if (key == "alpha") c.alpha = list_value<double>(v);
    else if (key == "beta") c.beta = list_value<double>(v);
    else if (key == "sigma") c.sigma = v.get<double>();
    else if (key == "steps") c.steps = v.get<int>();
    else if (key == "burn_in") c.burn_in = v.get<int>();
    else if (key == "init_level") c.init_level = v.get<double>();
    else if (key == "start_date") c.start_date = v.get<std::string>();
    else if (key == "grid_max") c.grid_max = v.get<int>();
    else if (key == "criterion") c.criterion = parse_selection_criterion(v.get<std::string>());
    else if (key == "target") c.target = v.get<std::string>();
    else throw std::invalid_argument("unknown config key '" + key + "'");
  }
  if (c.test_periods < 1) throw std::invalid_argument("test_periods must be at least 1");
  if (c.workers < 1) throw std::invalid_argument("workers must be at least 1");
  return c;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace gnar::cli
