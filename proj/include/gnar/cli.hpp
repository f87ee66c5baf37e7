#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gnar/model.hpp"
#include "gnar/network.hpp"
#include "gnar/series.hpp"
#include "gnar/transform.hpp"

namespace gnar::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCellFailures = 1;
inline constexpr int kExitInput = 2;

/// Everything a run depends on. Loaded from a JSON config file whose keys
/// mirror the long flag names (dashes become underscores); flags override.
struct RunConfig {
  std::optional<std::filesystem::path> flows;
  std::optional<std::filesystem::path> cases;
  std::optional<std::filesystem::path> deaths;
  std::optional<std::filesystem::path> centroids;
  std::optional<std::pair<int, int>> lattice;  // rows x cols
  std::vector<std::string> states;
  Frequency frequency = Frequency::weekly;
  std::vector<int> models{1, 2, 3};
  int test_periods = 40;
  WeightMode weight_mode = WeightMode::commuters;
  TransformKind transform = TransformKind::identity;
  std::uint64_t seed = 0;
  std::filesystem::path out = "out";
  unsigned workers = 1;
  bool lenient = false;  // accept flow files with row errors

  // simulate
  std::optional<GnarOrder> order;
  std::optional<int> preset;
  AlphaMode alpha_mode = AlphaMode::per_node;
  std::vector<double> alpha;
  std::vector<double> beta;
  double sigma = 1.0;
  int steps = 100;
  int burn_in = 50;
  std::optional<double> init_level;
  std::string start_date = "2020-01-22";

  // select
  int grid_max = 5;
  SelectionCriterion criterion = SelectionCriterion::holdout_mase;
  std::string target = "cases";
};

/// Applies keys present in `doc` on top of `base`. Unknown keys throw.
RunConfig apply_config_json(RunConfig base, const nlohmann::json& doc);

/// "p:s1,s2,..." such as "2:1,1".
GnarOrder parse_order(const std::string& text);

/// "40x78".
std::pair<int, int> parse_lattice(const std::string& text);

int cmd_network(const RunConfig& config, std::ostream& log);
int cmd_evaluate(const RunConfig& config, std::ostream& log);
int cmd_simulate(const RunConfig& config, std::ostream& log);
int cmd_select(const RunConfig& config, std::ostream& log);

/// Full command line (argv[0] excluded). Returns the process exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Writes via a temporary sibling file and rename.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace gnar::cli
