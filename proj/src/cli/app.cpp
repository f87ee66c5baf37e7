#include <fstream>

#include <CLI11.hpp>

#include "gnar/cli.hpp"

namespace gnar::cli {
namespace {

// Raw flag values; only options the user actually passed override the config.
struct Flags {
  std::string config, flows, cases, deaths, centroids, lattice, states, frequency, models,
      weight_mode, transform, out, order, alpha_mode, alpha, beta, start_date, criterion, target;
  int test_periods = 0, preset = 0, steps = 0, burn_in = 0, grid_max = 0;
  unsigned workers = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0, init_level = 0.0;
  bool lenient = false;
};

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "JSON config file; flags override its keys");
  sub->add_option("--flows", f.flows, "Commuting flows CSV (from_fips,to_fips,commuters)");
  sub->add_option("--centroids", f.centroids, "Node centroids CSV (fips,lat,lon)");
  sub->add_option("--lattice", f.lattice, "Use a ROWSxCOLS triangular lattice instead of flows");
  sub->add_option("--weight-mode", f.weight_mode, "binary | commuters | great_circle_km");
  sub->add_option("--workers", f.workers, "Worker threads");
  sub->add_option("--out", f.out, "Output directory");
  sub->add_flag("--lenient", f.lenient, "Skip malformed flow rows instead of failing");
}

void add_panel(CLI::App* sub, Flags& f) {
  sub->add_option("--cases", f.cases, "Cumulative cases CSV (USAFacts layout)");
  sub->add_option("--deaths", f.deaths, "Cumulative deaths CSV (USAFacts layout)");
  sub->add_option("--states", f.states, "Comma-separated states, e.g. RI,MA");
  sub->add_option("--frequency", f.frequency, "daily | weekly");
  sub->add_option("--alpha-mode", f.alpha_mode, "per_node | global");
}

RunConfig build_config(const CLI::App& sub, const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw std::invalid_argument("cannot open config " + f.config);
    c = apply_config_json(c, nlohmann::json::parse(in));
    // Input paths in a config file are relative to the file itself.
    const auto base = std::filesystem::path(f.config).parent_path();
    for (auto* p : {&c.flows, &c.cases, &c.deaths, &c.centroids}) {
      if (*p && p->value().is_relative()) *p = base / p->value();
    }
  }
  nlohmann::json over = nlohmann::json::object();
  auto set = [&](const char* flag, const char* key, const auto& value) {
    if (sub.get_option_no_throw(flag) && sub.count(flag) > 0) over[key] = value;
  };
  set("--flows", "flows", f.flows);
  set("--cases", "cases", f.cases);
  set("--deaths", "deaths", f.deaths);
  set("--centroids", "centroids", f.centroids);
  set("--lattice", "lattice", f.lattice);
  set("--states", "states", f.states);
  set("--frequency", "frequency", f.frequency);
  set("--models", "models", f.models);
  set("--test-periods", "test_periods", f.test_periods);
  set("--weight-mode", "weight_mode", f.weight_mode);
  set("--transform", "transform", f.transform);
  set("--seed", "seed", f.seed);
  set("--out", "out", f.out);
  set("--workers", "workers", f.workers);
  set("--lenient", "lenient", f.lenient);
  set("--order", "order", f.order);
  set("--preset", "preset", f.preset);
  set("--alpha-mode", "alpha_mode", f.alpha_mode);
  set("--alpha", "alpha", f.alpha);
  set("--beta", "beta", f.beta);
  set("--sigma", "sigma", f.sigma);
  set("--steps", "steps", f.steps);
  set("--burn-in", "burn_in", f.burn_in);
  set("--init-level", "init_level", f.init_level);
  set("--start-date", "start_date", f.start_date);
  set("--grid-max", "grid_max", f.grid_max);
  set("--criterion", "criterion", f.criterion);
  set("--target", "target", f.target);
  return apply_config_json(c, over);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Network autoregressive forecasting toolkit"};
  app.require_subcommand(1);
  Flags f;

  auto* network = app.add_subcommand("network", "Build a network and write its statistics");
  add_common(network, f);

  auto* evaluate = app.add_subcommand("evaluate", "Rolling-horizon evaluation of model presets");
  add_common(evaluate, f);
  add_panel(evaluate, f);
  evaluate->add_option("--models", f.models, "Comma-separated preset ids (1,2,3)");
  evaluate->add_option("--test-periods", f.test_periods, "Number of rolling test periods");
  evaluate->add_option("--transform", f.transform, "none | log1p | sqrt | zscore");
  evaluate->add_option("--seed", f.seed, "Recorded for reproducibility");

  auto* sim = app.add_subcommand("simulate", "Generate a panel from known coefficients");
  add_common(sim, f);
  sim->add_option("--order", f.order, "Model order p:s1,...,sp (e.g. 1:1)");
  sim->add_option("--preset", f.preset, "Preset id used when --order is absent");
  sim->add_option("--alpha-mode", f.alpha_mode, "per_node | global");
  sim->add_option("--alpha", f.alpha, "Comma-separated alpha (p values, or rows*p)");
  sim->add_option("--beta", f.beta, "Comma-separated beta, lag-major");
  sim->add_option("--sigma", f.sigma, "Innovation standard deviation");
  sim->add_option("--steps", f.steps, "Number of time steps");
  sim->add_option("--burn-in", f.burn_in, "Leading steps to discard");
  sim->add_option("--init-level", f.init_level, "Constant starting level for the first p rows");
  sim->add_option("--start-date", f.start_date, "First date of the panel (yyyy-mm-dd)");
  sim->add_option("--seed", f.seed, "Random seed");

  auto* select = app.add_subcommand("select", "Scan the alphaOrder x betaOrder grid");
  add_common(select, f);
  add_panel(select, f);
  select->add_option("--grid-max", f.grid_max, "Largest alphaOrder/betaOrder");
  select->add_option("--criterion", f.criterion, "holdout_mase | bic");
  select->add_option("--target", f.target, "cases | deaths");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  RunConfig config;
  CLI::App* active = app.get_subcommands().front();
  try {
    config = build_config(*active, f);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  if (active == network) return cmd_network(config, err);
  if (active == evaluate) return cmd_evaluate(config, err);
  if (active == sim) return cmd_simulate(config, err);
  return cmd_select(config, err);
}

}  // namespace gnar::cli
