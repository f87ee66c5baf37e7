#include <algorithm>
#include <cctype>
#include <cstdio>
#include <map>
#include <sstream>

#include "gnar/cli.hpp"
#include "gnar/evaluation.hpp"
#include "gnar/fit_json.hpp"
#include "gnar/graph.hpp"
#include "gnar/ingest.hpp"
#include "gnar/network_json.hpp"
#include "gnar/parallel.hpp"
#include "gnar/stats.hpp"

namespace gnar::cli {
namespace {

namespace fs = std::filesystem;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void require_file(const std::optional<fs::path>& path, const char* flag) {
  if (!path) throw InputError(flag, 0, "required input not given");
  if (!fs::is_regular_file(*path)) throw InputError(path->string(), 0, "file not found");
}

struct LoadedNetwork {
  CountyNetwork net;
  DataQualityReport report;
};

LoadedNetwork load_flow_network(const RunConfig& c, std::ostream& log) {
  require_file(c.flows, "--flows");
  if (c.centroids) require_file(c.centroids, "--centroids");
  auto parsed = parse_flows(*c.flows);
  if (!parsed.report.row_errors.empty() && !c.lenient) {
    const auto& first = parsed.report.row_errors.front();
    throw InputError(c.flows->string(), first.line,
                     first.reason + " (" + std::to_string(parsed.report.row_errors.size()) +
                         " malformed rows; pass --lenient to skip them)");
  }
  const auto attrs = c.centroids ? parse_centroids(*c.centroids) : std::map<NodeId, NodeAttrs>{};
  auto built = build_network_from_flows(parsed.records, attrs);
  if (c.weight_mode == WeightMode::great_circle_km) {
    for (const auto& w : built.warnings) log << "warning: " << w << "\n";
  }
  CountyNetwork net = c.weight_mode == WeightMode::commuters
                          ? std::move(built.network)
                          : reweight(built.network, c.weight_mode);
  return {std::move(net), std::move(parsed.report)};
}

std::string stats_csv(const NetworkStats& s) {
  std::ostringstream out;
  auto row = [&out](const char* name, const std::string& value) { out << name << ',' << value << '\n'; };
  char buf[32];
  auto fixed = [&buf](double v) {
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return std::string(buf);
  };
  out << "metric,value\n";
  row("nodes", std::to_string(s.node_count));
  row("edges", std::to_string(s.edge_count));
  row("avg_degree", fixed(s.avg_degree));
  row("closeness", fixed(s.closeness));
  row("betweenness", fixed(s.betweenness));
  row("clustering_coefficient", fixed(s.clustering_coefficient));
  row("density", fixed(s.density));
  row("diameter", std::to_string(s.diameter));
  row("avg_shortest_path", fixed(s.avg_shortest_path));
  row("components", std::to_string(s.component_count));
  row("largest_component", std::to_string(s.largest_component_size));
  return out.str();
}

std::string slug(const std::string& name) {
  std::string out;
  for (char c : name) {
    if (std::isalnum(static_cast<unsigned char>(c))) out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  return s;
}

nlohmann::json summary_json(const std::optional<SummaryStats>& s) {
  if (!s) return nullptr;
  return {{"mean", s->mean}, {"median", s->median}, {"variance", s->variance}, {"periods", s->count}};
}

template <class Fn>
int guarded(std::ostream& log, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitInput;
  }
}

}  // namespace

int cmd_network(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    std::optional<DataQualityReport> report;
    CountyNetwork net;
    if (config.lattice) {
      net = triangular_lattice(config.lattice->first, config.lattice->second);
    } else {
      auto loaded = load_flow_network(config, log);
      net = std::move(loaded.net);
      report = std::move(loaded.report);
    }
    const NetworkStats stats = network_stats(net, config.workers);
    std::ostringstream hist;
    hist << "degree,count\n";
    // Dense over 0..max degree so the file plots directly as a bar chart.
    const auto counts = degree_histogram(net);
    const std::size_t top = counts.empty() ? 0 : counts.rbegin()->first;
    for (std::size_t d = 0; d <= top; ++d) {
      const auto it = counts.find(d);
      hist << d << ',' << (it == counts.end() ? 0 : it->second) << '\n';
    }

    write_file_atomic(config.out / "network.json", network_to_json(net).dump(2) + "\n");
    write_file_atomic(config.out / "stats.csv", stats_csv(stats));
    write_file_atomic(config.out / "degree_hist.csv", hist.str());
    if (report) write_file_atomic(config.out / "data_quality.json", report->to_json().dump(2) + "\n");
    log << "network: " << stats.node_count << " nodes, " << stats.edge_count << " edges -> "
        << config.out.string() << "\n";
    return kExitOk;
  });
}

int cmd_evaluate(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    if (config.test_periods < 1) throw std::invalid_argument("--test-periods must be at least 1");
    if (!config.cases && !config.deaths) {
      throw InputError("--cases/--deaths", 0, "at least one target file is required");
    }
    require_file(config.flows, "--flows");
    if (config.cases) require_file(config.cases, "--cases");
    if (config.deaths) require_file(config.deaths, "--deaths");

    auto loaded = load_flow_network(config, log);
    nlohmann::json quality = nlohmann::json::array();
    quality.push_back(loaded.report.to_json());

    struct Target {
      std::string name;
      CaseTable table;
    };
    std::vector<Target> targets;
    if (config.cases) targets.push_back({"cases", parse_cases(*config.cases)});
    if (config.deaths) targets.push_back({"deaths", parse_cases(*config.deaths)});
    for (const auto& t : targets) quality.push_back(t.table.report.to_json());

    std::vector<ModelSpec> models;
    for (int id : config.models) models.push_back({"Model " + std::to_string(id), preset(id)});
    models.push_back({"Naive", std::nullopt});

    // Panels per (region, target); a region that cannot be built fails all its cells.
    struct Region {
      std::string label;
      std::optional<CountyNetwork> net;
      std::vector<std::optional<NetworkTimeSeries>> panels;
      std::vector<std::string> errors;
    };
    std::vector<Region> regions;
    std::vector<std::string> labels = config.states;
    if (labels.empty()) labels.push_back("ALL");
    for (const auto& raw : labels) {
      Region region{upper(raw), std::nullopt, {}, {}};
      region.panels.resize(targets.size());
      region.errors.resize(targets.size());
      try {
        region.net = config.states.empty()
                         ? loaded.net
                         : extract_state_subnetwork(loaded.net, state_fips_code(raw), true);
      } catch (const std::exception& e) {
        std::fill(region.errors.begin(), region.errors.end(), e.what());
      }
      for (std::size_t t = 0; region.net && t < targets.size(); ++t) {
        try {
          Panel panel = to_panel(targets[t].table, *region.net);
          nlohmann::json missing = nlohmann::json::array();
          for (const auto& id : panel.missing) missing.push_back(id.code());
          if (!panel.missing.empty()) {
            quality.push_back({{"file", targets[t].table.report.file},
                               {"region", region.label},
                               {"missing_nodes", std::move(missing)}});
          }
          region.panels[t] = config.frequency == Frequency::weekly ? aggregate_weekly(panel.series)
                                                                   : panel.series;
        } catch (const std::exception& e) {
          region.errors[t] = e.what();
        }
      }
      regions.push_back(std::move(region));
    }

    struct Cell {
      std::size_t region, target, model;
      std::optional<ForecastEvaluation> result;
      std::string error;
    };
    std::vector<Cell> cells;
    for (std::size_t r = 0; r < regions.size(); ++r) {
      for (std::size_t t = 0; t < targets.size(); ++t) {
        for (std::size_t m = 0; m < models.size(); ++m) cells.push_back({r, t, m, std::nullopt, {}});
      }
    }

    RollingOptions options;
    options.transform = config.transform;
    parallel_for(cells.size(), config.workers, [&](std::size_t k) {
      Cell& cell = cells[k];
      const Region& region = regions[cell.region];
      if (!region.panels[cell.target]) {
        cell.error = region.errors[cell.target];
        return;
      }
      try {
        cell.result = rolling_horizon(*region.panels[cell.target], *region.net, models[cell.model],
                                      config.test_periods, options);
      } catch (const std::exception& e) {
        cell.error = e.what();
      }
    });

    nlohmann::json results = nlohmann::json::object();
    nlohmann::json failures = nlohmann::json::array();
    std::map<fs::path, std::string> period_files;
    for (const Cell& cell : cells) {
      const std::string& region = regions[cell.region].label;
      const std::string& target = targets[cell.target].name;
      const std::string& model = models[cell.model].name;
      if (!cell.result) {
        failures.push_back({{"state", region}, {"target", target}, {"model", model}, {"error", cell.error}});
        results[region][target][model] = {{"error", cell.error}};
        continue;
      }
      const auto& ev = *cell.result;
      nlohmann::json entry = {{"MASE", summary_json(ev.mase_summary)},
                              {"MAPE", summary_json(ev.mape_summary)},
                              {"predictive_power", predictive_power(ev)}};
      if (ev.mape_summary) entry["mape_band"] = std::string(to_string(mape_band(ev.mape_summary->mean)));
      results[region][target][model] = std::move(entry);

      std::ostringstream csv;
      csv << "period,week_index,metric,model,value,excluded_terms\n";
      for (const auto& p : ev.per_period) {
        csv << p.period << ',' << p.step + 1 << ",MAPE," << model << ','
            << (p.mape ? num(*p.mape) : "NA") << ',' << p.mape_excluded << '\n';
        csv << p.period << ',' << p.step + 1 << ",MASE," << model << ','
            << (p.mase ? num(*p.mase) : "NA") << ',' << p.mase_excluded << '\n';
      }
      period_files[config.out / "periods" / (region + "_" + target + "_" + slug(model) + ".csv")] = csv.str();
    }

    nlohmann::json summary = {{"frequency", std::string(to_string(config.frequency))},
                              {"test_periods", config.test_periods},
                              {"weight_mode", std::string(to_string(config.weight_mode))},
                              {"transform", std::string(to_string(config.transform))},
                              {"results", std::move(results)},
                              {"failures", failures}};
    for (const auto& [path, content] : period_files) write_file_atomic(path, content);
    write_file_atomic(config.out / "summary.json", summary.dump(2) + "\n");
    write_file_atomic(config.out / "data_quality.json", quality.dump(2) + "\n");

    log << "evaluate: " << cells.size() << " cells, " << failures.size() << " failed -> "
        << config.out.string() << "\n";
    for (const auto& f : failures) {
      log << "  failed " << f["state"].get<std::string>() << "/" << f["target"].get<std::string>()
          << "/" << f["model"].get<std::string>() << ": " << f["error"].get<std::string>() << "\n";
    }
    return failures.empty() ? kExitOk : kExitCellFailures;
  });
}

int cmd_simulate(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    CountyNetwork net = config.lattice
                            ? triangular_lattice(config.lattice->first, config.lattice->second)
                            : load_flow_network(config, log).net;
    GnarOrder order = config.order ? *config.order : preset(config.preset.value_or(1));
    order.alpha_mode = config.alpha_mode;
    order.validate();

    const auto n = static_cast<Eigen::Index>(net.size());
    GnarCoefficients coef;
    if (!order.alpha_zero) {
      const Eigen::Index rows = order.alpha_mode == AlphaMode::global ? 1 : n;
      coef.alpha.resize(rows, order.p);
      const auto given = static_cast<Eigen::Index>(config.alpha.size());
      if (given == order.p) {
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index j = 0; j < order.p; ++j) coef.alpha(r, j) = config.alpha[static_cast<std::size_t>(j)];
        }
      } else if (given == rows * order.p) {
        for (Eigen::Index r = 0; r < rows; ++r) {
          for (Eigen::Index j = 0; j < order.p; ++j) {
            coef.alpha(r, j) = config.alpha[static_cast<std::size_t>(r * order.p + j)];
          }
        }
      } else {
        throw std::invalid_argument("--alpha needs p or rows*p values, got " + std::to_string(given));
      }
    }
    if (config.beta.size() != static_cast<std::size_t>(order.neighbor_terms())) {
      throw std::invalid_argument("--beta needs " + std::to_string(order.neighbor_terms()) +
                                  " values, got " + std::to_string(config.beta.size()));
    }
    std::size_t k = 0;
    for (int j = 0; j < order.p; ++j) {
      coef.beta.emplace_back(config.beta.begin() + static_cast<std::ptrdiff_t>(k),
                             config.beta.begin() + static_cast<std::ptrdiff_t>(k + static_cast<std::size_t>(order.s[static_cast<std::size_t>(j)])));
      k += static_cast<std::size_t>(order.s[static_cast<std::size_t>(j)]);
    }

    const auto start = parse_date(config.start_date);
    if (!start) throw std::invalid_argument("bad --start-date '" + config.start_date + "'");
    SimulationOptions options{config.sigma, config.seed, config.burn_in, std::nullopt};
    if (config.init_level) options.initial = Eigen::MatrixXd::Constant(order.p, n, *config.init_level);
    const NetworkTimeSeries series = simulate(net, order, coef, config.steps, options);

    std::ostringstream panel;
    panel << "countyFIPS,County Name,State,StateFIPS";
    for (Eigen::Index t = 0; t < series.steps(); ++t) {
      panel << ',' << format_date(*start + std::chrono::days{static_cast<int>(t)});
    }
    panel << '\n';
    for (Eigen::Index i = 0; i < n; ++i) {
      const NodeId& id = net.node(static_cast<std::size_t>(i));
      const std::string state = net.attrs(static_cast<std::size_t>(i)).state;
      panel << std::stoi(id.code()) << ",Node " << id.code() << ',' << state_abbreviation(state)
            << ',' << std::stoi(state);
      for (Eigen::Index t = 0; t < series.steps(); ++t) panel << ',' << num(series(t, i));
      panel << '\n';
    }

    std::ostringstream flows;
    flows << "from_fips,to_fips,commuters\n";
    for (const auto& e : net.edges()) {
      flows << e.from.code() << ',' << e.to.code() << ','
            << static_cast<unsigned long long>(e.flow.value_or(1.0)) << '\n';
    }

    GnarFit truth;
    truth.order = order;
    truth.coefficients = coef;
    truth.sigma2_hat = config.sigma * config.sigma;
    truth.node_order_hash = net.node_order_hash();
    nlohmann::json doc = fit_to_json(truth);
    doc.erase("dropped_columns");
    doc["sigma"] = config.sigma;
    doc["seed"] = config.seed;
    doc["steps"] = config.steps;
    doc["burn_in"] = config.burn_in;

    write_file_atomic(config.out / "panel.csv", panel.str());
    write_file_atomic(config.out / "flows.csv", flows.str());
    write_file_atomic(config.out / "network.json", network_to_json(net).dump(2) + "\n");
    write_file_atomic(config.out / "coefficients.json", doc.dump(2) + "\n");
    log << "simulate: " << series.steps() << " steps x " << n << " nodes -> " << config.out.string() << "\n";
    return kExitOk;
  });
}

int cmd_select(const RunConfig& config, std::ostream& log) {
  return guarded(log, [&] {
    const auto& path = config.target == "deaths" ? config.deaths : config.cases;
    if (config.target != "cases" && config.target != "deaths") {
      throw std::invalid_argument("--target must be cases or deaths");
    }
    require_file(path, config.target == "deaths" ? "--deaths" : "--cases");
    auto loaded = load_flow_network(config, log);
    CountyNetwork net = config.states.empty()
                            ? std::move(loaded.net)
                            : extract_state_subnetwork(loaded.net, state_fips_code(config.states.front()), true);
    const CaseTable table = parse_cases(*path);
    const Panel panel = to_panel(table, net);
    const NetworkTimeSeries series =
        config.frequency == Frequency::weekly ? aggregate_weekly(panel.series) : panel.series;

    const auto ranked = model_selection(series, net, config.grid_max, config.criterion, config.alpha_mode);
    std::ostringstream csv;
    csv << "rank,alpha_order,beta_order,order,score,status\n";
    int rank = 0;
    for (const auto& e : ranked) {
      csv << (e.score ? std::to_string(++rank) : std::string("NA")) << ',' << e.alpha_order << ','
          << e.beta_order << ",\"" << (e.order ? e.order->describe() : std::string("empty")) << "\","
          << (e.score ? num(*e.score) : "NA") << ",\"" << e.status << "\"\n";
    }
    write_file_atomic(config.out / "selection.csv", csv.str());
    if (!ranked.empty() && ranked.front().score) {
      log << "select: best cell (" << ranked.front().alpha_order << "," << ranked.front().beta_order
          << ") " << to_string(config.criterion) << "=" << num(*ranked.front().score) << "\n";
    }
    return kExitOk;
  });
}

}  // namespace gnar::cli
