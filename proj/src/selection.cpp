#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "gnar/metrics.hpp"
#include "gnar/model.hpp"

namespace gnar {

std::string_view to_string(SelectionCriterion c) {
  return c == SelectionCriterion::bic ? "bic" : "holdout_mase";
}

SelectionCriterion parse_selection_criterion(std::string_view text) {
  if (text == "bic") return SelectionCriterion::bic;
  if (text == "holdout_mase" || text == "mase") return SelectionCriterion::holdout_mase;
  throw std::invalid_argument("unknown selection criterion: '" + std::string(text) + "'");
}

namespace {

// One-step paper-form MASE over the final fifth of the series, fitting on the
// rest and forecasting each holdout step from the observed lags.
double holdout_score(const NetworkTimeSeries& series, const CountyNetwork& net,
                     const GnarOrder& order) {
  const Eigen::Index steps = series.steps();
  const Eigen::Index holdout = std::max<Eigen::Index>(1, steps / 5);
  const Eigen::Index train = steps - holdout;
  if (train <= order.p) throw std::invalid_argument("training window too short");
  const GnarFit f = fit(series.slice(0, train), net, order);

  std::vector<double> actual, predicted, previous;
  for (Eigen::Index t = train; t < steps; ++t) {
    const auto next = forecast(f, series.slice(0, t), net, 1);
    for (Eigen::Index i = 0; i < series.nodes(); ++i) {
      actual.push_back(series(t, i));
      predicted.push_back(next(0, i));
      previous.push_back(series(t - 1, i));
    }
  }
  return mase(actual, predicted, previous).value;
}

// BIC on a common response window so cells with different p are comparable.
double bic_score(const NetworkTimeSeries& series, const NeighborTable& table,
                 const GnarOrder& order, Eigen::Index first_step) {
  GnarOrder effective = order;
  const Design probe = build_design(series, table, effective, first_step);
  if (!order.alpha_zero && order.alpha_mode == AlphaMode::per_node &&
      probe.regressors.rows() < probe.regressors.cols()) {
    effective.alpha_mode = AlphaMode::global;
  }
  const Design d = effective == order ? probe : build_design(series, table, effective, first_step);
  if (d.regressors.rows() <= d.regressors.cols()) throw std::invalid_argument("insufficient rows");
  const auto sol = least_squares(d.regressors, d.response);
  const double rss = (d.response - d.regressors * sol.coefficients).squaredNorm();
  const auto rows = static_cast<double>(d.regressors.rows());
  const double fit_term = rss > 0.0 ? rows * std::log(rss / rows)
                                    : -std::numeric_limits<double>::infinity();
  return fit_term + static_cast<double>(sol.rank) * std::log(rows);
}

}  // namespace

std::vector<SelectionEntry> model_selection(const NetworkTimeSeries& series,
                                            const CountyNetwork& net, int grid_max,
                                            SelectionCriterion criterion, AlphaMode alpha_mode) {
  if (grid_max < 0) throw std::invalid_argument("grid_max must be non-negative");
  if (static_cast<std::size_t>(series.nodes()) != net.size()) {
    throw std::invalid_argument("series width does not match network size");
  }

  const int deepest = grid_max;
  const NeighborTable table =
      criterion == SelectionCriterion::bic ? neighbor_table(net, deepest) : NeighborTable{};
  const Eigen::Index common_start = std::max(1, grid_max);

  std::vector<SelectionEntry> entries;
  for (int a = 0; a <= grid_max; ++a) {
    for (int b = 0; b <= grid_max; ++b) {
      SelectionEntry e{a, b, order_from_grid(a, b, alpha_mode), std::nullopt, "ok"};
      if (!e.order) {
        e.status = "unavailable: empty model";
        entries.push_back(std::move(e));
        continue;
      }
      try {
        e.score = criterion == SelectionCriterion::bic
                      ? bic_score(series, table, *e.order, common_start)
                      : holdout_score(series, net, *e.order);
      } catch (const std::exception& ex) {
        e.status = std::string("unavailable: ") + ex.what();
      }
      entries.push_back(std::move(e));
    }
  }

  std::stable_sort(entries.begin(), entries.end(), [](const SelectionEntry& x, const SelectionEntry& y) {
    if (x.score.has_value() != y.score.has_value()) return x.score.has_value();
    if (x.score && *x.score != *y.score) return *x.score < *y.score;
    if (x.alpha_order != y.alpha_order) return x.alpha_order < y.alpha_order;
    return x.beta_order < y.beta_order;
  });
  return entries;
}

}  // namespace gnar
