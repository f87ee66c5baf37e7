#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gnar/graph.hpp"
#include "gnar/network.hpp"
#include "gnar/series.hpp"

namespace gnar {

enum class AlphaMode { per_node, global };

std::string_view to_string(AlphaMode mode);
AlphaMode parse_alpha_mode(std::string_view text);

/// Model order (p, [s]): p time lags, and for lag j the deepest neighbour
/// stage s[j-1] that enters the regression.
struct GnarOrder {
  int p = 1;
  std::vector<int> s{1};
  AlphaMode alpha_mode = AlphaMode::per_node;
  bool alpha_zero = false;  // drop the self-lag terms entirely

  /// Throws std::invalid_argument if s.size() != p, any s_j < 0, or the
  /// model has no regressors at all.
  void validate() const;
  int max_stage() const;
  int neighbor_terms() const;
  std::string describe() const;

  bool operator==(const GnarOrder&) const = default;
};

/// alpha: n x p (per-node) or 1 x p (global); 0 x 0 when alpha_zero.
/// beta[j - 1][r - 1] is the stage-r effect at lag j.
struct GnarCoefficients {
  Eigen::MatrixXd alpha;
  std::vector<std::vector<double>> beta;

  /// Throws std::invalid_argument when shapes disagree with the order.
  void check(const GnarOrder& order, std::size_t nodes) const;
  double alpha_for(std::size_t node, int lag) const;
};

struct DesignColumn {
  enum class Kind { self_lag, neighbor };
  Kind kind = Kind::self_lag;
  int lag = 1;
  int stage = 0;                     // neighbour columns only
  std::optional<std::size_t> node;   // per-node self-lag columns only

  std::string label() const;
  bool operator==(const DesignColumn&) const = default;
};

/// Stacked regression: one row per (t, i), ordered by time then node.
struct Design {
  Eigen::VectorXd response;
  Eigen::MatrixXd regressors;
  std::vector<DesignColumn> columns;
  Eigen::Index first_step = 0;  // time index of the first response row
};

/// Throws std::invalid_argument if T <= p or the series width differs from
/// the network size.
Design build_design(const NetworkTimeSeries& series, const CountyNetwork& net,
                    const GnarOrder& order);

/// As above with a precomputed neighbour table (depth >= order.max_stage())
/// and responses starting at `first_step` >= p.
Design build_design(const NetworkTimeSeries& series, const NeighborTable& table,
                    const GnarOrder& order, Eigen::Index first_step);

/// Least squares via column-pivoted QR. Columns judged linearly dependent are
/// dropped and get a zero coefficient.
struct LeastSquaresSolution {
  Eigen::VectorXd coefficients;
  std::vector<std::size_t> dropped;  // column indices, ascending
  Eigen::Index rank = 0;
};

LeastSquaresSolution least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y);

struct GnarFit {
  GnarOrder order;  // effective order, after any alpha-mode fallback
  GnarCoefficients coefficients;
  Eigen::MatrixXd residuals;  // (T - p) x n
  double sigma2_hat = 0.0;
  std::vector<DesignColumn> design_columns;
  std::vector<DesignColumn> dropped_columns;
  std::string node_order_hash;
  std::vector<std::string> warnings;
};

/// Ordinary least squares on the stacked design.
///
/// Per-node alpha falls back to a global alpha (with a warning) when the
/// stacked system has fewer rows than columns. Rank-deficient designs drop
/// dependent columns and record them. Throws std::invalid_argument if there
/// are still fewer rows than columns.
GnarFit fit(const NetworkTimeSeries& series, const CountyNetwork& net, const GnarOrder& order);

struct SimulationOptions {
  double sigma = 0.0;
  std::uint64_t seed = 0;
  int burn_in = 50;
  /// p x n starting rows. Defaults to N(0, sigma^2) draws, or zeros if sigma = 0.
  std::optional<Eigen::MatrixXd> initial;
};

/// Runs the model forward with i.i.d. N(0, sigma^2) innovations. The first
/// `burn_in` rows of the full sequence (initial rows included) are discarded.
NetworkTimeSeries simulate(const CountyNetwork& net, const GnarOrder& order,
                           const GnarCoefficients& coef, int steps,
                           const SimulationOptions& options);

/// Iterated h-step forecast from the last p rows of `history`, with the
/// innovation set to zero.
NetworkTimeSeries forecast(const GnarFit& fit, const NetworkTimeSeries& history,
                           const CountyNetwork& net, int horizon);

/// Same recursion driven by explicit coefficients.
NetworkTimeSeries forecast(const GnarOrder& order, const GnarCoefficients& coef,
                           const NetworkTimeSeries& history, const CountyNetwork& net,
                           int horizon);

/// Named model configurations 1, 2 and 3.
GnarOrder preset(int model_id);

/// Grid cell (alphaOrder a, betaOrder b) as a model order: a >= 1 gives p = a
/// with every lag reaching stage b; a = 0 with b >= 1 gives p = 1, s = [b] and
/// alpha pinned to zero; (0, 0) has no regressors and yields nullopt.
std::optional<GnarOrder> order_from_grid(int alpha_order, int beta_order,
                                         AlphaMode mode = AlphaMode::per_node);

enum class SelectionCriterion { holdout_mase, bic };

std::string_view to_string(SelectionCriterion c);
SelectionCriterion parse_selection_criterion(std::string_view text);

struct SelectionEntry {
  int alpha_order = 0;
  int beta_order = 0;
  std::optional<GnarOrder> order;
  std::optional<double> score;  // nullopt when the cell could not be evaluated
  std::string status;           // "ok" or the reason the cell is unavailable
};

/// Scores every grid cell 0 <= a, b <= grid_max. Evaluated cells come first in
/// ascending score (ties: smaller a, then smaller b); unavailable cells follow
/// in grid order.
std::vector<SelectionEntry> model_selection(const NetworkTimeSeries& series,
                                            const CountyNetwork& net, int grid_max,
                                            SelectionCriterion criterion,
                                            AlphaMode alpha_mode = AlphaMode::per_node);

}  // namespace gnar
