#include "gnar/model.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gnar {

std::string_view to_string(AlphaMode mode) {
  return mode == AlphaMode::per_node ? "per_node" : "global";
}

AlphaMode parse_alpha_mode(std::string_view text) {
  if (text == "per_node") return AlphaMode::per_node;
  if (text == "global") return AlphaMode::global;
  throw std::invalid_argument("unknown alpha mode: '" + std::string(text) + "'");
}

void GnarOrder::validate() const {
  if (p < 0) throw std::invalid_argument("lag order p must be non-negative");
  if (s.size() != static_cast<std::size_t>(p)) {
    throw std::invalid_argument("stage vector length must equal p");
  }
  if (std::any_of(s.begin(), s.end(), [](int v) { return v < 0; })) {
    throw std::invalid_argument("neighbour stages must be non-negative");
  }
  if (p == 0 || (alpha_zero && neighbor_terms() == 0)) {
    throw std::invalid_argument("model order " + describe() + " has no regressors");
  }
}

int GnarOrder::max_stage() const { return s.empty() ? 0 : *std::max_element(s.begin(), s.end()); }

int GnarOrder::neighbor_terms() const {
  int total = 0;
  for (int v : s) total += v;
  return total;
}

std::string GnarOrder::describe() const {
  std::ostringstream out;
  out << "p=" << p << " s=[";
  for (std::size_t j = 0; j < s.size(); ++j) out << (j ? "," : "") << s[j];
  out << "] alpha=" << (alpha_zero ? "zero" : to_string(alpha_mode));
  return out.str();
}

void GnarCoefficients::check(const GnarOrder& order, std::size_t nodes) const {
  order.validate();
  if (order.alpha_zero) {
    if (alpha.size() != 0 && !alpha.isZero(0.0)) {
      throw std::invalid_argument("alpha must be empty or zero when alpha is pinned to zero");
    }
  } else {
    const Eigen::Index rows = order.alpha_mode == AlphaMode::global ? 1 : static_cast<Eigen::Index>(nodes);
    if (alpha.rows() != rows || alpha.cols() != order.p) {
      throw std::invalid_argument("alpha shape does not match order and network size");
    }
  }
  if (beta.size() != static_cast<std::size_t>(order.p)) {
    throw std::invalid_argument("beta must have one entry per lag");
  }
  for (int j = 0; j < order.p; ++j) {
    if (beta[static_cast<std::size_t>(j)].size() != static_cast<std::size_t>(order.s[static_cast<std::size_t>(j)])) {
      throw std::invalid_argument("beta for lag " + std::to_string(j + 1) +
                                  " must have s_j entries");
    }
  }
}

double GnarCoefficients::alpha_for(std::size_t node, int lag) const {
  if (alpha.size() == 0) return 0.0;
  const Eigen::Index row = alpha.rows() == 1 ? 0 : static_cast<Eigen::Index>(node);
  return alpha(row, lag - 1);
}

std::string DesignColumn::label() const {
  std::ostringstream out;
  if (kind == Kind::self_lag) {
    out << "alpha_lag" << lag;
    if (node) out << "_node" << *node;
  } else {
    out << "beta_lag" << lag << "_stage" << stage;
  }
  return out.str();
}

namespace {

void check_alignment(const NetworkTimeSeries& series, std::size_t nodes) {
  if (static_cast<std::size_t>(series.nodes()) != nodes) {
    throw std::invalid_argument("series has " + std::to_string(series.nodes()) +
                                " columns but the network has " + std::to_string(nodes) +
                                " nodes");
  }
}

std::vector<DesignColumn> design_columns(const GnarOrder& order, std::size_t n) {
  std::vector<DesignColumn> cols;
  if (!order.alpha_zero) {
    if (order.alpha_mode == AlphaMode::per_node) {
      for (std::size_t i = 0; i < n; ++i) {
        for (int j = 1; j <= order.p; ++j) {
          cols.push_back({DesignColumn::Kind::self_lag, j, 0, i});
        }
      }
    } else {
      for (int j = 1; j <= order.p; ++j) cols.push_back({DesignColumn::Kind::self_lag, j, 0, {}});
    }
  }
  for (int j = 1; j <= order.p; ++j) {
    for (int r = 1; r <= order.s[static_cast<std::size_t>(j - 1)]; ++r) {
      cols.push_back({DesignColumn::Kind::neighbor, j, r, {}});
    }
  }
  return cols;
}

// Weighted stage-r neighbour sum of row `t` of `values` for node i.
double neighbor_sum(const NeighborTable& table, std::size_t i, int r, const Eigen::MatrixXd& values,
                    Eigen::Index t) {
  double z = 0.0;
  for (const auto& w : table[i][static_cast<std::size_t>(r - 1)]) {
    z += w.weight * values(t, static_cast<Eigen::Index>(w.index));
  }
  return z;
}

// One step of the recursion. `lags` holds at least p rows; row `last` is lag 1.
Eigen::RowVectorXd next_row(const GnarOrder& order, const GnarCoefficients& coef,
                            const NeighborTable& table, const Eigen::MatrixXd& lags,
                            Eigen::Index last) {
  const auto n = static_cast<std::size_t>(lags.cols());
  Eigen::RowVectorXd out(lags.cols());
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    for (int j = 1; j <= order.p; ++j) {
      const Eigen::Index t = last - (j - 1);
      if (!order.alpha_zero) x += coef.alpha_for(i, j) * lags(t, static_cast<Eigen::Index>(i));
      const auto& beta = coef.beta[static_cast<std::size_t>(j - 1)];
      for (int r = 1; r <= static_cast<int>(beta.size()); ++r) {
        x += beta[static_cast<std::size_t>(r - 1)] * neighbor_sum(table, i, r, lags, t);
      }
    }
    out(static_cast<Eigen::Index>(i)) = x;
  }
  return out;
}

}  // namespace

Design build_design(const NetworkTimeSeries& series, const CountyNetwork& net,
                    const GnarOrder& order) {
  order.validate();
  check_alignment(series, net.size());
  return build_design(series, neighbor_table(net, order.max_stage()), order, order.p);
}

Design build_design(const NetworkTimeSeries& series, const NeighborTable& table,
                    const GnarOrder& order, Eigen::Index first_step) {
  order.validate();
  check_alignment(series, table.size());
  const Eigen::Index steps = series.steps();
  if (steps <= order.p) {
    throw std::invalid_argument("series has " + std::to_string(steps) +
                                " steps, needs more than p = " + std::to_string(order.p));
  }
  if (first_step < order.p || first_step >= steps) {
    throw std::invalid_argument("first response step out of range");
  }
  const auto n = static_cast<Eigen::Index>(table.size());
  const auto& x = series.values();

  Design d;
  d.first_step = first_step;
  d.columns = design_columns(order, table.size());
  const Eigen::Index rows = (steps - first_step) * n;
  d.response.resize(rows);
  d.regressors.setZero(rows, static_cast<Eigen::Index>(d.columns.size()));

  for (Eigen::Index t = first_step; t < steps; ++t) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const Eigen::Index row = (t - first_step) * n + i;
      d.response(row) = x(t, i);
      for (std::size_t c = 0; c < d.columns.size(); ++c) {
        const auto& col = d.columns[c];
        const Eigen::Index lagged = t - col.lag;
        double v = 0.0;
        if (col.kind == DesignColumn::Kind::self_lag) {
          if (!col.node || static_cast<Eigen::Index>(*col.node) == i) v = x(lagged, i);
        } else {
          v = neighbor_sum(table, static_cast<std::size_t>(i), col.stage, x, lagged);
        }
        d.regressors(row, static_cast<Eigen::Index>(c)) = v;
      }
    }
  }
  return d;
}

LeastSquaresSolution least_squares(const Eigen::MatrixXd& x, const Eigen::VectorXd& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("design and response lengths differ");
  LeastSquaresSolution sol;
  sol.coefficients = Eigen::VectorXd::Zero(x.cols());
  if (x.cols() == 0) return sol;

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x.rows(), x.cols());
  qr.setThreshold(1e-10);
  qr.compute(x);
  sol.rank = qr.rank();

  std::vector<std::size_t> kept;
  const auto& perm = qr.colsPermutation().indices();
  for (Eigen::Index k = 0; k < sol.rank; ++k) kept.push_back(static_cast<std::size_t>(perm(k)));
  std::sort(kept.begin(), kept.end());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    if (!std::binary_search(kept.begin(), kept.end(), static_cast<std::size_t>(c))) {
      sol.dropped.push_back(static_cast<std::size_t>(c));
    }
  }
  if (kept.empty()) return sol;

  if (sol.dropped.empty()) {
    sol.coefficients = qr.solve(y);
    return sol;
  }
  Eigen::MatrixXd reduced(x.rows(), static_cast<Eigen::Index>(kept.size()));
  for (std::size_t k = 0; k < kept.size(); ++k) {
    reduced.col(static_cast<Eigen::Index>(k)) = x.col(static_cast<Eigen::Index>(kept[k]));
  }
  const Eigen::VectorXd b = reduced.colPivHouseholderQr().solve(y);
  for (std::size_t k = 0; k < kept.size(); ++k) {
    sol.coefficients(static_cast<Eigen::Index>(kept[k])) = b(static_cast<Eigen::Index>(k));
  }
  return sol;
}

namespace {

GnarCoefficients unpack(const GnarOrder& order, std::size_t n, const std::vector<DesignColumn>& cols,
                        const Eigen::VectorXd& b) {
  GnarCoefficients coef;
  if (!order.alpha_zero) {
    coef.alpha.setZero(order.alpha_mode == AlphaMode::global ? 1 : static_cast<Eigen::Index>(n),
                       order.p);
  }
  coef.beta.resize(static_cast<std::size_t>(order.p));
  for (int j = 0; j < order.p; ++j) {
    coef.beta[static_cast<std::size_t>(j)].assign(static_cast<std::size_t>(order.s[static_cast<std::size_t>(j)]), 0.0);
  }
  for (std::size_t c = 0; c < cols.size(); ++c) {
    const auto& col = cols[c];
    const double v = b(static_cast<Eigen::Index>(c));
    if (col.kind == DesignColumn::Kind::self_lag) {
      coef.alpha(col.node ? static_cast<Eigen::Index>(*col.node) : 0, col.lag - 1) = v;
    } else {
      coef.beta[static_cast<std::size_t>(col.lag - 1)][static_cast<std::size_t>(col.stage - 1)] = v;
    }
  }
  return coef;
}

}  // namespace

GnarFit fit(const NetworkTimeSeries& series, const CountyNetwork& net, const GnarOrder& order) {
  order.validate();
  check_alignment(series, net.size());
  if (series.steps() <= order.p) {
    throw std::invalid_argument("series has " + std::to_string(series.steps()) +
                                " steps, needs more than p = " + std::to_string(order.p));
  }
  const auto n = net.size();

  GnarFit out;
  out.order = order;
  const auto rows = static_cast<std::size_t>(series.steps() - order.p) * n;
  if (!order.alpha_zero && order.alpha_mode == AlphaMode::per_node &&
      rows < design_columns(order, n).size()) {
    out.order.alpha_mode = AlphaMode::global;
    out.warnings.push_back("per-node alpha needs " + std::to_string(design_columns(order, n).size()) +
                           " columns but only " + std::to_string(rows) +
                           " rows are available; using a global alpha");
  }

  const Design d = build_design(series, neighbor_table(net, out.order.max_stage()), out.order,
                                out.order.p);
  if (static_cast<std::size_t>(d.regressors.rows()) < d.columns.size()) {
    throw std::invalid_argument("insufficient rows: " + std::to_string(d.regressors.rows()) +
                                " rows for " + std::to_string(d.columns.size()) + " columns");
  }
  const auto sol = least_squares(d.regressors, d.response);
  for (std::size_t c : sol.dropped) {
    out.dropped_columns.push_back(d.columns[c]);
  }
  if (!sol.dropped.empty()) {
    std::string msg = "rank-deficient design; dropped";
    for (const auto& col : out.dropped_columns) msg += " " + col.label();
    out.warnings.push_back(std::move(msg));
  }

  out.design_columns = d.columns;
  out.coefficients = unpack(out.order, n, d.columns, sol.coefficients);
  const Eigen::VectorXd resid = d.response - d.regressors * sol.coefficients;
  out.residuals = Eigen::Map<const Eigen::MatrixXd>(resid.data(), static_cast<Eigen::Index>(n),
                                                    resid.size() / static_cast<Eigen::Index>(n))
                      .transpose();
  const auto dof = std::max<Eigen::Index>(1, resid.size() - sol.rank);
  out.sigma2_hat = resid.squaredNorm() / static_cast<double>(dof);
  out.node_order_hash = net.node_order_hash();
  return out;
}

NetworkTimeSeries simulate(const CountyNetwork& net, const GnarOrder& order,
                           const GnarCoefficients& coef, int steps,
                           const SimulationOptions& options) {
  const auto n = static_cast<Eigen::Index>(net.size());
  coef.check(order, net.size());
  if (steps < 1) throw std::invalid_argument("simulation length must be positive");
  if (options.sigma < 0.0) throw std::invalid_argument("sigma must be non-negative");
  if (options.burn_in < 0) throw std::invalid_argument("burn-in must be non-negative");

  const Eigen::Index p = order.p;
  const Eigen::Index total = std::max<Eigen::Index>(p, options.burn_in + steps);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(total, n);

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> noise(0.0, options.sigma > 0.0 ? options.sigma : 1.0);
  auto draw = [&] { return options.sigma > 0.0 ? noise(rng) : 0.0; };

  if (options.initial) {
    if (options.initial->rows() != p || options.initial->cols() != n) {
      throw std::invalid_argument("initial rows must be p x n");
    }
    x.topRows(p) = *options.initial;
  } else {
    for (Eigen::Index t = 0; t < p; ++t) {
      for (Eigen::Index i = 0; i < n; ++i) x(t, i) = draw();
    }
  }

  const NeighborTable table = neighbor_table(net, order.max_stage());
  for (Eigen::Index t = p; t < total; ++t) {
    x.row(t) = next_row(order, coef, table, x, t - 1);
    for (Eigen::Index i = 0; i < n; ++i) x(t, i) += draw();
  }
  return NetworkTimeSeries(x.bottomRows(steps), Frequency::daily);
}

NetworkTimeSeries forecast(const GnarOrder& order, const GnarCoefficients& coef,
                           const NetworkTimeSeries& history, const CountyNetwork& net,
                           int horizon) {
  coef.check(order, net.size());
  check_alignment(history, net.size());
  if (horizon < 1) throw std::invalid_argument("forecast horizon must be at least 1");
  const Eigen::Index p = order.p;
  if (history.steps() < p) {
    throw std::invalid_argument("forecast needs at least p = " + std::to_string(p) +
                                " history rows, got " + std::to_string(history.steps()));
  }

  Eigen::MatrixXd window(p + horizon, history.nodes());
  window.topRows(p) = history.values().bottomRows(p);
  const NeighborTable table = neighbor_table(net, order.max_stage());
  for (Eigen::Index k = 0; k < horizon; ++k) {
    window.row(p + k) = next_row(order, coef, table, window, p + k - 1);
  }
  return NetworkTimeSeries(window.bottomRows(horizon), history.frequency(),
                           history.date_at(history.steps()));
}

NetworkTimeSeries forecast(const GnarFit& fit, const NetworkTimeSeries& history,
                           const CountyNetwork& net, int horizon) {
  if (!fit.node_order_hash.empty() && fit.node_order_hash != net.node_order_hash()) {
    throw std::invalid_argument("fit was estimated on a different node order");
  }
  return forecast(fit.order, fit.coefficients, history, net, horizon);
}

GnarOrder preset(int model_id) {
  switch (model_id) {
    case 1: return GnarOrder{1, {1}, AlphaMode::per_node, false};
    case 2: return GnarOrder{1, {1}, AlphaMode::per_node, true};
    case 3: return GnarOrder{2, {1, 1}, AlphaMode::per_node, false};
    default: throw std::invalid_argument("unknown model preset " + std::to_string(model_id));
  }
}

std::optional<GnarOrder> order_from_grid(int alpha_order, int beta_order, AlphaMode mode) {
  if (alpha_order < 0 || beta_order < 0) throw std::invalid_argument("grid orders must be >= 0");
  if (alpha_order >= 1) {
    return GnarOrder{alpha_order, std::vector<int>(static_cast<std::size_t>(alpha_order), beta_order),
                     mode, false};
  }
  if (beta_order >= 1) return GnarOrder{1, {beta_order}, mode, true};
  return std::nullopt;
}

}  // namespace gnar
