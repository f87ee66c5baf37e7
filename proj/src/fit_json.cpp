#include "gnar/fit_json.hpp"

#include <cstdio>

namespace gnar {
namespace {

DesignColumn column_from_label(const std::string& label) {
  DesignColumn col;
  int lag = 0, extra = 0;
  unsigned long node = 0;
  if (std::sscanf(label.c_str(), "beta_lag%d_stage%d", &lag, &extra) == 2) {
    col.kind = DesignColumn::Kind::neighbor;
    col.stage = extra;
  } else if (std::sscanf(label.c_str(), "alpha_lag%d_node%lu", &lag, &node) == 2) {
    col.node = node;
  } else if (std::sscanf(label.c_str(), "alpha_lag%d", &lag) != 1) {
    throw std::invalid_argument("unrecognised design column label '" + label + "'");
  }
  col.lag = lag;
  return col;
}

}  // namespace

nlohmann::json order_to_json(const GnarOrder& order) {
  return {{"p", order.p},
          {"s", order.s},
          {"alpha_mode", std::string(to_string(order.alpha_mode))},
          {"alpha_zero", order.alpha_zero}};
}

GnarOrder order_from_json(const nlohmann::json& doc) {
  GnarOrder order;
  order.p = doc.at("p").get<int>();
  order.s = doc.at("s").get<std::vector<int>>();
  order.alpha_mode = parse_alpha_mode(doc.value("alpha_mode", std::string("per_node")));
  order.alpha_zero = doc.value("alpha_zero", false);
  order.validate();
  return order;
}

nlohmann::json fit_to_json(const GnarFit& fit) {
  nlohmann::json alpha = nlohmann::json::array();
  const auto& a = fit.coefficients.alpha;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    std::vector<double> row(static_cast<std::size_t>(a.cols()));
    for (Eigen::Index c = 0; c < a.cols(); ++c) row[static_cast<std::size_t>(c)] = a(r, c);
    alpha.push_back(row);
  }
  nlohmann::json dropped = nlohmann::json::array();
  for (const auto& col : fit.dropped_columns) dropped.push_back(col.label());
  return {{"order", order_to_json(fit.order)},
          {"alpha", std::move(alpha)},
          {"beta", fit.coefficients.beta},
          {"sigma2_hat", fit.sigma2_hat},
          {"dropped_columns", std::move(dropped)},
          {"node_order_hash", fit.node_order_hash}};
}

GnarFit fit_from_json(const nlohmann::json& doc) {
  GnarFit fit;
  fit.order = order_from_json(doc.at("order"));
  const auto rows = doc.at("alpha").get<std::vector<std::vector<double>>>();
  if (!rows.empty()) {
    fit.coefficients.alpha.resize(static_cast<Eigen::Index>(rows.size()),
                                  static_cast<Eigen::Index>(rows.front().size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (rows[r].size() != rows.front().size()) throw std::invalid_argument("ragged alpha rows");
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        fit.coefficients.alpha(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
      }
    }
  }
  fit.coefficients.beta = doc.at("beta").get<std::vector<std::vector<double>>>();
  fit.sigma2_hat = doc.value("sigma2_hat", 0.0);
  fit.node_order_hash = doc.value("node_order_hash", std::string());
  for (const auto& label : doc.value("dropped_columns", nlohmann::json::array())) {
    fit.dropped_columns.push_back(column_from_label(label.get<std::string>()));
  }
  return fit;
}

}  // namespace gnar
