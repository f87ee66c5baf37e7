#pragma once

#include <json.hpp>

#include "gnar/model.hpp"

namespace gnar {

nlohmann::json order_to_json(const GnarOrder& order);
GnarOrder order_from_json(const nlohmann::json& doc);

/// {order, alpha, beta, sigma2_hat, dropped_columns, node_order_hash}
/// alpha is a list of rows (one row in global mode, empty when pinned to zero).
nlohmann::json fit_to_json(const GnarFit& fit);

/// Restores what forecasting needs: order, coefficients, sigma2_hat, dropped
/// column labels and the node-order guard. Residuals are not stored.
GnarFit fit_from_json(const nlohmann::json& doc);

}  // namespace gnar
