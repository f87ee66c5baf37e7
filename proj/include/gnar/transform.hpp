#pragma once

#include <string_view>

#include <Eigen/Dense>

#include "gnar/series.hpp"

namespace gnar {

enum class TransformKind { identity, log1p, sqrt, zscore };

std::string_view to_string(TransformKind kind);
TransformKind parse_transform_kind(std::string_view text);

/// Elementwise value transform with the parameters needed to undo it.
/// zscore stores per-column mean and sample standard deviation; a constant
/// column gets scale 1.
struct Transform {
  TransformKind kind = TransformKind::identity;
  Eigen::RowVectorXd means;
  Eigen::RowVectorXd scales;
};

/// Estimates parameters from `series` (only zscore has any).
Transform fit_transform(const NetworkTimeSeries& series, TransformKind kind);

/// Throws std::domain_error on negative input under log1p or sqrt.
NetworkTimeSeries apply(const NetworkTimeSeries& series, const Transform& t);

/// sqrt inverts as x * |x| so negative model output stays monotone.
NetworkTimeSeries invert(const NetworkTimeSeries& series, const Transform& t);

}  // namespace gnar
