#include "gnar/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace gnar {

std::string_view to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::identity: return "none";
    case TransformKind::log1p: return "log1p";
    case TransformKind::sqrt: return "sqrt";
    case TransformKind::zscore: return "zscore";
  }
  return "none";
}

TransformKind parse_transform_kind(std::string_view text) {
  if (text == "none" || text == "identity") return TransformKind::identity;
  if (text == "log" || text == "log1p") return TransformKind::log1p;
  if (text == "sqrt") return TransformKind::sqrt;
  if (text == "zscore" || text == "normalize") return TransformKind::zscore;
  throw std::invalid_argument("unknown transform: '" + std::string(text) + "'");
}

Transform fit_transform(const NetworkTimeSeries& series, TransformKind kind) {
  Transform t;
  t.kind = kind;
  if (kind != TransformKind::zscore) return t;
  const auto& x = series.values();
  t.means = x.colwise().mean();
  t.scales = Eigen::RowVectorXd::Ones(x.cols());
  if (x.rows() > 1) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      const double var =
          (x.col(c).array() - t.means(c)).square().sum() / static_cast<double>(x.rows() - 1);
      if (var > 0.0) t.scales(c) = std::sqrt(var);
    }
  }
  return t;
}

namespace {

void check_width(const Transform& t, const NetworkTimeSeries& series) {
  if (t.kind == TransformKind::zscore && t.means.size() != series.nodes()) {
    throw std::invalid_argument("zscore parameters do not match series width");
  }
}

}  // namespace

NetworkTimeSeries apply(const NetworkTimeSeries& series, const Transform& t) {
  check_width(t, series);
  Eigen::MatrixXd x = series.values();
  switch (t.kind) {
    case TransformKind::identity:
      break;
    case TransformKind::log1p:
    case TransformKind::sqrt:
      if ((x.array() < 0.0).any()) {
        throw std::domain_error(std::string(to_string(t.kind)) + " requires non-negative values");
      }
      x = t.kind == TransformKind::log1p ? Eigen::MatrixXd(x.array().log1p())
                                         : Eigen::MatrixXd(x.array().sqrt());
      break;
    case TransformKind::zscore:
      x = ((x.rowwise() - t.means).array().rowwise() / t.scales.array()).matrix();
      break;
  }
  return NetworkTimeSeries(std::move(x), series.frequency(), series.start_date());
}

NetworkTimeSeries invert(const NetworkTimeSeries& series, const Transform& t) {
  check_width(t, series);
  Eigen::MatrixXd x = series.values();
  switch (t.kind) {
    case TransformKind::identity:
      break;
    case TransformKind::log1p:
      x = x.array().expm1().matrix();
      break;
    case TransformKind::sqrt:
      x = (x.array() * x.array().abs()).matrix();
      break;
    case TransformKind::zscore:
      x = ((x.array().rowwise() * t.scales.array()).matrix().rowwise() + t.means);
      break;
  }
  return NetworkTimeSeries(std::move(x), series.frequency(), series.start_date());
}

}  // namespace gnar
