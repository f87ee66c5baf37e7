#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "gnar/metrics.hpp"
#include "gnar/model.hpp"
#include "gnar/network.hpp"
#include "gnar/series.hpp"
#include "gnar/transform.hpp"

namespace gnar {

struct SummaryStats {
  double mean = 0.0;
  double median = 0.0;
  double variance = 0.0;  // sample variance, N - 1 denominator; 0 when N = 1
  std::size_t count = 0;
};

/// Throws std::invalid_argument on empty input.
SummaryStats summarize(std::span<const double> values);

struct PeriodScore {
  int period = 0;          // 1-based position within the test window
  Eigen::Index step = 0;   // row of the series being forecast
  std::optional<double> mape;  // nullopt when every term was excluded
  std::optional<double> mase;
  std::size_t evaluated_nodes = 0;
  std::size_t mape_excluded = 0;
  std::size_t mase_excluded = 0;
};

struct ForecastEvaluation {
  std::string model;
  std::vector<PeriodScore> per_period;
  std::optional<SummaryStats> mape_summary;
  std::optional<SummaryStats> mase_summary;
};

/// A GNAR order, or the naive last-value baseline when `order` is empty.
struct ModelSpec {
  std::string name;
  std::optional<GnarOrder> order;

  static ModelSpec naive() { return {"naive", std::nullopt}; }
  bool is_naive() const noexcept { return !order.has_value(); }
};

enum class Aggregation {
  cross_sectional,  // each period scores the nodes at that step only
  cumulative,       // each period pools every term from the first test step on
};

struct RollingOptions {
  /// Nodes that are scored. Empty means every node not tagged external.
  std::vector<std::size_t> scored_nodes;
  MaseVariant mase_variant = MaseVariant::per_term;
  Aggregation aggregation = Aggregation::cross_sectional;
  TransformKind transform = TransformKind::identity;
  unsigned workers = 1;
};

/// A refit or forecast failed at one test period.
class PeriodFailure : public std::runtime_error {
 public:
  PeriodFailure(int period, const std::string& what)
      : std::runtime_error("period " + std::to_string(period) + ": " + what), period_(period) {}
  int period() const noexcept { return period_; }

 private:
  int period_;
};

/// Row t of the result is row t of `series` for t = 0..T-2, i.e. the forecast
/// for step t + 1. Throws std::invalid_argument when T < 2.
NetworkTimeSeries naive_forecast(const NetworkTimeSeries& series);

/// For each of the last `test_periods` steps: refit on all earlier rows,
/// forecast one step ahead and score the scored nodes. Periods may run in
/// parallel; records come back in period order.
ForecastEvaluation rolling_horizon(const NetworkTimeSeries& series, const CountyNetwork& net,
                                   const ModelSpec& model, int test_periods,
                                   const RollingOptions& options = {});

/// True iff the summary MASE mean is strictly below 1.
bool predictive_power(const ForecastEvaluation& evaluation);

}  // namespace gnar
