#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string_view>

namespace gnar {

/// Raised when every term of an error metric was excluded.
class UndefinedMetric : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

struct MetricValue {
  double value = 0.0;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

/// Mean of |(Y - F) / Y| over terms with Y != 0.
MetricValue mape(std::span<const double> actual, std::span<const double> forecast);

enum class MaseVariant {
  per_term,  // mean of |(Y_t - F_t) / (Y_t - Y_{t-1})|
  scaled,    // sum |Y_t - F_t| / sum |Y_t - Y_{t-1}|, the conventional ratio
};

/// Terms with Y_t == Y_{t-1} are excluded under both variants, so the naive
/// forecast scores exactly 1.
MetricValue mase(std::span<const double> actual, std::span<const double> forecast,
                 std::span<const double> previous, MaseVariant variant = MaseVariant::per_term);

enum class MapeBand { highly_accurate, good, reasonable, inaccurate };

std::string_view to_string(MapeBand band);

/// `value` is a fraction. Bands split at 10%, 20% and 50%; a value on a
/// boundary takes the more accurate band. Throws on negative input.
MapeBand mape_band(double value);

}  // namespace gnar
