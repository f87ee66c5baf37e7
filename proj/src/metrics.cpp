#include "gnar/metrics.hpp"

#include <cmath>
#include <string>

namespace gnar {

MetricValue mape(std::span<const double> actual, std::span<const double> forecast) {
  if (actual.size() != forecast.size() || actual.empty()) {
    throw std::invalid_argument("mape: inputs must be non-empty and of equal length");
  }
  MetricValue m;
  double total = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    if (actual[k] == 0.0) {
      ++m.excluded;
      continue;
    }
    total += std::abs((actual[k] - forecast[k]) / actual[k]);
    ++m.included;
  }
  if (m.included == 0) throw UndefinedMetric("mape: every actual value is zero");
  m.value = total / static_cast<double>(m.included);
  return m;
}

MetricValue mase(std::span<const double> actual, std::span<const double> forecast,
                 std::span<const double> previous, MaseVariant variant) {
  if (actual.size() != forecast.size() || actual.size() != previous.size() || actual.empty()) {
    throw std::invalid_argument("mase: inputs must be non-empty and of equal length");
  }
  MetricValue m;
  double numerator = 0.0;
  double denominator = 0.0;
  for (std::size_t k = 0; k < actual.size(); ++k) {
    const double step = actual[k] - previous[k];
    if (step == 0.0) {
      ++m.excluded;
      continue;
    }
    const double err = actual[k] - forecast[k];
    if (variant == MaseVariant::per_term) {
      numerator += std::abs(err / step);
    } else {
      numerator += std::abs(err);
      denominator += std::abs(step);
    }
    ++m.included;
  }
  if (m.included == 0) throw UndefinedMetric("mase: every term has a flat naive step");
  m.value = variant == MaseVariant::per_term ? numerator / static_cast<double>(m.included)
                                             : numerator / denominator;
  return m;
}

std::string_view to_string(MapeBand band) {
  switch (band) {
    case MapeBand::highly_accurate: return "highly_accurate";
    case MapeBand::good: return "good";
    case MapeBand::reasonable: return "reasonable";
    case MapeBand::inaccurate: return "inaccurate";
  }
  return "inaccurate";
}

MapeBand mape_band(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("mape_band: value must be non-negative");
  const double percent = value * 100.0;
  if (percent <= 10.0) return MapeBand::highly_accurate;
  if (percent <= 20.0) return MapeBand::good;
  if (percent <= 50.0) return MapeBand::reasonable;
  return MapeBand::inaccurate;
}

}  // namespace gnar
