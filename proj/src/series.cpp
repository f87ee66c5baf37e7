#include "gnar/series.hpp"

#include <cstdio>
#include <stdexcept>
#include <string>

namespace gnar {

std::string_view to_string(Frequency f) { return f == Frequency::daily ? "daily" : "weekly"; }

Frequency parse_frequency(std::string_view text) {
  if (text == "daily") return Frequency::daily;
  if (text == "weekly") return Frequency::weekly;
  throw std::invalid_argument("unknown frequency: '" + std::string(text) + "'");
}

std::string format_date(Date d) {
  const std::chrono::year_month_day ymd{d};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

NetworkTimeSeries::NetworkTimeSeries(Eigen::MatrixXd values, Frequency frequency, Date start)
    : values_(std::move(values)), frequency_(frequency), start_(start) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw std::invalid_argument("time series needs at least one step and one node");
  }
  if (!values_.allFinite()) throw std::invalid_argument("time series contains non-finite values");
}

Date NetworkTimeSeries::date_at(Eigen::Index t) const {
  const int step = frequency_ == Frequency::daily ? 1 : 7;
  return start_ + std::chrono::days{static_cast<int>(t) * step};
}

NetworkTimeSeries NetworkTimeSeries::slice(Eigen::Index first, Eigen::Index count) const {
  if (first < 0 || count < 1 || first + count > steps()) {
    throw std::out_of_range("series slice out of range");
  }
  return NetworkTimeSeries(values_.middleRows(first, count), frequency_, date_at(first));
}

}  // namespace gnar
