#pragma once

#include <chrono>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace gnar {

enum class Frequency { daily, weekly };

std::string_view to_string(Frequency f);
Frequency parse_frequency(std::string_view text);

using Date = std::chrono::sys_days;

/// ISO yyyy-mm-dd.
std::string format_date(Date d);

/// T x n panel of node observations; row = time step, column = node in
/// network order.
class NetworkTimeSeries {
 public:
  NetworkTimeSeries() = default;

  /// Throws std::invalid_argument when empty or when any entry is non-finite.
  NetworkTimeSeries(Eigen::MatrixXd values, Frequency frequency = Frequency::daily,
                    Date start = Date{});

  const Eigen::MatrixXd& values() const noexcept { return values_; }
  Eigen::Index steps() const noexcept { return values_.rows(); }
  Eigen::Index nodes() const noexcept { return values_.cols(); }
  double operator()(Eigen::Index t, Eigen::Index i) const { return values_(t, i); }

  Frequency frequency() const noexcept { return frequency_; }
  Date start_date() const noexcept { return start_; }
  /// Calendar date of row t (one or seven days per step).
  Date date_at(Eigen::Index t) const;

  /// Rows [first, first + count) with the start date shifted accordingly.
  NetworkTimeSeries slice(Eigen::Index first, Eigen::Index count) const;

 private:
  Eigen::MatrixXd values_;
  Frequency frequency_ = Frequency::daily;
  Date start_{};
};

}  // namespace gnar
