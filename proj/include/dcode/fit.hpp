#pragma once

#include <string>
#include <vector>

namespace dcode {

/// Least-squares slope of log(value) against log(k).
[[nodiscard]] double log_log_slope(const std::vector<double>& ks, const std::vector<double>& values);

/// log(e_{i-1}/e_i) / log(k_{i-1}/k_i) for consecutive rows; entry 0 is NaN.
[[nodiscard]] std::vector<double> pairwise_orders(const std::vector<double>& ks, const std::vector<double>& errors);

struct OrderFit {
  double order = 0.0;
  int rows_used = 0;
  std::string status;  // "fit", "exact" (every error is zero) or "insufficient" (< 2 rows above floor)
};

/// Slope over rows whose error lies strictly above `floor`.
[[nodiscard]] OrderFit fit_order(const std::vector<double>& ks, const std::vector<double>& errors, double floor);

}  // namespace dcode
