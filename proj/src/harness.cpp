#include "dcode/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace dcode {

double log_log_slope(const std::vector<double>& ks, const std::vector<double>& values) {
  if (ks.size() != values.size() || ks.size() < 2) throw std::invalid_argument("log_log_slope: need >= 2 paired points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double x = std::log(ks[i]), y = std::log(values[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::invalid_argument("log_log_slope: step sizes must differ");
  return (n * sxy - sx * sy) / den;
}

std::vector<double> pairwise_orders(const std::vector<double>& ks, const std::vector<double>& errors) {
  if (ks.size() != errors.size()) throw std::invalid_argument("pairwise_orders: length mismatch");
  std::vector<double> out(ks.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 1; i < ks.size(); ++i) out[i] = std::log(errors[i - 1] / errors[i]) / std::log(ks[i - 1] / ks[i]);
  return out;
}

OrderFit fit_order(const std::vector<double>& ks, const std::vector<double>& errors, double floor) {
  OrderFit fit;
  bool all_zero = !errors.empty();
  std::vector<double> kx, ey;
  for (std::size_t i = 0; i < ks.size(); ++i) {
    const double e = errors[i];
    if (std::isnan(e)) {
      all_zero = false;
      continue;
    }
    if (e != 0.0) all_zero = false;
    if (e > floor && std::isfinite(e)) {
      kx.push_back(ks[i]);
      ey.push_back(e);
    }
  }
  if (all_zero) {
    fit.status = "exact";
    fit.order = std::numeric_limits<double>::infinity();
    return fit;
  }
  fit.rows_used = static_cast<int>(kx.size());
  if (kx.size() < 2) {
    fit.status = "insufficient";
    fit.order = std::numeric_limits<double>::quiet_NaN();
    return fit;
  }
  fit.status = "fit";
  fit.order = log_log_slope(kx, ey);
  return fit;
}

double ConvergenceReport::max_fitted_order() const {
  double m = -std::numeric_limits<double>::infinity();
  for (const auto& f : fits)
    if (f.status == "fit") m = std::max(m, f.order);
  return m;
}

double ConvergenceReport::row_max_error(std::size_t row) const {
  double m = 0.0;
  for (double e : rows.at(row).errors) m = std::isnan(e) ? e : std::max(m, e);
  return m;
}

void finalize_report(ConvergenceReport& rep) {
  const std::size_t d = rep.error_floor.size();
  std::vector<double> ks;
  for (const auto& r : rep.rows) ks.push_back(r.k);
  rep.fits.clear();
  rep.pairwise.clear();
  for (std::size_t c = 0; c < d; ++c) {
    std::vector<double> e;
    for (const auto& r : rep.rows) e.push_back(r.errors.at(c));
    rep.fits.push_back(fit_order(ks, e, rep.error_floor[c]));
    rep.pairwise.push_back(pairwise_orders(ks, e));
  }
}

std::string format_g17(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_report_csv(std::ostream& os, const std::vector<ConvergenceReport>& reports) {
  if (reports.empty()) return;
  const bool tagged = reports.size() > 1;
  const Index d = reports.front().dim();
  if (tagged) os << "scheme,";
  os << "k";
  for (Index c = 1; c <= d; ++c) os << ",err_" << c;
  for (Index c = 1; c <= d; ++c) os << ",order_" << c;
  os << '\n';
  for (const auto& rep : reports) {
    if (rep.dim() != d) throw std::invalid_argument("write_report_csv: reports differ in dimension");
    const std::string tag = tagged ? rep.spec.name() + "," : "";
    for (std::size_t r = 0; r < rep.rows.size(); ++r) {
      os << tag << format_g17(rep.rows[r].k);
      for (Index c = 0; c < d; ++c) os << ',' << format_g17(rep.rows[r].errors[static_cast<std::size_t>(c)]);
      for (Index c = 0; c < d; ++c) {
        os << ',';
        if (r > 0) os << format_g17(rep.pairwise[static_cast<std::size_t>(c)][r]);
      }
      os << '\n';
    }
    os << tag << "fit";
    for (Index c = 0; c < d; ++c) os << ',';
    for (Index c = 0; c < d; ++c) {
      const auto& f = rep.fits[static_cast<std::size_t>(c)];
      os << ',' << (f.status == "fit" ? format_g17(f.order) : f.status);
    }
    os << '\n';
  }
}

}  // namespace dcode
