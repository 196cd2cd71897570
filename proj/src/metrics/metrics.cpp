#include "qkprog/metrics/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

namespace qkprog::metrics {

void Window::validate() const {
  if (!(lo < 0 && hi > 0)) {
    throw std::invalid_argument("in-time window must satisfy lo < 0 < hi, got [" + std::to_string(lo) + ", " +
                                std::to_string(hi) + "]");
  }
}

Timeliness classify(int error, const Window& window) {
  if (error < window.lo) {
    return Timeliness::early;
  }
  if (error > window.hi) {
    return Timeliness::late;
  }
  return Timeliness::in_time;
}

double phm_score(int error) {
  if (error < 0) {
    return std::expm1(-static_cast<double>(error) / 13.0);
  }
  return std::expm1(static_cast<double>(error) / 10.0);
}

std::vector<HistogramBin> error_histogram(std::span<const ErrorRecord> records) {
  if (records.empty()) {
    return {};
  }
  std::map<int, long> counts;
  for (const auto& r : records) {
    ++counts[r.error()];
  }
  const int lo = counts.begin()->first;
  const int hi = counts.rbegin()->first;
  std::vector<HistogramBin> bins;
  bins.reserve(static_cast<std::size_t>(hi - lo + 1));
  for (int d = lo; d <= hi; ++d) {
    const auto it = counts.find(d);
    bins.push_back({d, it == counts.end() ? 0 : it->second});
  }
  return bins;
}

MetricsReport compute_metrics(std::span<const ErrorRecord> records, const Window& window) {
  if (records.empty()) {
    throw std::invalid_argument("compute_metrics: no records");
  }
  window.validate();

  MetricsReport report;
  report.engines = records.size();
  report.window = window;
  report.histogram = error_histogram(records);
  report.error_min = report.histogram.front().lower;
  report.error_max = report.histogram.back().lower;

  long long sum_sq = 0;
  long long sum_abs = 0;
  long long sum_true = 0;
  long long sum_true_sq = 0;
  std::vector<double> relative;
  relative.reserve(records.size());
  for (const auto& r : records) {
    if (r.rul_true <= 0) {
      throw std::invalid_argument("compute_metrics: engine " + std::to_string(r.engine_id) +
                                  " has rul_true <= 0; MAPE is undefined");
    }
    const long long d = r.error();
    sum_sq += d * d;
    sum_abs += std::llabs(d);
    sum_true += r.rul_true;
    sum_true_sq += static_cast<long long>(r.rul_true) * r.rul_true;
    relative.push_back(static_cast<double>(std::llabs(d)) / r.rul_true);
    switch (classify(r.error(), window)) {
      case Timeliness::early: ++report.early; break;
      case Timeliness::in_time: ++report.in_time; break;
      case Timeliness::late: ++report.late; break;
    }
  }

  const auto n = static_cast<double>(records.size());
  report.mse = static_cast<double>(sum_sq) / n;
  report.mae = static_cast<double>(sum_abs) / n;

  std::sort(relative.begin(), relative.end());
  double relative_sum = 0.0;
  for (double v : relative) {
    relative_sum += v;
  }
  report.mape_percent = 100.0 * relative_sum / n;

  for (const auto& bin : report.histogram) {
    if (bin.count > 0) {
      report.score += static_cast<double>(bin.count) * phm_score(bin.lower);
    }
  }
  report.accuracy_rate = static_cast<double>(report.in_time) / n;

  // n * SS_tot, exact in integers.
  const long long scaled_total = static_cast<long long>(records.size()) * sum_true_sq - sum_true * sum_true;
  if (scaled_total > 0) {
    report.r2 = 1.0 - static_cast<double>(sum_sq) * n / static_cast<double>(scaled_total);
  } else {
    report.r2 = sum_sq == 0 ? 1.0 : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

}  // namespace qkprog::metrics
