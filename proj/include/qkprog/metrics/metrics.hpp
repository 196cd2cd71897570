#ifndef QKPROG_METRICS_METRICS_HPP
#define QKPROG_METRICS_METRICS_HPP

#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace qkprog::metrics {

/// d = rul_est - rul_true; negative is an early prediction, positive a late one.
struct ErrorRecord {
  int engine_id = 0;
  int rul_true = 0;
  int rul_est = 0;

  int error() const { return rul_est - rul_true; }
};

/// In-time acceptance window on d, inclusive at both ends.
struct Window {
  int lo = -13;
  int hi = 10;

  void validate() const;
};

enum class Timeliness { early, in_time, late };

Timeliness classify(int error, const Window& window);

/// Asymmetric exponential penalty: exp(-d/13) - 1 for d < 0, exp(d/10) - 1 otherwise.
double phm_score(int error);

struct HistogramBin {
  int lower = 0;  // bin covers [lower, lower + 1)
  long count = 0;
};

struct MetricsReport {
  std::size_t engines = 0;
  double mse = 0.0;
  double mae = 0.0;
  double mape_percent = 0.0;
  double score = 0.0;
  double accuracy_rate = 0.0;
  double r2 = 0.0;
  long in_time = 0;
  long early = 0;
  long late = 0;
  int error_min = 0;
  int error_max = 0;
  Window window;
  std::vector<HistogramBin> histogram;
};

/// Unit-width bins covering [min d, max d], empty bins included.
std::vector<HistogramBin> error_histogram(std::span<const ErrorRecord> records);

/// Throws std::invalid_argument on empty input, an invalid window or a
/// non-positive rul_true (MAPE is undefined there). Every sum is formed in
/// a record-order independent way, so the report is permutation invariant
/// bit for bit.
MetricsReport compute_metrics(std::span<const ErrorRecord> records, const Window& window = {});

/// JSON object with every MetricsReport field.
std::string to_json_text(const MetricsReport& report);

/// Aligned two-column plain-text table.
std::string to_text_table(const MetricsReport& report);

/// "bin,count" CSV for plotting.
void write_histogram_csv(std::ostream& out, const MetricsReport& report);

}  // namespace qkprog::metrics

#endif  // QKPROG_METRICS_METRICS_HPP
