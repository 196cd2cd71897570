#include <cstdio>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "qkprog/metrics/metrics.hpp"

namespace qkprog::metrics {

std::string to_json_text(const MetricsReport& report) {
  nlohmann::ordered_json out;
  out["engines"] = report.engines;
  out["mse"] = report.mse;
  out["mae"] = report.mae;
  out["mape_percent"] = report.mape_percent;
  out["score"] = report.score;
  out["accuracy_rate"] = report.accuracy_rate;
  out["r2"] = report.r2;
  out["in_time"] = report.in_time;
  out["early"] = report.early;
  out["late"] = report.late;
  out["error_span"] = {report.error_min, report.error_max};
  out["window"] = {{"lo", report.window.lo}, {"hi", report.window.hi}};
  auto bins = nlohmann::ordered_json::array();
  for (const auto& bin : report.histogram) {
    bins.push_back({bin.lower, bin.count});
  }
  out["histogram"] = std::move(bins);
  return out.dump(2) + "\n";
}

std::string to_text_table(const MetricsReport& report) {
  std::ostringstream out;
  char line[96];
  const auto row = [&](const char* name, const char* fmt, auto value) {
    char cell[48];
    std::snprintf(cell, sizeof cell, fmt, value);
    std::snprintf(line, sizeof line, "%-16s %14s\n", name, cell);
    out << line;
  };
  row("Engines", "%zu", report.engines);
  row("R2", "%.3f", report.r2);
  char span[48];
  std::snprintf(span, sizeof span, "[%d,%d]", report.error_min, report.error_max);
  row("RUL error span", "%s", span);
  row("In time", "%ld", report.in_time);
  row("Early (FN)", "%ld", report.early);
  row("Late (FP)", "%ld", report.late);
  row("MSE", "%.1f", report.mse);
  row("MAE", "%.2f", report.mae);
  row("MAPE", "%.2f%%", report.mape_percent);
  row("Score", "%.1f", report.score);
  row("Accuracy rate", "%.0f%%", 100.0 * report.accuracy_rate);
  char window[48];
  std::snprintf(window, sizeof window, "[%d,%d]", report.window.lo, report.window.hi);
  row("In-time window", "%s", window);
  return out.str();
}

void write_histogram_csv(std::ostream& out, const MetricsReport& report) {
  out << "bin,count\n";
  for (const auto& bin : report.histogram) {
    out << bin.lower << ',' << bin.count << '\n';
  }
}

}  // namespace qkprog::metrics
