#ifndef QKPROG_CLI_CLI_HPP
#define QKPROG_CLI_CLI_HPP

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qkprog/cmapss/cmapss.hpp"
#include "qkprog/metrics/metrics.hpp"
#include "qkprog/prognostics/prognostics.hpp"

namespace qkprog::cli {

/// Every tunable of the pipeline. The pipeline uses no random numbers.
struct RunConfig {
  int k = 5;
  double sigma = 0.5;
  double alpha = 0.01;
  double eps_u = 0.3;
  std::vector<int> sensor_ids = cmapss::kDefaultSensors;
  int j_select = 5;
  int horizon_cap = 500;
  prognostics::Aggregate aggregate = prognostics::Aggregate::median;
  int window_lo = -13;
  int window_hi = 10;
  int threads = 0;  // 0 = OpenMP default

  void validate() const;
  prognostics::TrainingOptions training() const;
  prognostics::ForecastConfig forecast() const;
  metrics::Window window() const { return {window_lo, window_hi}; }
};

std::string to_string(prognostics::Aggregate aggregate);
prognostics::Aggregate parse_aggregate(const std::string& text);

/// Applies --threads to the OpenMP runtime when positive.
void apply_thread_limit(int threads);

// ---------------------------------------------------------------------------
// Fleet directory: fleet.json plus model_<unit>.json per trained unit.

struct FleetFile {
  int k = 0;
  double sigma = 0.0;
  double alpha = 0.0;
  double eps_u = 0.0;
  std::vector<int> sensor_ids;
  cmapss::Normalization normalization;
  std::vector<prognostics::Predictor> predictors;
};

void save_fleet(const std::filesystem::path& dir, const RunConfig& config, const cmapss::Normalization& norm,
                const prognostics::TrainingReport& report);

/// Loads the models listed in fleet.json. Throws when the file or any
/// listed model is missing or inconsistent.
FleetFile load_fleet(const std::filesystem::path& dir);

// ---------------------------------------------------------------------------
// Subcommands. Progress goes to `log`; results go to files.

struct TrainSummary {
  std::size_t units = 0;
  std::size_t trained = 0;
  std::vector<prognostics::SkippedUnit> skipped;
};

TrainSummary cmd_train(const std::filesystem::path& train_file, const std::filesystem::path& out_dir,
                       const RunConfig& config, std::ostream& log);

/// Model-defining settings (k, sensors, kernel) come from fleet.json; the
/// forecast settings come from config. With a RUL file, its i-th entry is
/// the truth for the i-th test unit in ascending id order.
std::vector<prognostics::RulEstimate> cmd_predict(const std::filesystem::path& model_dir,
                                                  const std::filesystem::path& test_file,
                                                  const std::filesystem::path& out_csv,
                                                  const std::optional<std::filesystem::path>& rul_file,
                                                  const RunConfig& config, std::ostream& log);

struct EvaluateOutputs {
  std::filesystem::path json;
  std::filesystem::path text;
  std::filesystem::path histogram;
};

/// Output paths derived from a prefix: <prefix>.json, <prefix>.txt,
/// <prefix>_histogram.csv.
EvaluateOutputs evaluate_outputs(const std::filesystem::path& prefix);

/// Joins results with the RUL file (line i = engine id i), writes the three
/// report files and prints the table to `out`. Throws listing every id
/// present on only one side.
metrics::MetricsReport cmd_evaluate(const std::filesystem::path& results_csv, const std::filesystem::path& rul_file,
                                    const std::filesystem::path& out_prefix, const metrics::Window& window,
                                    std::ostream& out);

/// Human-readable model summary; with a C-MAPSS file and unit id, also the
/// 1-based discrete state of every lag window of that unit.
void cmd_inspect(const std::filesystem::path& model_file, const std::optional<std::filesystem::path>& trajectory_file,
                 std::optional<int> unit_id, std::ostream& out);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv);

}  // namespace qkprog::cli

#endif  // QKPROG_CLI_CLI_HPP
