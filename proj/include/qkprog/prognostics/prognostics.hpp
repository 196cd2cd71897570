#ifndef QKPROG_PROGNOSTICS_PROGNOSTICS_HPP
#define QKPROG_PROGNOSTICS_PROGNOSTICS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qkprog/cmapss/cmapss.hpp"
#include "qkprog/qkrls/model.hpp"

namespace qkprog::prognostics {

struct TrainingOptions {
  int k = 5;
  qkrls::ModelParams model;

  void validate() const;
};

/// A QKRLS model trained on one run-to-failure trajectory. Its last
/// codebook center marks the failure region.
struct Predictor {
  int engine_id = 0;
  qkrls::QkrlsModel model;
  std::shared_ptr<const cmapss::Normalization> norm;
};

struct SkippedUnit {
  int unit_id = 0;
  std::string reason;
};

struct TrainingReport {
  std::vector<Predictor> predictors;
  std::vector<SkippedUnit> skipped;
};

/// Streams the lag-embedded pairs of a (normalized) trajectory through
/// QkrlsModel::update in cycle order.
Predictor train_predictor(const cmapss::Trajectory& trajectory, const TrainingOptions& options,
                          std::shared_ptr<const cmapss::Normalization> norm = nullptr);

/// One predictor per trajectory, in input order. Trajectories too short for
/// k lags are skipped and listed in the report. Parallel over trajectories.
TrainingReport train_fleet(const std::vector<cmapss::Trajectory>& trajectories, const TrainingOptions& options,
                           std::shared_ptr<const cmapss::Normalization> norm = nullptr);
/// Single-threaded reference for train_fleet.
TrainingReport train_fleet_serial(const std::vector<cmapss::Trajectory>& trajectories,
                                  const TrainingOptions& options,
                                  std::shared_ptr<const cmapss::Normalization> norm = nullptr);

struct RankedPredictor {
  int engine_id = 0;
  std::size_t fleet_index = 0;
  double rmse = 0.0;
};

/// sqrt(sum_t |d_t - P(x_t)|^2) over the one-step-ahead predictions of the
/// observed cycles t = k+1 .. t_c. The sum is not divided by the number of
/// steps; every predictor sees the same window so the ranking is unaffected.
double selection_error(const Predictor& predictor, const cmapss::Trajectory& test, int k);

/// Fleet ordered by ascending selection error, ties by engine id.
/// Parallel over predictors.
std::vector<RankedPredictor> rank_predictors(std::span<const Predictor> fleet, const cmapss::Trajectory& test,
                                             int k);
std::vector<RankedPredictor> rank_predictors_serial(std::span<const Predictor> fleet,
                                                    const cmapss::Trajectory& test, int k);

enum class Aggregate { median, best };

struct ForecastConfig {
  int j_select = 5;
  int horizon_cap = 500;
  Aggregate aggregate = Aggregate::median;

  void validate(std::size_t fleet_size) const;
};

struct Forecast {
  /// First cycle whose input window falls in the failure region; empty when
  /// the horizon cap was reached first.
  std::optional<int> failure_time;
  /// Predicted signals for cycles t_c+1 .. t_c+steps (s x steps).
  Eigen::MatrixXd extension;
};

/// Recursive multi-step forecast from the end of the observed test signal.
/// The input window for cycle t takes observed values for cycles <= t_c and
/// predicted values after that.
Forecast forecast_to_failure(const Predictor& predictor, const cmapss::Trajectory& test, int k, int horizon_cap);

struct PredictorOutcome {
  int engine_id = 0;
  double rmse = 0.0;
  std::optional<int> failure_time;
};

struct RulEstimate {
  int engine_id = 0;
  int t_c = 0;
  int t_f = 0;
  int rul = 0;
  bool censored = false;
  std::vector<int> selected_ids;
  /// One entry per selected predictor, in rank order.
  std::vector<PredictorOutcome> outcomes;
};

/// Ranks the fleet, forecasts with the best j_select predictors and
/// aggregates their failure times. Censored forecasts are left out of the
/// aggregate; if all are censored the estimate is flagged and rul is the
/// horizon cap.
RulEstimate estimate_rul(std::span<const Predictor> fleet, const cmapss::Trajectory& test,
                         const ForecastConfig& config, int k);

/// estimate_rul for every test trajectory, in input order. Parallel over
/// test engines.
std::vector<RulEstimate> estimate_fleet(std::span<const Predictor> fleet,
                                        const std::vector<cmapss::Trajectory>& tests, const ForecastConfig& config,
                                        int k);
std::vector<RulEstimate> estimate_fleet_serial(std::span<const Predictor> fleet,
                                               const std::vector<cmapss::Trajectory>& tests,
                                               const ForecastConfig& config, int k);

/// Median of failure times, halves rounded up.
int median_failure_time(std::vector<int> failure_times);

/// Region index (0-based) of every lag window t = k+1 .. length of values.
std::vector<std::size_t> state_sequence(const Predictor& predictor, const Eigen::Ref<const Eigen::MatrixXd>& values,
                                        int k);

}  // namespace qkprog::prognostics

#endif  // QKPROG_PROGNOSTICS_PROGNOSTICS_HPP
