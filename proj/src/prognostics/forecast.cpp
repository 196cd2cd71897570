#include <algorithm>
#include <exception>
#include <string>

#include "qkprog/prognostics/prognostics.hpp"

namespace qkprog::prognostics {

void ForecastConfig::validate(std::size_t fleet_size) const {
  if (j_select < 1 || static_cast<std::size_t>(j_select) > fleet_size) {
    throw std::invalid_argument("j_select must be in [1, " + std::to_string(fleet_size) + "], got " +
                                std::to_string(j_select));
  }
  if (horizon_cap < 1) {
    throw std::invalid_argument("horizon_cap must be >= 1, got " + std::to_string(horizon_cap));
  }
}

Forecast forecast_to_failure(const Predictor& predictor, const cmapss::Trajectory& test, int k, int horizon_cap) {
  const auto t_c = static_cast<int>(test.length());
  if (k < 1 || t_c <= k) {
    throw std::invalid_argument("forecast_to_failure: test unit " + std::to_string(test.unit_id) +
                                " needs more than k = " + std::to_string(k) + " observed cycles");
  }
  if (horizon_cap < 1) {
    throw std::invalid_argument("forecast_to_failure: horizon_cap must be >= 1");
  }
  const std::size_t failure_region = predictor.model.size() - 1;
  const Eigen::Index s = test.values.rows();

  // Columns 0..t_c-1 observed, t_c.. predicted.
  Eigen::MatrixXd signal(s, t_c + horizon_cap);
  signal.leftCols(t_c) = test.values;

  Forecast result;
  int steps = horizon_cap;
  for (int step = 1; step <= horizon_cap; ++step) {
    const int t = t_c + step;
    const Eigen::VectorXd window = cmapss::lag_vector(signal.leftCols(t - 1), t, k);
    signal.col(t - 1) = predictor.model.predict(window);
    if (predictor.model.assign_state(window) == failure_region) {
      result.failure_time = t;
      steps = step;
      break;
    }
  }
  result.extension = signal.middleCols(t_c, steps);
  return result;
}

int median_failure_time(std::vector<int> failure_times) {
  if (failure_times.empty()) {
    throw std::invalid_argument("median_failure_time: no values");
  }
  std::sort(failure_times.begin(), failure_times.end());
  const std::size_t mid = failure_times.size() / 2;
  if (failure_times.size() % 2 == 1) {
    return failure_times[mid];
  }
  const long sum = static_cast<long>(failure_times[mid - 1]) + failure_times[mid];
  // Failure times are positive, so integer division after +1 rounds halves up.
  return static_cast<int>((sum + 1) / 2);
}

namespace {

RulEstimate estimate_from_ranking(std::span<const Predictor> fleet, const cmapss::Trajectory& test,
                                  const ForecastConfig& config, int k,
                                  const std::vector<RankedPredictor>& ranking) {

  RulEstimate estimate;
  estimate.engine_id = test.unit_id;
  estimate.t_c = static_cast<int>(test.length());
  const auto selected = static_cast<std::size_t>(config.j_select);
  estimate.outcomes.resize(selected);
  for (std::size_t j = 0; j < selected; ++j) {
    const auto& ranked = ranking[j];
    const Forecast forecast = forecast_to_failure(fleet[ranked.fleet_index], test, k, config.horizon_cap);
    estimate.outcomes[j] = {ranked.engine_id, ranked.rmse, forecast.failure_time};
    estimate.selected_ids.push_back(ranked.engine_id);
  }

  std::vector<int> hits;
  for (const auto& outcome : estimate.outcomes) {
    if (outcome.failure_time) {
      hits.push_back(*outcome.failure_time);
    }
  }
  if (hits.empty()) {
    estimate.censored = true;
    estimate.t_f = estimate.t_c + config.horizon_cap;
  } else if (config.aggregate == Aggregate::best) {
    // Outcomes are in rank order; the best-ranked uncensored forecast wins.
    estimate.t_f = hits.front();
  } else {
    estimate.t_f = median_failure_time(std::move(hits));
  }
  estimate.rul = estimate.t_f - estimate.t_c;
  return estimate;
}

void check_fleet(std::span<const Predictor> fleet, const ForecastConfig& config) {
  if (fleet.empty()) {
    throw std::invalid_argument("estimate_rul: empty fleet");
  }
  config.validate(fleet.size());
}

}  // namespace

RulEstimate estimate_rul(std::span<const Predictor> fleet, const cmapss::Trajectory& test,
                         const ForecastConfig& config, int k) {
  check_fleet(fleet, config);
  return estimate_from_ranking(fleet, test, config, k, rank_predictors(fleet, test, k));
}

std::vector<RulEstimate> estimate_fleet(std::span<const Predictor> fleet,
                                        const std::vector<cmapss::Trajectory>& tests, const ForecastConfig& config,
                                        int k) {
  if (fleet.empty()) {
    throw std::invalid_argument("estimate_fleet: empty fleet");
  }
  config.validate(fleet.size());
  std::vector<RulEstimate> estimates(tests.size());
  const auto count = static_cast<long>(tests.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    try {
      estimates[static_cast<std::size_t>(i)] = estimate_rul(fleet, tests[static_cast<std::size_t>(i)], config, k);
    } catch (...) {
#pragma omp critical(qkprog_estimate_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return estimates;
}

std::vector<RulEstimate> estimate_fleet_serial(std::span<const Predictor> fleet,
                                               const std::vector<cmapss::Trajectory>& tests,
                                               const ForecastConfig& config, int k) {
  check_fleet(fleet, config);
  std::vector<RulEstimate> estimates;
  estimates.reserve(tests.size());
  for (const auto& test : tests) {
    estimates.push_back(estimate_from_ranking(fleet, test, config, k, rank_predictors_serial(fleet, test, k)));
  }
  return estimates;
}

}  // namespace qkprog::prognostics
