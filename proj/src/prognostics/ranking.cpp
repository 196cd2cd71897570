#include <algorithm>
#include <cmath>
#include <string>

#include "qkprog/prognostics/prognostics.hpp"

namespace qkprog::prognostics {

namespace {

void check_ranking_input(std::span<const Predictor> fleet, const cmapss::Trajectory& test, int k) {
  if (k < 1 || test.length() <= static_cast<std::size_t>(k)) {
    throw std::invalid_argument("rank_predictors: test unit " + std::to_string(test.unit_id) +
                                " needs more than k = " + std::to_string(k) + " observed cycles");
  }
  for (const auto& p : fleet) {
    if (p.model.empty()) {
      throw std::logic_error("rank_predictors: predictor " + std::to_string(p.engine_id) + " is untrained");
    }
    if (p.model.output_dim() != test.sensors() ||
        p.model.input_dim() != test.sensors() * static_cast<std::size_t>(k)) {
      throw std::invalid_argument("rank_predictors: predictor " + std::to_string(p.engine_id) +
                                  " does not match the test signal layout");
    }
  }
}

void sort_ranking(std::vector<RankedPredictor>& ranking) {
  std::sort(ranking.begin(), ranking.end(), [](const RankedPredictor& a, const RankedPredictor& b) {
    if (a.rmse != b.rmse) {
      return a.rmse < b.rmse;
    }
    return a.engine_id < b.engine_id;
  });
}

}  // namespace

double selection_error(const Predictor& predictor, const cmapss::Trajectory& test, int k) {
  const auto t_c = static_cast<int>(test.length());
  double sum = 0.0;
  for (int t = k + 1; t <= t_c; ++t) {
    const Eigen::VectorXd predicted = predictor.model.predict(cmapss::lag_vector(test.values, t, k));
    sum += (test.values.col(t - 1) - predicted).squaredNorm();
  }
  return std::sqrt(sum);
}

std::vector<RankedPredictor> rank_predictors(std::span<const Predictor> fleet, const cmapss::Trajectory& test,
                                             int k) {
  check_ranking_input(fleet, test, k);
  std::vector<RankedPredictor> ranking(fleet.size());
  const auto count = static_cast<long>(fleet.size());

#pragma omp parallel for schedule(dynamic, 4)
  for (long i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    ranking[idx] = {fleet[idx].engine_id, idx, selection_error(fleet[idx], test, k)};
  }
  sort_ranking(ranking);
  return ranking;
}

std::vector<RankedPredictor> rank_predictors_serial(std::span<const Predictor> fleet,
                                                    const cmapss::Trajectory& test, int k) {
  check_ranking_input(fleet, test, k);
  std::vector<RankedPredictor> ranking;
  ranking.reserve(fleet.size());
  for (std::size_t i = 0; i < fleet.size(); ++i) {
    ranking.push_back({fleet[i].engine_id, i, selection_error(fleet[i], test, k)});
  }
  sort_ranking(ranking);
  return ranking;
}

}  // namespace qkprog::prognostics
