#include <exception>
#include <string>

#include "qkprog/prognostics/prognostics.hpp"

namespace qkprog::prognostics {

void TrainingOptions::validate() const {
  if (k < 1) {
    throw std::invalid_argument("lag count k must be >= 1, got " + std::to_string(k));
  }
  model.validate();
}

Predictor train_predictor(const cmapss::Trajectory& trajectory, const TrainingOptions& options,
                          std::shared_ptr<const cmapss::Normalization> norm) {
  options.validate();
  const auto pairs = cmapss::lag_embed(trajectory, options.k);
  const std::size_t s = trajectory.sensors();
  Predictor predictor{trajectory.unit_id,
                      qkrls::QkrlsModel(s * static_cast<std::size_t>(options.k), s, options.model),
                      std::move(norm)};
  for (const auto& pair : pairs) {
    predictor.model.update(pair.x, pair.d);
  }
  return predictor;
}

namespace {

bool long_enough(const cmapss::Trajectory& trajectory, int k) {
  return trajectory.length() > static_cast<std::size_t>(k);
}

SkippedUnit too_short(const cmapss::Trajectory& trajectory, int k) {
  return {trajectory.unit_id, "trajectory too short: " + std::to_string(trajectory.length()) +
                                  " cycles, need more than k = " + std::to_string(k)};
}

}  // namespace

TrainingReport train_fleet(const std::vector<cmapss::Trajectory>& trajectories, const TrainingOptions& options,
                           std::shared_ptr<const cmapss::Normalization> norm) {
  options.validate();
  const auto count = static_cast<long>(trajectories.size());
  std::vector<std::optional<Predictor>> slots(trajectories.size());
  std::exception_ptr failure;

#pragma omp parallel for schedule(dynamic, 1)
  for (long i = 0; i < count; ++i) {
    const auto& traj = trajectories[static_cast<std::size_t>(i)];
    if (!long_enough(traj, options.k)) {
      continue;
    }
    try {
      slots[static_cast<std::size_t>(i)] = train_predictor(traj, options, norm);
    } catch (...) {
#pragma omp critical(qkprog_training_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }

  TrainingReport report;
  for (std::size_t i = 0; i < trajectories.size(); ++i) {
    if (slots[i]) {
      report.predictors.push_back(std::move(*slots[i]));
    } else {
      report.skipped.push_back(too_short(trajectories[i], options.k));
    }
  }
  return report;
}

TrainingReport train_fleet_serial(const std::vector<cmapss::Trajectory>& trajectories,
                                  const TrainingOptions& options,
                                  std::shared_ptr<const cmapss::Normalization> norm) {
  options.validate();
  TrainingReport report;
  for (const auto& traj : trajectories) {
    if (long_enough(traj, options.k)) {
      report.predictors.push_back(train_predictor(traj, options, norm));
    } else {
      report.skipped.push_back(too_short(traj, options.k));
    }
  }
  return report;
}

std::vector<std::size_t> state_sequence(const Predictor& predictor, const Eigen::Ref<const Eigen::MatrixXd>& values,
                                        int k) {
  const auto len = static_cast<int>(values.cols());
  if (k < 1 || len <= k) {
    throw std::invalid_argument("state_sequence: need more than k = " + std::to_string(k) + " cycles");
  }
  std::vector<std::size_t> states;
  states.reserve(static_cast<std::size_t>(len - k));
  for (int t = k + 1; t <= len; ++t) {
    states.push_back(predictor.model.assign_state(cmapss::lag_vector(values, t, k)));
  }
  return states;
}

}  // namespace qkprog::prognostics
