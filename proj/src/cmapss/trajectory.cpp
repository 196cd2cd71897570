#include <algorithm>
#include <limits>
#include <string>

#include "qkprog/cmapss/cmapss.hpp"

namespace qkprog::cmapss {

std::vector<Trajectory> select_sensors(const std::vector<CmapssRecord>& records,
                                       const std::vector<int>& sensor_ids) {
  if (sensor_ids.empty()) {
    throw std::invalid_argument("select_sensors: no sensors requested");
  }
  for (int id : sensor_ids) {
    if (id < 1 || id > static_cast<int>(kSensors)) {
      throw std::invalid_argument("select_sensors: unknown sensor id " + std::to_string(id) +
                                  " (valid ids are 1.." + std::to_string(kSensors) + ")");
    }
  }
  const auto rows = static_cast<Eigen::Index>(sensor_ids.size());
  std::vector<Trajectory> fleet;
  std::size_t begin = 0;
  while (begin < records.size()) {
    std::size_t end = begin;
    while (end < records.size() && records[end].unit_id == records[begin].unit_id) {
      ++end;
    }
    Trajectory traj;
    traj.unit_id = records[begin].unit_id;
    traj.values.resize(rows, static_cast<Eigen::Index>(end - begin));
    for (std::size_t c = begin; c < end; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        traj.values(r, static_cast<Eigen::Index>(c - begin)) =
            records[c].sensors[static_cast<std::size_t>(sensor_ids[static_cast<std::size_t>(r)] - 1)];
      }
    }
    fleet.push_back(std::move(traj));
    begin = end;
  }
  return fleet;
}

Normalization fit_normalization(const std::vector<Trajectory>& fleet) {
  if (fleet.empty()) {
    throw std::invalid_argument("fit_normalization: empty fleet");
  }
  const Eigen::Index s = fleet.front().values.rows();
  Normalization norm;
  norm.min = Eigen::VectorXd::Constant(s, std::numeric_limits<double>::infinity());
  norm.max = Eigen::VectorXd::Constant(s, -std::numeric_limits<double>::infinity());
  for (const auto& traj : fleet) {
    if (traj.values.rows() != s) {
      throw std::invalid_argument("fit_normalization: trajectories disagree on sensor count");
    }
    if (traj.values.cols() == 0) {
      continue;
    }
    norm.min = norm.min.cwiseMin(traj.values.rowwise().minCoeff());
    norm.max = norm.max.cwiseMax(traj.values.rowwise().maxCoeff());
  }
  for (Eigen::Index r = 0; r < s; ++r) {
    if (!(norm.max(r) > norm.min(r))) {
      throw std::invalid_argument("fit_normalization: sensor row " + std::to_string(r + 1) +
                                  " is constant over the fleet; exclude it from the sensor list");
    }
  }
  return norm;
}

Trajectory apply_normalization(const Trajectory& trajectory, const Normalization& norm) {
  if (trajectory.values.rows() != norm.min.size()) {
    throw std::invalid_argument("apply_normalization: sensor count mismatch");
  }
  Trajectory out{trajectory.unit_id, trajectory.values};
  const Eigen::ArrayXd range = (norm.max - norm.min).array();
  out.values = ((trajectory.values.colwise() - norm.min).array().colwise() / range).matrix();
  return out;
}

Trajectory invert_normalization(const Trajectory& trajectory, const Normalization& norm) {
  if (trajectory.values.rows() != norm.min.size()) {
    throw std::invalid_argument("invert_normalization: sensor count mismatch");
  }
  Trajectory out{trajectory.unit_id, trajectory.values};
  const Eigen::ArrayXd range = (norm.max - norm.min).array();
  out.values = ((trajectory.values.array().colwise() * range).matrix().colwise() + norm.min);
  return out;
}

Eigen::VectorXd lag_vector(const Eigen::Ref<const Eigen::MatrixXd>& values, int t, int k) {
  if (k < 1 || t <= k || t > values.cols() + 1) {
    throw std::out_of_range("lag_vector: target cycle " + std::to_string(t) + " out of range for k = " +
                            std::to_string(k) + " and " + std::to_string(values.cols()) + " cycles");
  }
  const Eigen::Index s = values.rows();
  Eigen::VectorXd x(s * k);
  // Cycle t-k is column t-k-1.
  for (Eigen::Index r = 0; r < s; ++r) {
    x.segment(r * k, k) = values.row(r).segment(t - k - 1, k).transpose();
  }
  return x;
}

std::vector<TrainingPair> lag_embed(const Trajectory& trajectory, int k) {
  if (k < 1) {
    throw std::invalid_argument("lag_embed: k must be >= 1");
  }
  const auto len = static_cast<int>(trajectory.length());
  if (len <= k) {
    throw std::invalid_argument("trajectory too short: unit " + std::to_string(trajectory.unit_id) + " has " +
                                std::to_string(len) + " cycles, need more than k = " + std::to_string(k));
  }
  std::vector<TrainingPair> pairs;
  pairs.reserve(static_cast<std::size_t>(len - k));
  for (int t = k + 1; t <= len; ++t) {
    pairs.push_back({lag_vector(trajectory.values, t, k), trajectory.values.col(t - 1), t});
  }
  return pairs;
}

}  // namespace qkprog::cmapss
