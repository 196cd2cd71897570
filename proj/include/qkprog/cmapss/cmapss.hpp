#ifndef QKPROG_CMAPSS_CMAPSS_HPP
#define QKPROG_CMAPSS_CMAPSS_HPP

#include <array>
#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qkprog::cmapss {

inline constexpr std::size_t kOpSettings = 3;
inline constexpr std::size_t kSensors = 21;
inline constexpr std::size_t kColumns = 2 + kOpSettings + kSensors;

/// Sensors known to carry a degradation trend on FD001 (1-based sensor ids).
inline const std::vector<int> kDefaultSensors = {2, 8, 11, 13, 15};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& detail, const std::string& source = {})
      : std::runtime_error((source.empty() ? "line " : source + ":") + std::to_string(line) + ": " + detail),
        line_(line),
        detail_(detail) {}
  std::size_t line() const { return line_; }
  const std::string& detail() const { return detail_; }

 private:
  std::size_t line_;
  std::string detail_;
};

/// One row of a C-MAPSS file.
struct CmapssRecord {
  int unit_id = 0;
  int cycle = 0;
  std::array<double, kOpSettings> op_settings{};
  std::array<double, kSensors> sensors{};

  friend bool operator==(const CmapssRecord&, const CmapssRecord&) = default;
};

/// Selected sensors of one engine: values(row = sensor, col = cycle - 1).
struct Trajectory {
  int unit_id = 0;
  Eigen::MatrixXd values;

  std::size_t sensors() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t length() const { return static_cast<std::size_t>(values.cols()); }
};

/// Lagged input and the target that follows it; t is the 1-based target cycle.
struct TrainingPair {
  Eigen::VectorXd x;
  Eigen::VectorXd d;
  int t = 0;
};

/// Fleet-wide per-sensor min and max.
struct Normalization {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  std::size_t sensors() const { return static_cast<std::size_t>(min.size()); }
};

/// Parses whitespace-separated C-MAPSS rows (unit, cycle, 3 settings,
/// 21 sensors). Blank lines are ignored. Records come back grouped by unit
/// (ascending id), cycles ascending. Throws ParseError on a wrong column
/// count, a non-numeric token, or cycles that do not run 1, 2, 3, ...
std::vector<CmapssRecord> parse_cmapss(std::istream& in);
std::vector<CmapssRecord> parse_cmapss_file(const std::filesystem::path& path);

/// Writes records in the same layout with shortest round-trip numbers.
void write_cmapss(std::ostream& out, const std::vector<CmapssRecord>& records);

/// Ground-truth RUL file: one non-negative integer per line.
std::vector<int> parse_rul(std::istream& in);
std::vector<int> parse_rul_file(const std::filesystem::path& path);

/// One trajectory per unit with rows in the order of sensor_ids (1..21).
std::vector<Trajectory> select_sensors(const std::vector<CmapssRecord>& records,
                                       const std::vector<int>& sensor_ids);

/// Throws std::invalid_argument for an empty fleet or a constant sensor.
Normalization fit_normalization(const std::vector<Trajectory>& fleet);

/// (v - min) / (max - min), no clipping.
Trajectory apply_normalization(const Trajectory& trajectory, const Normalization& norm);
Trajectory invert_normalization(const Trajectory& trajectory, const Normalization& norm);

/// Sensor-major lag vector for target cycle t (1-based):
/// [x1(t-k) .. x1(t-1), x2(t-k) .. x2(t-1), ...]. Columns of values are
/// cycles 1..n; requires k < t <= n + 1.
Eigen::VectorXd lag_vector(const Eigen::Ref<const Eigen::MatrixXd>& values, int t, int k);

/// Pairs for t = k+1 .. length. Throws std::invalid_argument
/// ("trajectory too short") when length <= k.
std::vector<TrainingPair> lag_embed(const Trajectory& trajectory, int k);

}  // namespace qkprog::cmapss

#endif  // QKPROG_CMAPSS_CMAPSS_HPP
