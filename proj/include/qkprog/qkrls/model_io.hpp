#ifndef QKPROG_QKRLS_MODEL_IO_HPP
#define QKPROG_QKRLS_MODEL_IO_HPP

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkprog/qkrls/model.hpp"

namespace qkprog::qkrls {

inline constexpr int kModelFormatVersion = 1;

class ModelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Per-sensor min-max scaling the model inputs were built with.
struct ScalingRecord {
  std::vector<double> min;
  std::vector<double> max;
};

/// A trained model plus the metadata needed to use it on raw signals.
///
/// JSON layout (all keys required unless noted):
///   version, s, k, sigma, alpha, eps_u,
///   centers  n_L arrays of s*k numbers, sensor-major lag order
///   counts   n_L positive integers
///   dbar     n_L arrays of s numbers
///   beta     n_L arrays of s numbers
///   engine_id      (optional) integer
///   normalization  (optional) {"min": [...], "max": [...]}
///   sensors        (optional) 1-based sensor ids, one per output
struct ModelDocument {
  QkrlsModel model;
  std::size_t lags = 0;
  std::optional<int> engine_id;
  std::optional<ScalingRecord> normalization;
  std::optional<std::vector<int>> sensors;
};

/// Serializes to JSON text. Numbers use the shortest form that reads back
/// to the identical double.
std::string to_json_text(const ModelDocument& doc);

/// Parses JSON text; throws ModelFormatError on malformed or
/// version-mismatched input.
ModelDocument from_json_text(const std::string& text);

void save_model(const ModelDocument& doc, const std::filesystem::path& path);
ModelDocument load_model(const std::filesystem::path& path);

}  // namespace qkprog::qkrls

#endif  // QKPROG_QKRLS_MODEL_IO_HPP
