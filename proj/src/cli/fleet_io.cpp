#include <fstream>
#include <memory>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qkprog/cli/cli.hpp"
#include "qkprog/qkrls/model_io.hpp"

namespace qkprog::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

constexpr int kFleetFormatVersion = 1;
constexpr const char* kFleetFile = "fleet.json";

std::vector<double> to_std(const Eigen::VectorXd& v) {
  return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::string model_file_name(int unit_id) {
  return "model_" + std::to_string(unit_id) + ".json";
}

void remove_stale_outputs(const fs::path& dir) {
  for (const auto& entry : fs::directory_iterator(dir)) {
    const std::string name = entry.path().filename().string();
    const bool model_file = name.rfind("model_", 0) == 0 && entry.path().extension() == ".json";
    if (entry.is_regular_file() && (model_file || name == kFleetFile)) {
      fs::remove(entry.path());
    }
  }
}

}  // namespace

void save_fleet(const fs::path& dir, const RunConfig& config, const cmapss::Normalization& norm,
                const prognostics::TrainingReport& report) {
  fs::create_directories(dir);
  remove_stale_outputs(dir);

  const qkrls::ScalingRecord scaling{to_std(norm.min), to_std(norm.max)};
  ordered_json models = ordered_json::array();
  for (const auto& predictor : report.predictors) {
    qkrls::ModelDocument doc{predictor.model, static_cast<std::size_t>(config.k), predictor.engine_id, scaling,
                             config.sensor_ids};
    const std::string file = model_file_name(predictor.engine_id);
    qkrls::save_model(doc, dir / file);
    models.push_back({{"engine_id", predictor.engine_id},
                      {"file", file},
                      {"codebook_size", predictor.model.size()},
                      {"samples", predictor.model.codebook().total_count()}});
  }
  ordered_json skipped = ordered_json::array();
  for (const auto& unit : report.skipped) {
    skipped.push_back({{"unit_id", unit.unit_id}, {"reason", unit.reason}});
  }

  ordered_json fleet;
  fleet["version"] = kFleetFormatVersion;
  fleet["config"] = {{"k", config.k},
                     {"sigma", config.sigma},
                     {"alpha", config.alpha},
                     {"eps_u", config.eps_u},
                     {"sensors", config.sensor_ids},
                     {"j", config.j_select},
                     {"horizon", config.horizon_cap},
                     {"aggregate", to_string(config.aggregate)},
                     {"window_lo", config.window_lo},
                     {"window_hi", config.window_hi}};
  fleet["normalization"] = {{"min", scaling.min}, {"max", scaling.max}};
  fleet["models"] = std::move(models);
  fleet["skipped"] = std::move(skipped);

  std::ofstream out(dir / kFleetFile, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + (dir / kFleetFile).string());
  }
  out << fleet.dump(2) << '\n';
}

FleetFile load_fleet(const fs::path& dir) {
  const fs::path index = dir / kFleetFile;
  std::ifstream in(index, std::ios::binary);
  if (!in) {
    throw std::runtime_error("missing models: cannot read " + index.string());
  }
  ordered_json fleet;
  try {
    fleet = ordered_json::parse(in);
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(index.string() + ": " + e.what());
  }

  FleetFile result;
  try {
    if (fleet.at("version").get<int>() != kFleetFormatVersion) {
      throw std::runtime_error(index.string() + ": unsupported fleet version");
    }
    const auto& config = fleet.at("config");
    result.k = config.at("k").get<int>();
    result.sigma = config.at("sigma").get<double>();
    result.alpha = config.at("alpha").get<double>();
    result.eps_u = config.at("eps_u").get<double>();
    result.sensor_ids = config.at("sensors").get<std::vector<int>>();
    result.normalization.min = to_eigen(fleet.at("normalization").at("min").get<std::vector<double>>());
    result.normalization.max = to_eigen(fleet.at("normalization").at("max").get<std::vector<double>>());
  } catch (const ordered_json::exception& e) {
    throw std::runtime_error(index.string() + ": " + e.what());
  }
  if (result.normalization.sensors() != result.sensor_ids.size()) {
    throw std::runtime_error(index.string() + ": normalization does not match the sensor list");
  }

  auto norm = std::make_shared<const cmapss::Normalization>(result.normalization);
  for (const auto& entry : fleet.at("models")) {
    const fs::path file = dir / entry.at("file").get<std::string>();
    if (!fs::exists(file)) {
      throw std::runtime_error("missing models: " + file.string() + " listed in fleet.json does not exist");
    }
    qkrls::ModelDocument doc = qkrls::load_model(file);
    if (doc.lags != static_cast<std::size_t>(result.k) || doc.model.output_dim() != result.sensor_ids.size()) {
      throw std::runtime_error(file.string() + ": model layout differs from fleet.json");
    }
    const int id = doc.engine_id.value_or(entry.at("engine_id").get<int>());
    result.predictors.push_back({id, std::move(doc.model), norm});
  }
  if (result.predictors.empty()) {
    throw std::runtime_error("missing models: " + index.string() + " lists no trained models");
  }
  return result;
}

}  // namespace qkprog::cli
