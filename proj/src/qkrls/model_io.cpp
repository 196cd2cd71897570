#include "qkprog/qkrls/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qkprog::qkrls {

namespace {

using nlohmann::json;

json rows_to_json(const std::vector<Eigen::VectorXd>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    out.push_back(std::vector<double>(row.data(), row.data() + row.size()));
  }
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row[static_cast<std::size_t>(j)] = m(i, j);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<Eigen::VectorXd> rows_from_json(const json& node, std::size_t width, const char* name) {
  if (!node.is_array()) {
    throw ModelFormatError(std::string("model: '") + name + "' must be an array");
  }
  std::vector<Eigen::VectorXd> rows;
  rows.reserve(node.size());
  for (const auto& entry : node) {
    const auto values = entry.get<std::vector<double>>();
    if (values.size() != width) {
      throw ModelFormatError(std::string("model: row of '") + name + "' has " +
                             std::to_string(values.size()) + " entries, expected " + std::to_string(width));
    }
    rows.emplace_back(Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(width)));
  }
  return rows;
}

const json& require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) {
    throw ModelFormatError(std::string("model: missing field '") + key + "'");
  }
  return *it;
}

}  // namespace

std::string to_json_text(const ModelDocument& doc) {
  const QkrlsModel& model = doc.model;
  const Codebook& book = model.codebook();
  json out;
  out["version"] = kModelFormatVersion;
  out["s"] = model.output_dim();
  out["k"] = doc.lags;
  out["sigma"] = model.params().kernel.sigma;
  out["alpha"] = model.params().alpha;
  out["eps_u"] = model.params().eps_u;
  out["centers"] = rows_to_json(book.centers());
  out["counts"] = book.counts();
  out["dbar"] = rows_to_json(book.dbar());
  out["beta"] = matrix_to_json(model.beta());
  if (doc.engine_id) {
    out["engine_id"] = *doc.engine_id;
  }
  if (doc.normalization) {
    out["normalization"] = {{"min", doc.normalization->min}, {"max", doc.normalization->max}};
  }
  if (doc.sensors) {
    out["sensors"] = *doc.sensors;
  }
  return out.dump(1) + "\n";
}

ModelDocument from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelFormatError(std::string("model: invalid JSON: ") + e.what());
  }
  try {
    const int version = require(doc, "version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelFormatError("model: unsupported version " + std::to_string(version) + " (expected " +
                             std::to_string(kModelFormatVersion) + ")");
    }
    const auto s = require(doc, "s").get<std::size_t>();
    const auto k = require(doc, "k").get<std::size_t>();
    if (s == 0 || k == 0) {
      throw ModelFormatError("model: s and k must be positive");
    }
    ModelParams params;
    params.kernel.sigma = require(doc, "sigma").get<double>();
    params.alpha = require(doc, "alpha").get<double>();
    params.eps_u = require(doc, "eps_u").get<double>();

    auto centers = rows_from_json(require(doc, "centers"), s * k, "centers");
    auto counts = require(doc, "counts").get<std::vector<long>>();
    auto dbar = rows_from_json(require(doc, "dbar"), s, "dbar");
    const auto beta_rows = rows_from_json(require(doc, "beta"), s, "beta");

    Eigen::MatrixXd beta(static_cast<Eigen::Index>(beta_rows.size()), static_cast<Eigen::Index>(s));
    for (std::size_t i = 0; i < beta_rows.size(); ++i) {
      beta.row(static_cast<Eigen::Index>(i)) = beta_rows[i].transpose();
    }

    Codebook book = Codebook::from_parts(s * k, s, params.eps_u, std::move(centers), std::move(counts),
                                         std::move(dbar));
    ModelDocument result;
    result.model = QkrlsModel::restore(params, std::move(book), std::move(beta));
    result.lags = k;
    if (auto it = doc.find("engine_id"); it != doc.end()) {
      result.engine_id = it->get<int>();
    }
    if (auto it = doc.find("normalization"); it != doc.end()) {
      ScalingRecord scaling;
      scaling.min = require(*it, "min").get<std::vector<double>>();
      scaling.max = require(*it, "max").get<std::vector<double>>();
      if (scaling.min.size() != s || scaling.max.size() != s) {
        throw ModelFormatError("model: normalization must have s entries");
      }
      result.normalization = std::move(scaling);
    }
    if (auto it = doc.find("sensors"); it != doc.end()) {
      auto sensors = it->get<std::vector<int>>();
      if (sensors.size() != s) {
        throw ModelFormatError("model: sensors must have s entries");
      }
      result.sensors = std::move(sensors);
    }
    return result;
  } catch (const json::exception& e) {
    throw ModelFormatError(std::string("model: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ModelFormatError(std::string("model: ") + e.what());
  }
}

void save_model(const ModelDocument& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write model file " + path.string());
  }
  out << to_json_text(doc);
  if (!out) {
    throw std::runtime_error("failed writing model file " + path.string());
  }
}

ModelDocument load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read model file " + path.string());
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return from_json_text(buffer.str());
}

}  // namespace qkprog::qkrls
