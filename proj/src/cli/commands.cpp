#include <algorithm>
#include <cstdio>
#include <fstream>
#include <memory>
#include <ostream>
#include <set>
#include <stdexcept>

#include "qkprog/cli/cli.hpp"
#include "qkprog/prognostics/results_io.hpp"
#include "qkprog/qkrls/model_io.hpp"

namespace qkprog::cli {

namespace fs = std::filesystem;

namespace {

std::vector<cmapss::Trajectory> normalize_all(const std::vector<cmapss::Trajectory>& raw,
                                              const cmapss::Normalization& norm) {
  std::vector<cmapss::Trajectory> out;
  out.reserve(raw.size());
  for (const auto& traj : raw) {
    out.push_back(cmapss::apply_normalization(traj, norm));
  }
  return out;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) {
    fs::create_directories(path.parent_path());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  return out;
}

std::string join_ids(const std::vector<int>& ids) {
  std::string text;
  for (std::size_t i = 0; i < ids.size(); ++i) {
    text += (i ? ", " : "") + std::to_string(ids[i]);
  }
  return text;
}

}  // namespace

TrainSummary cmd_train(const fs::path& train_file, const fs::path& out_dir, const RunConfig& config,
                       std::ostream& log) {
  config.validate();
  apply_thread_limit(config.threads);

  const auto records = cmapss::parse_cmapss_file(train_file);
  const auto raw = cmapss::select_sensors(records, config.sensor_ids);
  const cmapss::Normalization norm = cmapss::fit_normalization(raw);
  const auto normalized = normalize_all(raw, norm);

  const auto shared_norm = std::make_shared<const cmapss::Normalization>(norm);
  const prognostics::TrainingReport report = prognostics::train_fleet(normalized, config.training(), shared_norm);
  for (const auto& unit : report.skipped) {
    log << "warning: skipping unit " << unit.unit_id << ": " << unit.reason << '\n';
  }
  save_fleet(out_dir, config, norm, report);

  log << "trained " << report.predictors.size() << " of " << raw.size() << " units into " << out_dir.string()
      << '\n';
  return {raw.size(), report.predictors.size(), report.skipped};
}

std::vector<prognostics::RulEstimate> cmd_predict(const fs::path& model_dir, const fs::path& test_file,
                                                  const fs::path& out_csv, const std::optional<fs::path>& rul_file,
                                                  const RunConfig& config, std::ostream& log) {
  config.validate();
  apply_thread_limit(config.threads);

  const FleetFile fleet = load_fleet(model_dir);
  const prognostics::ForecastConfig forecast = config.forecast();
  forecast.validate(fleet.predictors.size());

  const auto records = cmapss::parse_cmapss_file(test_file);
  const auto tests = normalize_all(cmapss::select_sensors(records, fleet.sensor_ids), fleet.normalization);

  std::vector<int> truth;
  if (rul_file) {
    truth = cmapss::parse_rul_file(*rul_file);
    if (truth.size() != tests.size()) {
      throw std::runtime_error("RUL file has " + std::to_string(truth.size()) + " entries but the test file has " +
                               std::to_string(tests.size()) + " units");
    }
  }

  const auto estimates = prognostics::estimate_fleet(fleet.predictors, tests, forecast, fleet.k);

  std::vector<prognostics::ResultRow> rows;
  rows.reserve(estimates.size());
  std::size_t censored = 0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    rows.push_back(prognostics::to_result_row(estimates[i], truth.empty() ? std::nullopt : std::optional(truth[i])));
    censored += estimates[i].censored ? 1 : 0;
  }
  auto out = open_output(out_csv);
  prognostics::write_results(out, rows);

  log << "estimated RUL for " << rows.size() << " units (" << censored << " censored) -> " << out_csv.string()
      << '\n';
  return estimates;
}

EvaluateOutputs evaluate_outputs(const fs::path& prefix) {
  const std::string base = prefix.string();
  return {base + ".json", base + ".txt", base + "_histogram.csv"};
}

metrics::MetricsReport cmd_evaluate(const fs::path& results_csv, const fs::path& rul_file,
                                    const fs::path& out_prefix, const metrics::Window& window, std::ostream& out) {
  std::ifstream in(results_csv, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read " + results_csv.string());
  }
  const auto rows = prognostics::read_results(in);
  const auto truth = cmapss::parse_rul_file(rul_file);

  std::vector<int> unknown;
  std::vector<int> duplicated;
  std::set<int> seen;
  std::vector<metrics::ErrorRecord> records;
  for (const auto& row : rows) {
    if (!seen.insert(row.engine_id).second) {
      duplicated.push_back(row.engine_id);
      continue;
    }
    if (row.engine_id < 1 || static_cast<std::size_t>(row.engine_id) > truth.size()) {
      unknown.push_back(row.engine_id);
      continue;
    }
    records.push_back({row.engine_id, truth[static_cast<std::size_t>(row.engine_id - 1)], row.rul_estimated});
  }
  std::vector<int> missing;
  for (int id = 1; id <= static_cast<int>(truth.size()); ++id) {
    if (!seen.contains(id)) {
      missing.push_back(id);
    }
  }
  if (!unknown.empty() || !missing.empty() || !duplicated.empty()) {
    std::string message = "results and ground truth do not align:";
    if (!unknown.empty()) {
      message += " no ground truth for engine ids [" + join_ids(unknown) + "];";
    }
    if (!missing.empty()) {
      message += " no result for engine ids [" + join_ids(missing) + "];";
    }
    if (!duplicated.empty()) {
      message += " duplicated engine ids [" + join_ids(duplicated) + "];";
    }
    message.pop_back();
    throw std::runtime_error(message);
  }

  const metrics::MetricsReport report = metrics::compute_metrics(records, window);
  const EvaluateOutputs paths = evaluate_outputs(out_prefix);
  const std::string table = metrics::to_text_table(report);
  open_output(paths.json) << metrics::to_json_text(report);
  open_output(paths.text) << table;
  auto hist = open_output(paths.histogram);
  metrics::write_histogram_csv(hist, report);
  out << table;
  return report;
}

void cmd_inspect(const fs::path& model_file, const std::optional<fs::path>& trajectory_file,
                 std::optional<int> unit_id, std::ostream& out) {
  const qkrls::ModelDocument doc = qkrls::load_model(model_file);
  const qkrls::QkrlsModel& model = doc.model;
  const qkrls::Codebook& book = model.codebook();

  out << "model      " << model_file.string() << '\n';
  if (doc.engine_id) {
    out << "engine_id  " << *doc.engine_id << '\n';
  }
  out << "s          " << model.output_dim() << '\n'
      << "k          " << doc.lags << '\n'
      << "sigma      " << model.params().kernel.sigma << '\n'
      << "alpha      " << model.params().alpha << '\n'
      << "eps_u      " << model.params().eps_u << '\n'
      << "n_L        " << model.size() << '\n'
      << "samples    " << book.total_count() << '\n';
  out << "state     count   |center|     |beta|\n";
  char line[96];
  for (std::size_t n = 0; n < book.size(); ++n) {
    std::snprintf(line, sizeof line, "%5zu %9ld %10.5f %10.5f\n", n + 1, book.counts()[n], book.center(n).norm(),
                  model.beta().row(static_cast<Eigen::Index>(n)).norm());
    out << line;
  }

  if (!trajectory_file) {
    return;
  }
  if (!unit_id) {
    throw std::invalid_argument("inspect: --unit is required with --trajectory");
  }
  const std::vector<int> sensors = doc.sensors.value_or(cmapss::kDefaultSensors);
  const auto records = cmapss::parse_cmapss_file(*trajectory_file);
  const auto fleet = cmapss::select_sensors(records, sensors);
  const auto it = std::find_if(fleet.begin(), fleet.end(),
                               [&](const cmapss::Trajectory& t) { return t.unit_id == *unit_id; });
  if (it == fleet.end()) {
    throw std::invalid_argument("inspect: unit " + std::to_string(*unit_id) + " not found in " +
                                trajectory_file->string());
  }
  cmapss::Trajectory traj = *it;
  if (doc.normalization) {
    const cmapss::Normalization norm{
        Eigen::Map<const Eigen::VectorXd>(doc.normalization->min.data(),
                                          static_cast<Eigen::Index>(doc.normalization->min.size())),
        Eigen::Map<const Eigen::VectorXd>(doc.normalization->max.data(),
                                          static_cast<Eigen::Index>(doc.normalization->max.size()))};
    traj = cmapss::apply_normalization(traj, norm);
  }
  const prognostics::Predictor predictor{doc.engine_id.value_or(0), model, nullptr};
  const auto states = prognostics::state_sequence(predictor, traj.values, static_cast<int>(doc.lags));
  out << "states of unit " << *unit_id << " (cycles " << doc.lags + 1 << ".." << traj.length() << "):";
  for (std::size_t state : states) {
    out << ' ' << state + 1;
  }
  out << '\n';
}

}  // namespace qkprog::cli
