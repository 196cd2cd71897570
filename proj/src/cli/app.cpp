#include <iostream>

#include <CLI11.hpp>

#include "qkprog/cli/cli.hpp"

namespace qkprog::cli {

int run(int argc, const char* const* argv) {
  CLI::App app{"QKRLS self-prediction prognostics for C-MAPSS turbofan data"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Flat key = value file mirroring the flags below (flags win)");

  RunConfig config;
  std::string aggregate = to_string(config.aggregate);
  app.add_option("--k", config.k, "Number of lagged cycles per sensor")->capture_default_str();
  app.add_option("--sigma", config.sigma, "Gaussian kernel width")->capture_default_str();
  app.add_option("--alpha", config.alpha, "Regularization factor")->capture_default_str();
  app.add_option("--eps-u", config.eps_u, "Quantization size")->capture_default_str();
  app.add_option("--sensors", config.sensor_ids, "Sensor ids (comma list)")->delimiter(',')->capture_default_str();
  app.add_option("--j", config.j_select, "Predictors kept after ranking")->capture_default_str();
  app.add_option("--horizon", config.horizon_cap, "Maximum forecast cycles")->capture_default_str();
  app.add_option("--aggregate", aggregate, "How to combine failure times")
      ->check(CLI::IsMember({"median", "best"}))
      ->capture_default_str();
  app.add_option("--window-lo", config.window_lo, "Lower in-time bound on RUL error")->capture_default_str();
  app.add_option("--window-hi", config.window_hi, "Upper in-time bound on RUL error")->capture_default_str();
  app.add_option("--threads", config.threads, "Worker thread cap (0 = all)")->capture_default_str();

  std::string train_file, out_dir;
  auto* train = app.add_subcommand("train", "Train one predictor per training unit");
  train->add_option("train_file", train_file, "C-MAPSS training file")->required()->check(CLI::ExistingFile);
  train->add_option("out_dir", out_dir, "Directory for model_<unit>.json and fleet.json")->required();
  train->fallthrough();

  std::string model_dir, test_file, out_csv, predict_rul;
  auto* predict = app.add_subcommand("predict", "Estimate RUL for every test unit");
  predict->add_option("model_dir", model_dir, "Directory written by train")->required()->check(CLI::ExistingDirectory);
  predict->add_option("test_file", test_file, "C-MAPSS test file")->required()->check(CLI::ExistingFile);
  predict->add_option("out_csv", out_csv, "Results CSV")->required();
  predict->add_option("--rul", predict_rul, "Ground-truth RUL file to fill the rul_true column")
      ->check(CLI::ExistingFile);
  predict->fallthrough();

  std::string results_csv, rul_file, out_prefix;
  auto* evaluate = app.add_subcommand("evaluate", "Score a results CSV against ground truth");
  evaluate->add_option("results_csv", results_csv, "Results CSV from predict")->required()->check(CLI::ExistingFile);
  evaluate->add_option("rul_file", rul_file, "Ground-truth RUL file")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--out", out_prefix, "Output prefix (default: <results>_metrics)");
  evaluate->fallthrough();

  std::string model_file, inspect_traj;
  int inspect_unit = 0;
  auto* inspect = app.add_subcommand("inspect", "Print a model's codebook summary");
  inspect->add_option("model_file", model_file, "model_<unit>.json")->required()->check(CLI::ExistingFile);
  auto* traj_opt = inspect->add_option("--trajectory", inspect_traj, "C-MAPSS file to replay through the model")
                       ->check(CLI::ExistingFile);
  inspect->add_option("--unit", inspect_unit, "Unit id within --trajectory")->needs(traj_opt);
  inspect->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    config.aggregate = parse_aggregate(aggregate);
    if (*train) {
      cmd_train(train_file, out_dir, config, std::cerr);
    } else if (*predict) {
      cmd_predict(model_dir, test_file, out_csv,
                  predict_rul.empty() ? std::nullopt : std::optional<std::filesystem::path>(predict_rul), config,
                  std::cerr);
    } else if (*evaluate) {
      config.window().validate();
      std::filesystem::path prefix = out_prefix;
      if (prefix.empty()) {
        const std::filesystem::path results(results_csv);
        prefix = results.parent_path() / (results.stem().string() + "_metrics");
      }
      cmd_evaluate(results_csv, rul_file, prefix, config.window(), std::cout);
    } else if (*inspect) {
      cmd_inspect(model_file, inspect_traj.empty() ? std::nullopt : std::optional<std::filesystem::path>(inspect_traj),
                  inspect_unit > 0 ? std::optional<int>(inspect_unit) : std::nullopt, std::cout);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace qkprog::cli
