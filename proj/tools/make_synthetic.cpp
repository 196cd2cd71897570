// Writes a synthetic fleet as train_SYN.txt, test_SYN.txt and RUL_SYN.txt.
#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qkprog/synthetic/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic run-to-failure fleet in C-MAPSS format"};
  qkprog::synthetic::FleetOptions options;
  std::string out_dir;
  app.add_option("out_dir", out_dir, "Output directory")->required();
  app.add_option("--train-units", options.train_units)->capture_default_str();
  app.add_option("--test-units", options.test_units)->capture_default_str();
  app.add_option("--noise", options.noise_scale, "Noise multiplier")->capture_default_str();
  app.add_option("--seed", options.seed)->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  try {
    const auto data = qkprog::synthetic::make_dataset(options);
    const std::filesystem::path dir(out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream train(dir / "train_SYN.txt");
    qkprog::cmapss::write_cmapss(train, data.train);
    std::ofstream test(dir / "test_SYN.txt");
    qkprog::cmapss::write_cmapss(test, data.test);
    std::ofstream rul(dir / "RUL_SYN.txt");
    for (int r : data.rul) rul << r << '\n';
    if (!train || !test || !rul) throw std::runtime_error("write failed under " + out_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
