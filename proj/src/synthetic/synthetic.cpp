#include "qkprog/synthetic/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <stdexcept>

namespace qkprog::synthetic {

namespace {

struct SensorProfile {
  double healthy;
  double drift;  // change between new and failed
  double noise;  // measurement standard deviation
};

// Healthy level, drift at failure and noise per sensor 1..21.
constexpr std::array<SensorProfile, cmapss::kSensors> kProfiles{{
    {518.67, 0.0, 0.0},
    {642.45, 1.2, 0.37},
    {1588.5, 12.0, 5.0},
    {1403.5, 22.0, 6.5},
    {14.62, 0.0, 0.0},
    {21.61, 0.0, 0.001},
    {554.0, -3.0, 0.6},
    {2388.05, 0.22, 0.05},
    {9060.0, 20.0, 8.0},
    {1.3, 0.0, 0.0},
    {47.35, 0.9, 0.18},
    {522.0, -2.5, 0.5},
    {2388.05, 0.22, 0.05},
    {8140.0, 15.0, 6.0},
    {8.42, 0.09, 0.028},
    {0.03, 0.0, 0.0},
    {392.5, 4.0, 1.2},
    {2388.0, 0.0, 0.0},
    {100.0, 0.0, 0.0},
    {38.95, -0.6, 0.15},
    {23.37, -0.35, 0.09},
}};

class EngineSimulator {
 public:
  EngineSimulator(std::mt19937_64& rng, double noise_scale) : rng_(rng), noise_scale_(noise_scale) {}

  std::vector<cmapss::CmapssRecord> run(int unit_id, int life, int observed) {
    std::uniform_real_distribution<double> growth(3.0, 6.0);
    std::uniform_real_distribution<double> initial_wear(0.0, 0.15);
    std::normal_distribution<double> unit_normal(0.0, 1.0);

    const double rate = growth(rng_);
    const double wear0 = initial_wear(rng_);
    std::array<double, cmapss::kSensors> offset{};
    for (std::size_t j = 0; j < cmapss::kSensors; ++j) {
      offset[j] = 0.3 * kProfiles[j].noise * noise_scale_ * unit_normal(rng_);
    }

    std::vector<cmapss::CmapssRecord> rows;
    rows.reserve(static_cast<std::size_t>(observed));
    for (int cycle = 1; cycle <= observed; ++cycle) {
      const double progress = static_cast<double>(cycle) / life;
      const double wear = wear0 + (1.0 - wear0) * std::expm1(rate * progress) / std::expm1(rate);
      cmapss::CmapssRecord rec;
      rec.unit_id = unit_id;
      rec.cycle = cycle;
      rec.op_settings = {0.002 * unit_normal(rng_), 0.0003 * unit_normal(rng_), 100.0};
      for (std::size_t j = 0; j < cmapss::kSensors; ++j) {
        const auto& p = kProfiles[j];
        const double noise = p.noise * noise_scale_ * unit_normal(rng_);
        rec.sensors[j] = quantize(p.healthy + offset[j] + p.drift * wear + noise);
      }
      rows.push_back(rec);
    }
    return rows;
  }

 private:
  // The benchmark files carry four decimals.
  static double quantize(double v) { return std::round(v * 1e4) / 1e4; }

  std::mt19937_64& rng_;
  double noise_scale_;
};

}  // namespace

Dataset make_dataset(const FleetOptions& options) {
  if (options.min_life < options.min_observed + options.min_rul || options.max_life < options.min_life ||
      options.max_rul < options.min_rul || options.train_units < 0 || options.test_units < 0) {
    throw std::invalid_argument("synthetic fleet: inconsistent life/RUL bounds");
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<int> life_dist(options.min_life, options.max_life);
  EngineSimulator sim(rng, options.noise_scale);

  Dataset data;
  for (int unit = 1; unit <= options.train_units; ++unit) {
    const int life = life_dist(rng);
    auto rows = sim.run(unit, life, life);
    data.train.insert(data.train.end(), rows.begin(), rows.end());
  }
  for (int unit = 1; unit <= options.test_units; ++unit) {
    const int life = life_dist(rng);
    const int max_rul = std::min(options.max_rul, life - options.min_observed);
    std::uniform_int_distribution<int> rul_dist(options.min_rul, max_rul);
    const int rul = rul_dist(rng);
    auto rows = sim.run(unit, life, life - rul);
    data.test.insert(data.test.end(), rows.begin(), rows.end());
    data.rul.push_back(rul);
  }
  return data;
}

}  // namespace qkprog::synthetic
