// Serial reference against OpenMP kernels, plus incremental weights against a full re-solve.
#include <memory>
#include <random>

#include <benchmark/benchmark.h>

#include "qkprog/prognostics/prognostics.hpp"
#include "qkprog/synthetic/synthetic.hpp"

using namespace qkprog;

namespace {

struct Fleet {
  std::vector<cmapss::Trajectory> train;
  std::vector<cmapss::Trajectory> test;
  std::vector<prognostics::Predictor> predictors;
};

const Fleet& fleet() {
  static const Fleet f = [] {
    synthetic::FleetOptions opt;
    opt.train_units = 40;
    opt.test_units = 8;
    const auto data = synthetic::make_dataset(opt);
    const auto raw = cmapss::select_sensors(data.train, cmapss::kDefaultSensors);
    const auto norm = cmapss::fit_normalization(raw);
    Fleet out;
    for (const auto& t : raw) out.train.push_back(cmapss::apply_normalization(t, norm));
    for (const auto& t : cmapss::select_sensors(data.test, cmapss::kDefaultSensors)) {
      out.test.push_back(cmapss::apply_normalization(t, norm));
    }
    out.predictors = prognostics::train_fleet_serial(out.train, {}).predictors;
    return out;
  }();
  return f;
}

void BM_TrainFleetSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prognostics::train_fleet_serial(fleet().train, {}));
}
void BM_TrainFleetParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prognostics::train_fleet(fleet().train, {}));
}

void BM_RankSerial(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prognostics::rank_predictors_serial(fleet().predictors, fleet().test[0], 5));
}
void BM_RankParallel(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(prognostics::rank_predictors(fleet().predictors, fleet().test[0], 5));
}

void BM_EstimateSerial(benchmark::State& state) {
  const prognostics::ForecastConfig config{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(prognostics::estimate_fleet_serial(fleet().predictors, fleet().test, config, 5));
  }
}
void BM_EstimateParallel(benchmark::State& state) {
  const prognostics::ForecastConfig config{};
  for (auto _ : state) {
    benchmark::DoNotOptimize(prognostics::estimate_fleet(fleet().predictors, fleet().test, config, 5));
  }
}

// One update on a model that already holds range(0) centers.
std::pair<qkrls::QkrlsModel, std::vector<Eigen::VectorXd>> grown_model(std::int64_t centers) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g(0.0, 1.0);
  qkrls::ModelParams params;
  params.eps_u = 0.0;
  qkrls::QkrlsModel model(25, 5, params);
  std::vector<Eigen::VectorXd> xs;
  for (std::int64_t i = 0; i < centers + 1; ++i) {
    Eigen::VectorXd x(25);
    for (auto& v : x) v = g(rng);
    xs.push_back(x);
  }
  for (std::int64_t i = 0; i < centers; ++i) model.update(xs[static_cast<std::size_t>(i)], Eigen::VectorXd::Ones(5));
  return {model, xs};
}

void BM_IncrementalUpdate(benchmark::State& state) {
  auto [model, xs] = grown_model(state.range(0));
  for (auto _ : state) {
    state.PauseTiming();
    qkrls::QkrlsModel copy = model;
    state.ResumeTiming();
    copy.update(xs.back(), Eigen::VectorXd::Ones(5));
    benchmark::DoNotOptimize(copy.beta().data());
  }
}
void BM_BatchResolve(benchmark::State& state) {
  auto [model, xs] = grown_model(state.range(0));
  model.update(xs.back(), Eigen::VectorXd::Ones(5));
  for (auto _ : state) {
    benchmark::DoNotOptimize(qkrls::batch_solve(model.codebook(), model.params().alpha, model.params().kernel));
  }
}

}  // namespace

BENCHMARK(BM_TrainFleetSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TrainFleetParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_RankSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_RankParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_EstimateSerial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EstimateParallel)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_IncrementalUpdate)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_BatchResolve)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
