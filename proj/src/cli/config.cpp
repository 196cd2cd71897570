#include <stdexcept>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qkprog/cli/cli.hpp"

namespace qkprog::cli {

void RunConfig::validate() const {
  training().validate();
  if (sensor_ids.empty()) {
    throw std::invalid_argument("at least one sensor is required");
  }
  for (int id : sensor_ids) {
    if (id < 1 || id > static_cast<int>(cmapss::kSensors)) {
      throw std::invalid_argument("sensor id " + std::to_string(id) + " is outside 1.." +
                                  std::to_string(cmapss::kSensors));
    }
  }
  if (j_select < 1) {
    throw std::invalid_argument("--j must be >= 1");
  }
  if (horizon_cap < 1) {
    throw std::invalid_argument("--horizon must be >= 1");
  }
  window().validate();
  if (threads < 0) {
    throw std::invalid_argument("--threads must be >= 0");
  }
}

prognostics::TrainingOptions RunConfig::training() const {
  prognostics::TrainingOptions options;
  options.k = k;
  options.model.kernel.sigma = sigma;
  options.model.alpha = alpha;
  options.model.eps_u = eps_u;
  return options;
}

prognostics::ForecastConfig RunConfig::forecast() const {
  return {j_select, horizon_cap, aggregate};
}

std::string to_string(prognostics::Aggregate aggregate) {
  return aggregate == prognostics::Aggregate::best ? "best" : "median";
}

prognostics::Aggregate parse_aggregate(const std::string& text) {
  if (text == "median") {
    return prognostics::Aggregate::median;
  }
  if (text == "best") {
    return prognostics::Aggregate::best;
  }
  throw std::invalid_argument("aggregate must be 'median' or 'best', got '" + text + "'");
}

void apply_thread_limit(int threads) {
#ifdef _OPENMP
  if (threads > 0) {
    omp_set_num_threads(threads);
  }
#else
  (void)threads;
#endif
}

}  // namespace qkprog::cli
