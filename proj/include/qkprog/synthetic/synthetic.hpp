#ifndef QKPROG_SYNTHETIC_SYNTHETIC_HPP
#define QKPROG_SYNTHETIC_SYNTHETIC_HPP

#include <cstdint>
#include <vector>

#include "qkprog/cmapss/cmapss.hpp"

namespace qkprog::synthetic {

/// Run-to-failure fleet in the C-MAPSS single-condition layout.
///
/// Each engine follows an exponential wear curve from a random initial wear
/// level to failure at a random life; all 21 sensors are written, with the
/// trending ones drifting in the direction and roughly the magnitude seen on
/// FD001 and the rest held constant or pure noise. Only for tests, demos and
/// benchmarks; it is not a model of the real data.
struct FleetOptions {
  int train_units = 100;
  int test_units = 100;
  int min_life = 128;
  int max_life = 362;
  int min_observed = 31;
  int min_rul = 7;
  int max_rul = 145;
  double noise_scale = 1.0;
  std::uint64_t seed = 2008;
};

struct Dataset {
  std::vector<cmapss::CmapssRecord> train;
  std::vector<cmapss::CmapssRecord> test;
  std::vector<int> rul;  // one per test unit, ascending unit id
};

Dataset make_dataset(const FleetOptions& options);

}  // namespace qkprog::synthetic

#endif  // QKPROG_SYNTHETIC_SYNTHETIC_HPP
