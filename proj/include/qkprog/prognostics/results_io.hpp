#ifndef QKPROG_PROGNOSTICS_RESULTS_IO_HPP
#define QKPROG_PROGNOSTICS_RESULTS_IO_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "qkprog/prognostics/prognostics.hpp"

namespace qkprog::prognostics {

/// One line of the results CSV:
///   engine_id,t_c,rul_estimated,rul_true,censored,selected_ids
/// rul_true is empty when unknown, censored is "true"/"false" and
/// selected_ids is a ';'-joined list in rank order.
struct ResultRow {
  int engine_id = 0;
  int t_c = 0;
  int rul_estimated = 0;
  std::optional<int> rul_true;
  bool censored = false;
  std::vector<int> selected_ids;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

ResultRow to_result_row(const RulEstimate& estimate, std::optional<int> rul_true = std::nullopt);

void write_results(std::ostream& out, const std::vector<ResultRow>& rows);

/// Throws std::runtime_error naming the line on malformed input.
std::vector<ResultRow> read_results(std::istream& in);

}  // namespace qkprog::prognostics

#endif  // QKPROG_PROGNOSTICS_RESULTS_IO_HPP
