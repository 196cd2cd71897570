#include "qkprog/prognostics/results_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace qkprog::prognostics {

namespace {

constexpr std::string_view kHeader = "engine_id,t_c,rul_estimated,rul_true,censored,selected_ids";

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) {
      return parts;
    }
    start = pos + 1;
  }
}

int parse_int(std::string_view token, std::size_t line, const char* column) {
  int value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw std::runtime_error("results line " + std::to_string(line) + ": column " + column + " value '" +
                             std::string(token) + "' is not an integer");
  }
  return value;
}

}  // namespace

ResultRow to_result_row(const RulEstimate& estimate, std::optional<int> rul_true) {
  return {estimate.engine_id, estimate.t_c, estimate.rul, rul_true, estimate.censored, estimate.selected_ids};
}

void write_results(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kHeader << '\n';
  for (const auto& row : rows) {
    out << row.engine_id << ',' << row.t_c << ',' << row.rul_estimated << ',';
    if (row.rul_true) {
      out << *row.rul_true;
    }
    out << ',' << (row.censored ? "true" : "false") << ',';
    for (std::size_t i = 0; i < row.selected_ids.size(); ++i) {
      out << (i ? ";" : "") << row.selected_ids[i];
    }
    out << '\n';
  }
}

std::vector<ResultRow> read_results(std::istream& in) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) {
    throw std::runtime_error("results: empty file (missing header)");
  }
  if (!line.empty() && line.back() == '\r') {
    line.pop_back();
  }
  if (line != kHeader) {
    throw std::runtime_error("results: unexpected header '" + line + "'");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    const auto cols = split(line, ',');
    if (cols.size() != 6) {
      throw std::runtime_error("results line " + std::to_string(line_no) + ": expected 6 columns, found " +
                               std::to_string(cols.size()));
    }
    ResultRow row;
    row.engine_id = parse_int(cols[0], line_no, "engine_id");
    row.t_c = parse_int(cols[1], line_no, "t_c");
    row.rul_estimated = parse_int(cols[2], line_no, "rul_estimated");
    if (!cols[3].empty()) {
      row.rul_true = parse_int(cols[3], line_no, "rul_true");
    }
    if (cols[4] == "true") {
      row.censored = true;
    } else if (cols[4] != "false") {
      throw std::runtime_error("results line " + std::to_string(line_no) + ": censored must be true or false");
    }
    if (!cols[5].empty()) {
      for (auto id : split(cols[5], ';')) {
        row.selected_ids.push_back(parse_int(id, line_no, "selected_ids"));
      }
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace qkprog::prognostics
