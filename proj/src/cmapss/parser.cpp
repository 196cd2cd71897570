#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <string_view>

#include "qkprog/cmapss/cmapss.hpp"

namespace qkprog::cmapss {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) {
      ++pos;
    }
    const std::size_t start = pos;
    while (pos < line.size() && line[pos] != ' ' && line[pos] != '\t' && line[pos] != '\r') {
      ++pos;
    }
    if (pos > start) {
      fields.push_back(line.substr(start, pos - start));
    }
  }
  return fields;
}

// from_chars rejects a leading '+', the format allows it.
std::string_view strip_plus(std::string_view token) {
  if (token.size() > 1 && token.front() == '+') {
    token.remove_prefix(1);
  }
  return token;
}

double to_double(std::string_view token, std::size_t line) {
  token = strip_plus(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, "non-numeric field '" + std::string(token) + "'");
  }
  return value;
}

long to_integer(std::string_view token, std::size_t line, const char* what) {
  token = strip_plus(token);
  long value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw ParseError(line, std::string(what) + " '" + std::string(token) + "' is not an integer");
  }
  return value;
}

void write_number(std::ostream& out, double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  out.write(buffer, ptr - buffer);
}

}  // namespace

std::vector<CmapssRecord> parse_cmapss(std::istream& in) {
  std::vector<CmapssRecord> records;
  std::map<int, int> last_cycle;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;
    }
    if (fields.size() != kColumns) {
      throw ParseError(line_no, "expected " + std::to_string(kColumns) + " fields, found " +
                                    std::to_string(fields.size()));
    }
    CmapssRecord rec;
    const long unit = to_integer(fields[0], line_no, "unit id");
    const long cycle = to_integer(fields[1], line_no, "cycle");
    if (unit < 1 || cycle < 1 || unit > std::numeric_limits<int>::max() ||
        cycle > std::numeric_limits<int>::max()) {
      throw ParseError(line_no, "unit id and cycle must be positive");
    }
    rec.unit_id = static_cast<int>(unit);
    rec.cycle = static_cast<int>(cycle);
    for (std::size_t i = 0; i < kOpSettings; ++i) {
      rec.op_settings[i] = to_double(fields[2 + i], line_no);
    }
    for (std::size_t i = 0; i < kSensors; ++i) {
      rec.sensors[i] = to_double(fields[2 + kOpSettings + i], line_no);
    }
    auto [it, inserted] = last_cycle.try_emplace(rec.unit_id, 0);
    if (rec.cycle != it->second + 1) {
      throw ParseError(line_no, "unit " + std::to_string(rec.unit_id) + ": cycle " + std::to_string(rec.cycle) +
                                    " does not follow cycle " + std::to_string(it->second));
    }
    it->second = rec.cycle;
    records.push_back(rec);
  }
  // Cycles are already increasing within a unit, so a stable sort by unit suffices.
  std::stable_sort(records.begin(), records.end(),
                   [](const CmapssRecord& a, const CmapssRecord& b) { return a.unit_id < b.unit_id; });
  return records;
}

std::vector<CmapssRecord> parse_cmapss_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  try {
    return parse_cmapss(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

void write_cmapss(std::ostream& out, const std::vector<CmapssRecord>& records) {
  for (const auto& rec : records) {
    out << rec.unit_id << ' ' << rec.cycle;
    for (double v : rec.op_settings) {
      out << ' ';
      write_number(out, v);
    }
    for (double v : rec.sensors) {
      out << ' ';
      write_number(out, v);
    }
    out << '\n';
  }
}

std::vector<int> parse_rul(std::istream& in) {
  std::vector<int> values;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto fields = split_fields(line);
    if (fields.empty()) {
      continue;
    }
    if (fields.size() != 1) {
      throw ParseError(line_no, "expected one integer per line");
    }
    const long value = to_integer(fields[0], line_no, "RUL");
    if (value < 0 || value > std::numeric_limits<int>::max()) {
      throw ParseError(line_no, "RUL must be a non-negative integer");
    }
    values.push_back(static_cast<int>(value));
  }
  return values;
}

std::vector<int> parse_rul_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  try {
    return parse_rul(in);
  } catch (const ParseError& e) {
    throw ParseError(e.line(), e.detail(), path.string());
  }
}

}  // namespace qkprog::cmapss
