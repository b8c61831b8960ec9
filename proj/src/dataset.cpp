#include "fracdyn/dataset.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace fracdyn {

namespace {

template <class Indexed>
Dataset build(const std::vector<State>& states, SeriesFormat format, const char* index_name, Indexed index) {
  Dataset out;
  if (format == SeriesFormat::phase) {
    out.header = {"x", "y"};
  } else {
    out.header = {index_name, "x", "y"};
  }
  out.rows.reserve(states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    if (format == SeriesFormat::phase) {
      out.rows.push_back({states[i].x, states[i].y});
    } else {
      out.rows.push_back({index(i), states[i].x, states[i].y});
    }
  }
  return out;
}

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field) {
  if (field == "nan") return std::nan("");
  if (field == "inf") return HUGE_VAL;
  if (field == "-inf") return -HUGE_VAL;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("malformed number in CSV: '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

Dataset export_series(const Trajectory& traj, SeriesFormat format) {
  return build(traj.states, format, "t", [&](std::size_t i) { return traj.times[i]; });
}

Dataset export_series(const DiscreteOrbit& orbit, SeriesFormat format) {
  return build(orbit.states, format, "n", [](std::size_t i) { return static_cast<double>(i); });
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 15);
  return std::string(buf, res.ptr);
}

void write_csv(std::ostream& os, const Dataset& data) {
  for (std::size_t i = 0; i < data.header.size(); ++i) {
    if (i) os << ',';
    os << data.header[i];
  }
  os << '\n';
  for (const auto& row : data.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << format_number(row[i]);
    }
    os << '\n';
  }
}

std::string to_csv(const Dataset& data) {
  std::ostringstream os;
  write_csv(os, data);
  return os.str();
}

Dataset parse_csv(std::string_view text) {
  Dataset out;
  bool have_header = false;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (!have_header) {
      for (auto f : fields) out.header.emplace_back(f);
      have_header = true;
      continue;
    }
    if (fields.size() != out.header.size()) {
      throw std::invalid_argument("CSV line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                                  " fields, header has " + std::to_string(out.header.size()));
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (auto f : fields) row.push_back(parse_number(f));
    out.rows.push_back(std::move(row));
  }
  return out;
}

}  // namespace fracdyn
