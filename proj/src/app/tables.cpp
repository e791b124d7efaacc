#include "app/tables.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <sstream>

#include "bettitest/error.hpp"

namespace bettitest::app {

namespace {

constexpr const char* kPowerHeader = "scenario,method,regime,n,r,alpha,power,seed";
constexpr const char* kDisconnectionHeader = "n,reps,disconnected,fraction";

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t line) {
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(line, "bad number '" + s + "'");
  return value;
}

/// Calls row(fields, line_number) for each data line after checking the header.
template <typename F>
void read_table(std::istream& in, const std::string& header, std::size_t columns, F&& row) {
  std::string line;
  std::size_t line_no = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (!seen_header) {
      if (line != header) throw ParseError(line_no, "expected header '" + header + "'");
      seen_header = true;
      continue;
    }
    const auto fields = split(line);
    if (fields.size() != columns)
      throw ParseError(line_no, "expected " + std::to_string(columns) + " fields, got " +
                                    std::to_string(fields.size()));
    row(fields, line_no);
  }
  if (!seen_header) throw ParseError(line_no, "missing header");
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows) {
  out << kPowerHeader << '\n';
  for (const auto& r : rows)
    out << r.scenario << ',' << r.method << ',' << to_string(r.regime) << ',' << r.n << ',' << r.r << ','
        << format_double(r.alpha) << ',' << format_double(r.power) << ',' << r.seed << '\n';
}

std::vector<PowerRow> read_power_csv(std::istream& in) {
  std::vector<PowerRow> rows;
  read_table(in, kPowerHeader, 8, [&](const std::vector<std::string>& f, std::size_t line) {
    PowerRow r;
    r.scenario = f[0];
    r.method = f[1];
    try {
      r.regime = parse_regime(f[2]);
    } catch (const DomainError& e) {
      throw ParseError(line, e.what());
    }
    r.n = parse_number<std::size_t>(f[3], line);
    r.r = parse_number<std::size_t>(f[4], line);
    r.alpha = parse_number<double>(f[5], line);
    r.power = parse_number<double>(f[6], line);
    r.seed = parse_number<std::uint64_t>(f[7], line);
    rows.push_back(std::move(r));
  });
  return rows;
}

void write_disconnection_csv(std::ostream& out, const std::vector<DisconnectionRow>& rows) {
  out << kDisconnectionHeader << '\n';
  for (const auto& r : rows)
    out << r.n << ',' << r.reps << ',' << r.disconnected << ',' << format_double(r.fraction) << '\n';
}

std::vector<DisconnectionRow> read_disconnection_csv(std::istream& in) {
  std::vector<DisconnectionRow> rows;
  read_table(in, kDisconnectionHeader, 4, [&](const std::vector<std::string>& f, std::size_t line) {
    DisconnectionRow r;
    r.n = parse_number<std::size_t>(f[0], line);
    r.reps = parse_number<std::size_t>(f[1], line);
    r.disconnected = parse_number<std::size_t>(f[2], line);
    r.fraction = parse_number<double>(f[3], line);
    rows.push_back(r);
  });
  return rows;
}

}  // namespace bettitest::app
