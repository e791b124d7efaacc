#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "bettitest/stats.hpp"

namespace bettitest::app {

struct PowerRow {
  std::string scenario;
  std::string method;
  Regime regime = Regime::critical;
  std::size_t n = 0;
  std::size_t r = 0;
  double alpha = 0.0;
  double power = 0.0;
  std::uint64_t seed = 0;

  friend bool operator==(const PowerRow&, const PowerRow&) = default;
};

/// Shortest decimal text that parses back to the same double.
std::string format_double(double x);

/// Header: scenario,method,regime,n,r,alpha,power,seed
void write_power_csv(std::ostream& out, const std::vector<PowerRow>& rows);
/// Throws ParseError with the offending line number.
std::vector<PowerRow> read_power_csv(std::istream& in);

/// Header: n,reps,disconnected,fraction
void write_disconnection_csv(std::ostream& out, const std::vector<DisconnectionRow>& rows);
std::vector<DisconnectionRow> read_disconnection_csv(std::istream& in);

}  // namespace bettitest::app
