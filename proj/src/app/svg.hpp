#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "app/tables.hpp"

namespace bettitest::app {

/// Line chart of power against n, one line per method.
void write_power_svg(std::ostream& out, const std::vector<PowerRow>& rows, const std::string& title);

}  // namespace bettitest::app
