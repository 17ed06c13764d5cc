#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "oirs/grid.hpp"

namespace oirs::csv {

/// Shortest round-trip form at up to 17 significant digits, locale-independent.
std::string format(double v);

/// Writes each line prefixed with "# ".
void write_comments(std::ostream& os, const std::vector<std::string>& lines);

/// `x_m,y_m,w_per_m2` rows ordered by y, then x.
void write_map(std::ostream& os, const PowerDensityMap& map);

}  // namespace oirs::csv
