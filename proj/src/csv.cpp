#include "oirs/csv.hpp"

#include <charconv>
#include <ostream>

namespace oirs::csv {

std::string format(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

void write_comments(std::ostream& os, const std::vector<std::string>& lines) {
  for (const auto& l : lines) os << "# " << l << '\n';
}

void write_map(std::ostream& os, const PowerDensityMap& map) {
  os << "x_m,y_m,w_per_m2\n";
  for (std::size_t iy = 0; iy < map.ny(); ++iy) {
    const std::string y = format(map.y_axis().at(iy));
    for (std::size_t ix = 0; ix < map.nx(); ++ix) {
      os << format(map.x_axis().at(ix)) << ',' << y << ',' << format(map(ix, iy)) << '\n';
    }
  }
}

}  // namespace oirs::csv
