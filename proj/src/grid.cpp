#include "oirs/grid.hpp"

#include "oirs/simd/kernels.hpp"

namespace oirs {

GridAxis GridAxis::centered_cells(std::size_t count, double spacing) {
  if (count == 0 || count % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "centered grid axis needs an even sample count");
  }
  return {count, spacing, -(static_cast<double>(count) - 1.0) * 0.5 * spacing};
}

GridAxis GridAxis::centered_fft(std::size_t count, double spacing) {
  if (count == 0 || count % 2 != 0) {
    throw Error(ErrorKind::InvalidArgument, "centered grid axis needs an even sample count");
  }
  return {count, spacing, -static_cast<double>(count / 2) * spacing};
}

double field_energy(const FieldGrid& field) {
  return simd::kernels().energy(field.data(), field.size()) * field.cell_area();
}

double integrate(const PowerDensityMap& map) {
  double sum = 0.0;
  for (double v : map.values()) sum += v;
  return sum * map.cell_area();
}

PowerDensityMap intensity(const FieldGrid& field) {
  PowerDensityMap out(field.x_axis(), field.y_axis());
  for (std::size_t i = 0; i < field.size(); ++i) out.values()[i] = std::norm(field.values()[i]);
  return out;
}

}  // namespace oirs
