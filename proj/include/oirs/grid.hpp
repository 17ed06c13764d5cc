#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "oirs/error.hpp"

namespace oirs {

/// Uniform sample positions first + i·spacing, i ∈ [0, count).
struct GridAxis {
  std::size_t count = 0;
  double spacing = 0.0;
  double first = 0.0;

  double at(std::size_t i) const { return first + static_cast<double>(i) * spacing; }
  double last() const { return at(count - 1); }
  /// Edges of the cells the samples stand for.
  double lower_edge() const { return first - 0.5 * spacing; }
  double upper_edge() const { return last() + 0.5 * spacing; }
  double extent() const { return static_cast<double>(count) * spacing; }

  /// Even count, samples at cell centers symmetric about 0: ±spacing/2, ±3·spacing/2, …
  static GridAxis centered_cells(std::size_t count, double spacing);
  /// Even count, sample count/2 sits on 0 (the discrete-Fourier convention).
  static GridAxis centered_fft(std::size_t count, double spacing);

  bool operator==(const GridAxis&) const = default;
};

/// Row-major samples on a rectangular grid (rows along y, columns along x).
template <class T>
class Grid {
 public:
  Grid() = default;
  Grid(GridAxis x, GridAxis y, T fill = T{}) : x_(x), y_(y), data_(x.count * y.count, fill) {
    if (x.count == 0 || y.count == 0 || !(x.spacing > 0.0) || !(y.spacing > 0.0)) {
      throw Error(ErrorKind::InvalidArgument, "grid needs positive sample counts and spacing");
    }
  }

  const GridAxis& x_axis() const noexcept { return x_; }
  const GridAxis& y_axis() const noexcept { return y_; }
  std::size_t nx() const noexcept { return x_.count; }
  std::size_t ny() const noexcept { return y_.count; }
  std::size_t size() const noexcept { return data_.size(); }
  double cell_area() const noexcept { return x_.spacing * y_.spacing; }

  T& operator()(std::size_t ix, std::size_t iy) { return data_[iy * x_.count + ix]; }
  const T& operator()(std::size_t ix, std::size_t iy) const { return data_[iy * x_.count + ix]; }

  std::span<T> row(std::size_t iy) { return {data_.data() + iy * x_.count, x_.count}; }
  std::span<const T> row(std::size_t iy) const { return {data_.data() + iy * x_.count, x_.count}; }

  std::vector<T>& values() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }
  T* data() noexcept { return data_.data(); }
  const T* data() const noexcept { return data_.data(); }

  bool same_layout(const Grid& o) const { return x_ == o.x_ && y_ == o.y_; }

 private:
  GridAxis x_;
  GridAxis y_;
  std::vector<T> data_;
};

using FieldGrid = Grid<std::complex<double>>;
/// Non-negative power density in W/m² on a receiver or focal plane.
using PowerDensityMap = Grid<double>;

/// Σ|z|²·cell area.
double field_energy(const FieldGrid& field);
/// Σ values · cell area.
double integrate(const PowerDensityMap& map);
/// |z|² per sample, same layout.
PowerDensityMap intensity(const FieldGrid& field);

}  // namespace oirs
