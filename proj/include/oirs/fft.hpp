#pragma once

#include <complex>
#include <cstddef>
#include <memory>

namespace oirs {

/// In-place 2-D complex DFT of a row-major ny×nx array (FFTW backend). Both
/// directions are unnormalized: forward uses e^{−2πi·}, inverse e^{+2πi·}.
class Fft2d {
 public:
  Fft2d(std::size_t nx, std::size_t ny);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  std::size_t nx() const noexcept { return nx_; }
  std::size_t ny() const noexcept { return ny_; }

  void forward(std::complex<double>* data) const;
  void inverse(std::complex<double>* data) const;

 private:
  struct Plans;
  std::size_t nx_;
  std::size_t ny_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace oirs
