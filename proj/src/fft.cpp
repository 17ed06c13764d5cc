#include "oirs/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>

#include "oirs/error.hpp"

namespace oirs {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

// Plans are made once on a private aligned buffer; execution copies through
// it so results never depend on the caller's alignment.
struct Fft2d::Plans {
  fftw_complex* buffer = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
  std::size_t count = 0;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
    if (buffer) fftw_free(buffer);
  }

  void run(fftw_plan plan, std::complex<double>* data) const {
    auto* buf = reinterpret_cast<std::complex<double>*>(buffer);
    std::copy(data, data + count, buf);
    fftw_execute(plan);
    std::copy(buf, buf + count, data);
  }
};

Fft2d::Fft2d(std::size_t nx, std::size_t ny) : nx_(nx), ny_(ny), plans_(std::make_unique<Plans>()) {
  if (nx == 0 || ny == 0) throw Error(ErrorKind::InvalidArgument, "FFT dimensions must be positive");
  plans_->count = nx * ny;
  std::lock_guard lock(planner_mutex());
  plans_->buffer = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * plans_->count));
  const int n0 = static_cast<int>(ny), n1 = static_cast<int>(nx);
  plans_->forward = fftw_plan_dft_2d(n0, n1, plans_->buffer, plans_->buffer, FFTW_FORWARD, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_2d(n0, n1, plans_->buffer, plans_->buffer, FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!plans_->buffer || !plans_->forward || !plans_->inverse) {
    throw Error(ErrorKind::InvalidArgument, "FFTW planning failed");
  }
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

void Fft2d::forward(std::complex<double>* data) const { plans_->run(plans_->forward, data); }
void Fft2d::inverse(std::complex<double>* data) const { plans_->run(plans_->inverse, data); }

}  // namespace oirs
