#include <atomic>
#include <cstdlib>
#include <string>

#include "oirs/error.hpp"
#include "oirs/simd/kernels.hpp"

namespace oirs::simd {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(OIRS_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa widest() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa initial_choice() {
  if (const char* env = std::getenv("OIRS_SIMD")) {
    const std::string want(env);
    if (want == "scalar") return Isa::scalar;
    if (want == "avx2" && supported(Isa::avx2)) return Isa::avx2;
  }
  return widest();
}

std::atomic<const KernelTable*>& active() {
  static std::atomic<const KernelTable*> current{&table(initial_choice())};
  return current;
}

}  // namespace

std::string_view to_string(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

bool supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

std::vector<Isa> available() {
  std::vector<Isa> out{Isa::scalar};
  if (supported(Isa::avx2)) out.push_back(Isa::avx2);
  return out;
}

const KernelTable& table(Isa isa) {
  if (!supported(isa)) {
    throw Error(ErrorKind::InvalidArgument,
                "SIMD variant '" + std::string(to_string(isa)) + "' is not available");
  }
#if defined(OIRS_BUILD_AVX2)
  if (isa == Isa::avx2) return detail::kAvx2Table;
#endif
  return detail::kScalarTable;
}

const KernelTable& kernels() { return *active().load(std::memory_order_acquire); }

void select(Isa isa) { active().store(&table(isa), std::memory_order_release); }

}  // namespace oirs::simd
