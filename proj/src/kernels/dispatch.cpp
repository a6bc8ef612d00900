#include "hfabm/kernels.hpp"

#include <atomic>

namespace hfabm::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if (defined(__x86_64__) || defined(__i386__)) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

bool cpu_has_neon() noexcept {
#if defined(__aarch64__) && defined(__ARM_NEON)
  return true;
#else
  return false;
#endif
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{detected_isa()};
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::Avx2: return "avx2";
    case Isa::Neon: return "neon";
    case Isa::Scalar: break;
  }
  return "scalar";
}

bool isa_supported(Isa isa) noexcept {
  switch (isa) {
    case Isa::Avx2: return cpu_has_avx2();
    case Isa::Neon: return cpu_has_neon();
    case Isa::Scalar: break;
  }
  return true;
}

Isa detected_isa() noexcept {
  if (cpu_has_avx2()) return Isa::Avx2;
  if (cpu_has_neon()) return Isa::Neon;
  return Isa::Scalar;
}

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

Isa select_isa(Isa isa) noexcept {
  if (!isa_supported(isa)) isa = Isa::Scalar;
  current().store(isa, std::memory_order_relaxed);
  return isa;
}

double sum(std::span<const double> x) {
  switch (active_isa()) {
    case Isa::Avx2: return avx2::sum(x);
    case Isa::Neon: return neon::sum(x);
    case Isa::Scalar: break;
  }
  return scalar::sum(x);
}

CentralSums central_sums(std::span<const double> x, double center) {
  switch (active_isa()) {
    case Isa::Avx2: return avx2::central_sums(x, center);
    case Isa::Neon: return neon::central_sums(x, center);
    case Isa::Scalar: break;
  }
  return scalar::central_sums(x, center);
}

double lagged_cross(std::span<const double> x, std::size_t lag, double center) {
  switch (active_isa()) {
    case Isa::Avx2: return avx2::lagged_cross(x, lag, center);
    case Isa::Neon: return neon::lagged_cross(x, lag, center);
    case Isa::Scalar: break;
  }
  return scalar::lagged_cross(x, lag, center);
}

double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  switch (active_isa()) {
    case Isa::Avx2: return avx2::centered_dot(x, y, cx, cy);
    case Isa::Neon: return neon::centered_dot(x, y, cx, cy);
    case Isa::Scalar: break;
  }
  return scalar::centered_dot(x, y, cx, cy);
}

}  // namespace hfabm::kernels
