#pragma once

// Reduction kernels behind the return statistics (moments, autocovariances,
// correlations). Each kernel has a scalar reference implementation and, where
// the CPU supports it, an AVX2+FMA (x86-64) or NEON (aarch64) variant picked
// once at runtime. Vector variants reassociate the sums, so they agree with the
// scalar path to rounding, not bit for bit.

#include <cstddef>
#include <span>
#include <string_view>

namespace hfabm::kernels {

enum class Isa { Scalar, Avx2, Neon };

std::string_view isa_name(Isa isa) noexcept;

/// Best instruction set available on this machine.
Isa detected_isa() noexcept;
/// Instruction set currently used by the dispatching entry points.
Isa active_isa() noexcept;
/// Overrides dispatch; falls back to Scalar if `isa` is not supported here.
/// Returns the instruction set actually selected.
Isa select_isa(Isa isa) noexcept;
bool isa_supported(Isa isa) noexcept;

struct CentralSums {
  double m2 = 0.0;  // sum of (x - c)^2
  double m3 = 0.0;  // sum of (x - c)^3
  double m4 = 0.0;  // sum of (x - c)^4
};

double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double center);
/// sum over t >= lag of (x[t] - c) * (x[t - lag] - c)
double lagged_cross(std::span<const double> x, std::size_t lag, double center);
/// sum of (x[i] - cx) * (y[i] - cy); x and y must have equal length.
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy);

// Explicit variants, used by the equivalence tests. Calling a variant the CPU
// does not support is undefined.
namespace scalar {
double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double center);
double lagged_cross(std::span<const double> x, std::size_t lag, double center);
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy);
}  // namespace scalar

namespace avx2 {
double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double center);
double lagged_cross(std::span<const double> x, std::size_t lag, double center);
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy);
}  // namespace avx2

namespace neon {
double sum(std::span<const double> x);
CentralSums central_sums(std::span<const double> x, double center);
double lagged_cross(std::span<const double> x, std::size_t lag, double center);
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy);
}  // namespace neon

}  // namespace hfabm::kernels
