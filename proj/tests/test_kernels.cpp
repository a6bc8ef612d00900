#include "hfabm/kernels.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace hfabm;

namespace {

std::vector<double> sample(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d(0.001, 0.02);
  std::vector<double> x(n);
  for (auto& v : x) v = d(rng);
  return x;
}

bool close(double a, double b) { return std::fabs(a - b) <= 1e-12 * (1.0 + std::fabs(a) + std::fabs(b)); }

template <class Sum, class Central, class Lagged, class Dot>
void compare_with_scalar(Sum sum, Central central, Lagged lagged, Dot dot) {
  for (std::size_t n : {0u, 1u, 3u, 4u, 5u, 7u, 8u, 15u, 16u, 17u, 63u, 1001u}) {
    const auto x = sample(n, n + 1);
    const auto y = sample(n, n + 1000);
    CHECK(close(sum(x), kernels::scalar::sum(x)));
    const auto a = central(x, 0.001);
    const auto b = kernels::scalar::central_sums(x, 0.001);
    CHECK(close(a.m2, b.m2));
    CHECK(close(a.m3, b.m3));
    CHECK(close(a.m4, b.m4));
    for (std::size_t lag : {0u, 1u, 2u, 5u, 20u})
      if (lag < n) CHECK(close(lagged(x, lag, 0.001), kernels::scalar::lagged_cross(x, lag, 0.001)));
    CHECK(close(dot(x, y, 0.001, -0.002), kernels::scalar::centered_dot(x, y, 0.001, -0.002)));
  }
}

}  // namespace

TEST_CASE("scalar kernels match direct sums") {
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK(kernels::scalar::sum(x) == 15.0);
  const auto c = kernels::scalar::central_sums(x, 3.0);
  CHECK(c.m2 == 10.0);
  CHECK(c.m3 == 0.0);
  CHECK(c.m4 == 34.0);
  CHECK(kernels::scalar::lagged_cross(x, 1, 3.0) == doctest::Approx(-1 * -2 + 0 * -1 + 1 * 0 + 2 * 1));
  const std::vector<double> y{2, 2, 2, 2, 7};
  CHECK(kernels::scalar::centered_dot(x, y, 3.0, 3.0) == doctest::Approx(-2 * -1 + -1 * -1 + 0 + 1 * -1 + 2 * 4));
}

TEST_CASE("AVX2 kernels agree with scalar") {
  if (!kernels::isa_supported(kernels::Isa::Avx2)) {
    MESSAGE("AVX2 not available on this machine");
    return;
  }
  compare_with_scalar([](auto x) { return kernels::avx2::sum(x); },
                      [](auto x, double c) { return kernels::avx2::central_sums(x, c); },
                      [](auto x, std::size_t l, double c) { return kernels::avx2::lagged_cross(x, l, c); },
                      [](auto x, auto y, double a, double b) { return kernels::avx2::centered_dot(x, y, a, b); });
}

TEST_CASE("NEON kernels agree with scalar") {
  if (!kernels::isa_supported(kernels::Isa::Neon)) {
    MESSAGE("NEON not available on this machine");
    return;
  }
  compare_with_scalar([](auto x) { return kernels::neon::sum(x); },
                      [](auto x, double c) { return kernels::neon::central_sums(x, c); },
                      [](auto x, std::size_t l, double c) { return kernels::neon::lagged_cross(x, l, c); },
                      [](auto x, auto y, double a, double b) { return kernels::neon::centered_dot(x, y, a, b); });
}

TEST_CASE("dispatch can be forced to scalar") {
  const auto before = kernels::active_isa();
  CHECK(kernels::select_isa(kernels::Isa::Scalar) == kernels::Isa::Scalar);
  const auto x = sample(100, 3);
  CHECK(kernels::sum(x) == kernels::scalar::sum(x));
  kernels::select_isa(before);
  CHECK(kernels::active_isa() == before);
  CHECK(kernels::isa_supported(kernels::Isa::Scalar));
  CHECK_FALSE(kernels::isa_name(kernels::detected_isa()).empty());
}
