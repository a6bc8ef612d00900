// Built with -mavx2 -mfma on x86-64. Only reached through dispatch after the
// CPU check, or from tests that checked isa_supported() first.

#include "hfabm/kernels.hpp"

#if defined(__AVX2__) && defined(__FMA__)
#include <immintrin.h>

namespace hfabm::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  __m256d a0 = _mm256_setzero_pd();
  __m256d a1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
    a1 = _mm256_add_pd(a1, _mm256_loadu_pd(p + i + 4));
  }
  for (; i + 4 <= n; i += 4) a0 = _mm256_add_pd(a0, _mm256_loadu_pd(p + i));
  double s = hsum(_mm256_add_pd(a0, a1));
  for (; i < n; ++i) s += p[i];
  return s;
}

CentralSums central_sums(std::span<const double> x, double center) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const __m256d c = _mm256_set1_pd(center);
  __m256d s2 = _mm256_setzero_pd();
  __m256d s3 = _mm256_setzero_pd();
  __m256d s4 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(p + i), c);
    const __m256d d2 = _mm256_mul_pd(d, d);
    s2 = _mm256_add_pd(s2, d2);
    s3 = _mm256_fmadd_pd(d2, d, s3);
    s4 = _mm256_fmadd_pd(d2, d2, s4);
  }
  CentralSums out{hsum(s2), hsum(s3), hsum(s4)};
  for (; i < n; ++i) {
    const double d = p[i] - center;
    const double d2 = d * d;
    out.m2 += d2;
    out.m3 += d2 * d;
    out.m4 += d2 * d2;
  }
  return out;
}

double lagged_cross(std::span<const double> x, std::size_t lag, double center) {
  if (lag >= x.size()) return 0.0;
  const double* lead = x.data() + lag;
  const double* base = x.data();
  const std::size_t n = x.size() - lag;
  const __m256d c = _mm256_set1_pd(center);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(lead + i), c);
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(base + i), c);
    acc = _mm256_fmadd_pd(a, b, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (lead[i] - center) * (base[i] - center);
  return s;
}

double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  const std::size_t n = x.size();
  const __m256d vx = _mm256_set1_pd(cx);
  const __m256d vy = _mm256_set1_pd(cy);
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d a = _mm256_sub_pd(_mm256_loadu_pd(x.data() + i), vx);
    const __m256d b = _mm256_sub_pd(_mm256_loadu_pd(y.data() + i), vy);
    acc = _mm256_fmadd_pd(a, b, acc);
  }
  double s = hsum(acc);
  for (; i < n; ++i) s += (x[i] - cx) * (y[i] - cy);
  return s;
}

}  // namespace hfabm::kernels::avx2

#else

namespace hfabm::kernels::avx2 {

double sum(std::span<const double> x) { return scalar::sum(x); }
CentralSums central_sums(std::span<const double> x, double center) { return scalar::central_sums(x, center); }
double lagged_cross(std::span<const double> x, std::size_t lag, double center) {
  return scalar::lagged_cross(x, lag, center);
}
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  return scalar::centered_dot(x, y, cx, cy);
}

}  // namespace hfabm::kernels::avx2

#endif
