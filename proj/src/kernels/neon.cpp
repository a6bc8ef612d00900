#include "hfabm/kernels.hpp"

#if defined(__aarch64__) && defined(__ARM_NEON)
#include <arm_neon.h>

namespace hfabm::kernels::neon {

double sum(std::span<const double> x) {
  const double* p = x.data();
  const std::size_t n = x.size();
  float64x2_t a0 = vdupq_n_f64(0.0);
  float64x2_t a1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    a0 = vaddq_f64(a0, vld1q_f64(p + i));
    a1 = vaddq_f64(a1, vld1q_f64(p + i + 2));
  }
  double s = vaddvq_f64(vaddq_f64(a0, a1));
  for (; i < n; ++i) s += p[i];
  return s;
}

CentralSums central_sums(std::span<const double> x, double center) {
  const double* p = x.data();
  const std::size_t n = x.size();
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t s2 = vdupq_n_f64(0.0);
  float64x2_t s3 = vdupq_n_f64(0.0);
  float64x2_t s4 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t d = vsubq_f64(vld1q_f64(p + i), c);
    const float64x2_t d2 = vmulq_f64(d, d);
    s2 = vaddq_f64(s2, d2);
    s3 = vfmaq_f64(s3, d2, d);
    s4 = vfmaq_f64(s4, d2, d2);
  }
  CentralSums out{vaddvq_f64(s2), vaddvq_f64(s3), vaddvq_f64(s4)};
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
  const float64x2_t c = vdupq_n_f64(center);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vsubq_f64(vld1q_f64(lead + i), c), vsubq_f64(vld1q_f64(base + i), c));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += (lead[i] - center) * (base[i] - center);
  return s;
}

double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  const std::size_t n = x.size();
  const float64x2_t vx = vdupq_n_f64(cx);
  const float64x2_t vy = vdupq_n_f64(cy);
  float64x2_t acc = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2)
    acc = vfmaq_f64(acc, vsubq_f64(vld1q_f64(x.data() + i), vx), vsubq_f64(vld1q_f64(y.data() + i), vy));
  double s = vaddvq_f64(acc);
  for (; i < n; ++i) s += (x[i] - cx) * (y[i] - cy);
  return s;
}

}  // namespace hfabm::kernels::neon

#else

namespace hfabm::kernels::neon {

double sum(std::span<const double> x) { return scalar::sum(x); }
CentralSums central_sums(std::span<const double> x, double center) { return scalar::central_sums(x, center); }
double lagged_cross(std::span<const double> x, std::size_t lag, double center) {
  return scalar::lagged_cross(x, lag, center);
}
double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  return scalar::centered_dot(x, y, cx, cy);
}

}  // namespace hfabm::kernels::neon

#endif
