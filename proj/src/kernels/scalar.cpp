#include "hfabm/kernels.hpp"

namespace hfabm::kernels::scalar {

double sum(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s;
}

CentralSums central_sums(std::span<const double> x, double center) {
  CentralSums out;
  for (double v : x) {
    const double d = v - center;
    const double d2 = d * d;
    out.m2 += d2;
    out.m3 += d2 * d;
    out.m4 += d2 * d2;
  }
  return out;
}

double lagged_cross(std::span<const double> x, std::size_t lag, double center) {
  double s = 0.0;
  for (std::size_t t = lag; t < x.size(); ++t) s += (x[t] - center) * (x[t - lag] - center);
  return s;
}

double centered_dot(std::span<const double> x, std::span<const double> y, double cx, double cy) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - cx) * (y[i] - cy);
  return s;
}

}  // namespace hfabm::kernels::scalar
