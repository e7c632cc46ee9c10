#pragma once

#include <cmath>
#include <complex>

namespace torusdet {

/// Compensated (Neumaier) summation of complex terms, componentwise.
class NeumaierSum {
 public:
  void add(std::complex<double> z) {
    add_part(re_, re_c_, z.real());
    add_part(im_, im_c_, z.imag());
  }
  std::complex<double> value() const { return {re_ + re_c_, im_ + im_c_}; }

 private:
  static void add_part(double& s, double& c, double x) {
    const double t = s + x;
    if (std::abs(s) >= std::abs(x)) {
      c += (s - t) + x;
    } else {
      c += (x - t) + s;
    }
    s = t;
  }
  double re_ = 0.0, re_c_ = 0.0;
  double im_ = 0.0, im_c_ = 0.0;
};

/// Sum over k in Z^n with |k|_inf > N of |k|^-p, bounded by counting the
/// (2r+1)^n - (2r-1)^n <= 2n 3^(n-1) r^(n-1) points of each shell and comparing
/// with an integral. Requires p > n; infinite for N = 0.
inline double box_tail_power_bound(int dim, double p, int radius) {
  if (radius <= 0) return HUGE_VAL;
  const double surface = 2.0 * dim * std::pow(3.0, dim - 1);
  return surface * std::pow(static_cast<double>(radius), dim - p) / (p - dim);
}

}  // namespace torusdet
