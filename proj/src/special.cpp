#include "heatrecon/special.hpp"

#include "heatrecon/precision.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace heatrecon {

double bessel_j0(double s) { return std::cyl_bessel_j(0.0, std::abs(s)); }

double bessel_j1(double s) {
  const double v = std::cyl_bessel_j(1.0, std::abs(s));
  return s < 0.0 ? -v : v;
}

namespace {

// Pole-corrected trapezoid rule for (i/pi) int e^{-t^2}/(z-t) dt on two
// interleaved grids; error ~ e^{-pi^2/h^2}.
template <class R>
struct TrapezoidTable {
  R h;
  int K;
  std::vector<R> g0;  // e^{-t^2}, t = k h, k = -K..K
  std::vector<R> g1;  // e^{-t^2}, t = (k + 1/2) h, k = -K..K-1

  TrapezoidTable() {
    using std::ceil;
    using std::exp;
    using std::sqrt;
    const double d = decimal_digits<R>() + 3.0;
    const double expo = d * std::log(10.0) + 3.0;
    h = pi_v<R>() / sqrt(R(expo));
    K = static_cast<int>(std::ceil(std::sqrt(expo + 10.0) / static_cast<double>(h))) + 2;
    for (int k = -K; k <= K; ++k) {
      const R t = h * k;
      g0.push_back(exp(-t * t));
    }
    for (int k = -K; k < K; ++k) {
      const R t = h * (R(k) + R(0.5));
      g1.push_back(exp(-t * t));
    }
  }
};

template <class R>
std::complex<R> faddeeva_trapezoid(const std::complex<R>& z) {
  using std::exp;
  using std::floor;
  static const TrapezoidTable<R> tab;
  const R x = z.real();
  const R y = z.imag();
  const R q = x / tab.h;
  const R frac = q - floor(q);
  const bool shifted = !(frac > R(0.25) && frac < R(0.75));
  std::complex<R> sum(0, 0);
  if (shifted) {
    for (int k = -tab.K; k < tab.K; ++k) {
      const R t = tab.h * (R(k) + R(0.5));
      sum += tab.g1[k + tab.K] / (z - t);
    }
  } else {
    for (int k = -tab.K; k <= tab.K; ++k) {
      const R t = tab.h * k;
      sum += tab.g0[k + tab.K] / (z - t);
    }
  }
  const R pi = pi_v<R>();
  std::complex<R> result = std::complex<R>(0, tab.h / pi) * sum;
  // 2 e^{-z^2} / (1 -+ e^{-2 pi i z/h}), rewritten to avoid overflow for large Im z.
  if (y >= pi / tab.h) return result;
  const R two_pi_over_h = 2 * pi / tab.h;
  const std::complex<R> e_inv = exp(-two_pi_over_h * y) * cis(two_pi_over_h * x);
  const std::complex<R> num = R(2) * exp(y * y - x * x) * cis(R(-2) * x * y) * e_inv;
  const std::complex<R> den = shifted ? e_inv + R(1) : e_inv - R(1);
  result += num / den;
  return result;
}

// Laplace continued fraction w = (i/sqrt(pi)) / (z - (1/2)/(z - 1/(z - (3/2)/(z - ...)))),
// evaluated by the modified Lentz algorithm.
template <class R>
std::complex<R> faddeeva_continued_fraction(const std::complex<R>& z) {
  using std::abs;
  using std::sqrt;
  const R eps = std::numeric_limits<R>::epsilon();
  const R tiny = std::numeric_limits<R>::min() * 1e10;
  std::complex<R> f = z, c = z, d(0, 0);
  for (int k = 1; k < 20000; ++k) {
    const R ak = -R(k) / 2;
    d = z + ak * d;
    if (abs(d) < tiny) d = tiny;
    c = z + ak / c;
    if (abs(c) < tiny) c = tiny;
    d = R(1) / d;
    const std::complex<R> delta = c * d;
    f *= delta;
    if (abs(delta - R(1)) < eps) break;
  }
  return std::complex<R>(0, 1 / sqrt(pi_v<R>())) / f;
}

}  // namespace

template <class R>
std::complex<R> faddeeva_w(const std::complex<R>& z) {
  using std::abs;
  if (z.imag() < 0) throw std::domain_error("faddeeva_w requires Im z >= 0");
  if (abs(z) < R(16)) return faddeeva_trapezoid(z);
  return faddeeva_continued_fraction(z);
}

template std::complex<double> faddeeva_w<double>(const std::complex<double>&);
template std::complex<Extended50> faddeeva_w<Extended50>(const std::complex<Extended50>&);
template std::complex<Extended100> faddeeva_w<Extended100>(const std::complex<Extended100>&);

}  // namespace heatrecon
