#pragma once

#include <complex>

namespace heatrecon {

double bessel_j0(double s);
double bessel_j1(double s);

// Faddeeva function w(z) = e^{-z^2} erfc(-iz) for Im z >= 0, accurate to the
// working precision of R.
template <class R>
std::complex<R> faddeeva_w(const std::complex<R>& z);

}  // namespace heatrecon
