#pragma once

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <complex>
#include <string>

namespace heatrecon {

namespace mpx = boost::multiprecision;

using Extended50 =
    mpx::number<mpx::mpfr_float_backend<50, mpx::allocate_stack>, mpx::et_off>;
using Extended100 =
    mpx::number<mpx::mpfr_float_backend<100, mpx::allocate_stack>, mpx::et_off>;

enum class Arithmetic { automatic, standard, extended50, extended100 };

template <class R>
inline R pi_v() {
  return boost::math::constants::pi<R>();
}

template <class R>
constexpr int decimal_digits() {
  return std::numeric_limits<R>::digits10;
}

// Smallest tier carrying `required` significant digits; saturates at the top tier.
Arithmetic choose_arithmetic(double required_digits);
int arithmetic_digits(Arithmetic a);
std::string to_string(Arithmetic a);
Arithmetic parse_arithmetic(const std::string& s);

// e^{i theta} without going through std::complex transcendental overloads.
template <class R>
inline std::complex<R> cis(const R& theta) {
  using std::cos;
  using std::sin;
  return {cos(theta), sin(theta)};
}

}  // namespace heatrecon
