#include "heatrecon/line_kernel.hpp"

#include "heatrecon/precision.hpp"
#include "heatrecon/quadrature.hpp"
#include "heatrecon/special.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace heatrecon {

namespace {

// Below this |b|^2 |t| the closed forms lose more than half a digit to
// cancellation; direct quadrature is used instead.
constexpr double kSmallBeta = 1.0;

// Value and eta-derivative of int_{-1}^{1} cos(eta xi) e^{g(xi)} dxi with
// g = -beta (1 - xi^2) (ball) or g = -beta xi^2 (entire part).
template <class R>
void small_beta_quadrature(const R& eta, const R& beta, bool ball, R& value, R& deriv) {
  using std::ceil;
  using std::cos;
  using std::exp;
  using std::sin;
  const double ae = std::abs(static_cast<double>(eta));
  const double kappa = 4.0;
  const int panels = static_cast<int>(std::ceil(ae / kappa)) + 1;
  const int m = gauss_order_for_digits(decimal_digits<R>() + 2.0, kappa + 2.0);
  std::vector<R> x, w;
  composite_gauss<R>(R(0), R(1), panels, m, x, w);
  R v = 0, d = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const R& xi = x[k];
    const R g = ball ? -beta * (1 - xi * xi) : -beta * xi * xi;
    const R e = exp(g) * w[k];
    v += cos(eta * xi) * e;
    d -= xi * sin(eta * xi) * e;
  }
  value = 2 * v;
  deriv = 2 * d;
}

}  // namespace

template <class R>
LineJet<R> line_kernel_jet(const R& a, const R& bm, const R& y, const R& s) {
  using std::abs;
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  if (!(bm > 0)) throw std::invalid_argument("kernel requires Im z != 0");
  if (s == 0 && y == 0) throw std::domain_error("K_z is singular at the origin");
  const R pi = pi_v<R>();
  const R b2 = bm * bm;
  const R lambda = y * a - s * (a * a - b2);
  const R eta = bm * (y - 2 * s * a);
  const R pref = exp(lambda) * bm / (2 * pi);

  auto combine = [&](const R& e, const R& de) {
    const R k = pref * e;
    return LineJet<R>{k, a * k + pref * bm * de};
  };

  if (s == 0) {
    const R e = -2 * sin(eta) / eta;
    const R de = -2 * (eta * cos(eta) - sin(eta)) / (eta * eta);
    return combine(e, de);
  }

  const R beta = b2 * abs(s);
  const R ae = abs(eta);
  const R sign = eta < 0 ? R(-1) : R(1);

  if (s > 0) {
    R ball, dball;
    if (beta >= R(kSmallBeta)) {
      const R rb = sqrt(beta);
      const R q = ae / (2 * rb);
      const std::complex<R> v1(rb, q), v0(-rb, q);
      const std::complex<R> f =
          std::complex<R>(0, sqrt(pi) / (2 * rb)) *
          (cis(-ae) * faddeeva_w<R>(v0) - cis(ae) * faddeeva_w<R>(v1));
      ball = f.real();
      dball = sign * (-sin(ae) / beta + ae * ball / (2 * beta));
    } else {
      small_beta_quadrature<R>(eta, beta, true, ball, dball);
    }
    return combine(-ball, -dball);
  }

  if (beta >= R(kSmallBeta)) {
    const R rb = sqrt(beta);
    const std::complex<R> arg(ae / (2 * rb), rb);
    const std::complex<R> f = std::complex<R>(sqrt(pi) / (2 * rb), 0) * cis(ae) * faddeeva_w<R>(arg);
    const R e = 2 * f.real();
    const R de = sign * (-sin(ae) / beta - ae * e / (2 * beta));
    return combine(e, de);
  }

  // Heat term plus entire part.
  R wv, dwv;
  small_beta_quadrature<R>(eta, beta, false, wv, dwv);
  const R wpref = -pref * exp(beta);
  const R wval = wpref * wv;
  const R heat = exp(y * y / (4 * s)) / sqrt(-4 * pi * s);
  return {heat + wval, heat * y / (2 * s) + a * wval + wpref * bm * dwv};
}

template LineJet<double> line_kernel_jet<double>(const double&, const double&, const double&,
                                                 const double&);
template LineJet<Extended50> line_kernel_jet<Extended50>(const Extended50&, const Extended50&,
                                                         const Extended50&, const Extended50&);
template LineJet<Extended100> line_kernel_jet<Extended100>(const Extended100&, const Extended100&,
                                                           const Extended100&, const Extended100&);

}  // namespace heatrecon
