#include "doctest.h"

#include "heatrecon/space_time.hpp"

#include <cmath>
#include <random>

using namespace heatrecon;

TEST_CASE("probe construction") {
  auto p1 = make_probe(1.0, Vector{3.0});
  CHECK(p1.omega[0] == 1.0);
  auto w = omega_c(p1);
  CHECK(w[0] == doctest::Approx(0.7071068).epsilon(1e-7));
  CHECK(w[1] == doctest::Approx(-0.7071068).epsilon(1e-7));

  auto p2 = make_probe(2.0, Vector{1.0, 0.0}, Vector{0.0, 1.0});
  CHECK(std::abs(p2.omega.norm() - 1.0) < 1e-12);
  CHECK(std::abs(p2.omega.dot(*p2.omega_perp)) < 1e-12);

  CHECK_THROWS_AS(make_probe(2.0, Vector{1.0, 0.0}, Vector{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_probe(2.0, Vector{1.0, 0.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_probe(1.0, Vector{0.0, 0.0}, Vector{0.0, 1.0}), std::invalid_argument);
  CHECK_THROWS_AS(make_probe(-1.0, Vector{1.0}), std::invalid_argument);

  auto p3 = make_probe(2.0, Vector{1.0});
  auto w3 = omega_c(p3);
  CHECK(w3[0] == doctest::Approx(0.8944272).epsilon(1e-7));
  CHECK(w3[1] == doctest::Approx(-0.4472136).epsilon(1e-7));
}

TEST_CASE("omega_c has unit norm") {
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    auto p = make_probe(0.1 + 5.0 * (u(gen) + 1.0), Vector{u(gen), u(gen), u(gen)},
                        Vector{u(gen), u(gen), u(gen)});
    auto w = omega_c(p);
    double s = 0.0;
    for (double v : w) s += v * v;
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("complex frequency in one dimension") {
  auto z = make_z(make_probe(1.0, Vector{1.0}), 2.0);
  CHECK(z.z[0].real() == doctest::Approx(2.0));
  CHECK(z.z[0].imag() == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(z.dot_zz().real() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(make_z(make_probe(1.0, Vector{1.0}), 0.5), std::invalid_argument);
}

TEST_CASE("complex frequency in two dimensions has Re(z.z) = tau") {
  // c tau = 2, sqrt(1 - 1/(c^2 tau)) = sqrt(3)/2.
  auto z = make_z(make_probe(2.0, Vector{1.0, 0.0}, Vector{0.0, 1.0}), 1.0);
  CHECK(z.z[0].real() == doctest::Approx(2.0));
  CHECK(std::abs(z.z[0].imag()) < 1e-15);
  CHECK(std::abs(z.z[1].real()) < 1e-15);
  CHECK(z.z[1].imag() == doctest::Approx(1.7320508).epsilon(1e-7));
  CHECK(std::abs(z.dot_zz().real() - 1.0) < 1e-12);
  CHECK(std::abs(z.dot_zz().imag()) < 1e-12);
}

TEST_CASE("real part of the phase equals the scaled probe level") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const int n = 1 + i % 3;
    Vector om(n), perp(n), x(n);
    for (int k = 0; k < n; ++k) {
      om[k] = u(gen);
      perp[k] = u(gen);
      x[k] = 2.0 * u(gen);
    }
    auto probe = n == 1 ? make_probe(0.5 + 3.0 * std::abs(u(gen)), om)
                        : make_probe(0.5 + 3.0 * std::abs(u(gen)), om, perp);
    const double tau = 1.0 / (probe.c * probe.c) + 1.0 + 50.0 * std::abs(u(gen));
    auto z = make_z(probe, tau);
    CHECK(std::abs(z.dot_zz().real() - tau) <= 1e-10 * tau);
    SpaceTimePoint p{x, u(gen)};
    const double expect = tau * std::sqrt(1.0 + probe.c * probe.c) * probe_level(probe, p);
    const double got = phase_exponent(z, p).real();
    CHECK(std::abs(got - expect) <= 1e-10 * std::max(1.0, std::abs(expect)) * tau);
  }
}

TEST_CASE("phase examples and linearity") {
  auto probe = make_probe(1.0, Vector{1.0});
  auto z = make_z(probe, 2.0);
  auto v = phase_exponent(z, {Vector{1.0}, 0.0});
  CHECK(v.real() == doctest::Approx(2.0));
  CHECK(v.imag() == doctest::Approx(1.4142136).epsilon(1e-7));
  CHECK(std::abs(phase_exponent(z, {Vector{0.0}, 0.0})) == 0.0);
  // Points on the level zero hyperplane have zero real phase.
  CHECK(std::abs(phase_exponent(z, {Vector{0.7}, 0.7}).real()) < 1e-12);

  auto probe2 = make_probe(1.5, Vector{0.6, 0.8}, Vector{-0.8, 0.6});
  auto z2 = make_z(probe2, 9.0);
  SpaceTimePoint p{Vector{0.3, -1.1}, 0.0};
  for (double alpha : {-2.0, 0.5, 3.0}) {
    SpaceTimePoint q{alpha * p.x, 0.0};
    CHECK(std::abs(phase_exponent(z2, q) - alpha * phase_exponent(z2, p)) < 1e-12);
  }
}

TEST_CASE("halfspace margin examples") {
  auto probe = make_probe(2.0, Vector{1.0});
  SpaceTimePoint target{Vector{0.5}, 0.5};
  CHECK(halfspace_margin(probe, target, target) == 0.0);
  for (double t : {0.1, 1.0, 2.0}) {
    const double m = halfspace_margin(probe, target, {Vector{0.0}, t});
    CHECK(m == doctest::Approx((0.5 + t) / std::sqrt(5.0)));
    CHECK(m >= 0.2236068);
  }
  CHECK(halfspace_margin(probe, target, {Vector{1.0}, 0.0}) ==
        doctest::Approx(-0.6708204).epsilon(1e-7));
}

TEST_CASE("phased complex arithmetic stays in log domain") {
  auto a = PhasedComplex::exp({800.0, 0.3});
  auto b = PhasedComplex::exp({800.0, 0.3});
  auto s = a + b;
  CHECK(s.log_mag() == doctest::Approx(800.0 + std::log(2.0)));
  CHECK(s.arg() == doctest::Approx(0.3));
  auto d = a - b;
  CHECK(d.is_zero());
  auto p = a * PhasedComplex::exp({-799.0, -0.3});
  CHECK(std::abs(p.value() - Complex(std::exp(1.0), 0.0)) < 1e-12);
  CHECK((PhasedComplex::zero() + a).log_mag() == 800.0);
  auto neg = -PhasedComplex::from_complex({2.0, 0.0});
  CHECK(neg.arg() == doctest::Approx(M_PI));
  CHECK(std::abs(PhasedComplex::from_complex({0.0, -1.0}).arg() + M_PI / 2) < 1e-15);
  CHECK(wrap_angle(3.0 * M_PI) == doctest::Approx(M_PI));
}
