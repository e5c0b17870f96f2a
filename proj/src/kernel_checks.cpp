#include "heatrecon/kernel_checks.hpp"

#include "heatrecon/line_kernel.hpp"
#include "heatrecon/quadrature.hpp"

#include <algorithm>
#include <chrono>
#include <iomanip>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace heatrecon {

namespace {

constexpr double kPi = std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

Vector random_unit(std::mt19937_64& rng, int n) {
  Vector v(n);
  do {
    for (int i = 0; i < n; ++i) v[i] = uniform(rng, -1.0, 1.0);
  } while (v.norm() < 0.1);
  return v * (1.0 / v.norm());
}

ProbeDirection random_probe(std::mt19937_64& rng, int n, double c) {
  const Vector w = random_unit(rng, n);
  if (n == 1) return make_probe(c, w);
  Vector perp(n);
  perp[0] = -w[1];
  perp[1] = w[0];
  return make_probe(c, w, perp);
}

ComplexFrequency random_frequency(std::mt19937_64& rng, int n) {
  const double c = uniform(rng, 0.5, 2.0);
  const double tau = uniform(rng, std::max(1.0, 1.5 / (c * c)), 12.0);
  return make_z(random_probe(rng, n, c), tau);
}

SpaceTimePoint random_point(std::mt19937_64& rng, int n, double min_abs_t) {
  SpaceTimePoint p{Vector(n), 0.0};
  for (;;) {
    for (int i = 0; i < n; ++i) p.x[i] = uniform(rng, -1.0, 1.0);
    p.t = uniform(rng, -1.0, 1.0);
    if (std::abs(p.t) >= min_abs_t && p.x.dot(p.x) + std::abs(p.t) > 0.05) return p;
  }
}

double abs_z(const ComplexFrequency& z) { return std::hypot(z.a.norm(), z.b.norm()); }

SpaceTimePoint shifted(SpaceTimePoint p, int axis, double h) {
  if (axis < 0)
    p.t += h;
  else
    p.x[axis] += h;
  return p;
}

}  // namespace

std::string format_check(const CheckResult& r) {
  std::ostringstream os;
  os.precision(4);
  os << (r.pass ? "PASS " : "FAIL ") << r.name << ": measured " << r.measured << " threshold "
     << r.threshold;
  if (!r.detail.empty()) os << " (" << r.detail << ")";
  os << " [" << std::fixed << std::setprecision(2) << r.seconds << " s]";
  return os.str();
}

double heat_residual(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  const int n = p.dim();
  double ell = 1.0 / std::max(1.0, abs_z(z));
  if (p.t < 0.0) ell = std::min(ell, 0.5 * std::sqrt(-p.t));
  ell = std::min(ell, 0.5 * std::sqrt(p.x.dot(p.x) + std::abs(p.t)));
  const double hx = 1e-3 * ell;
  const double ht = hx * hx;

  std::vector<SpaceTimePoint> pts{p, shifted(p, -1, ht), shifted(p, -1, -ht)};
  for (int i = 0; i < n; ++i) {
    pts.push_back(shifted(p, i, hx));
    pts.push_back(shifted(p, i, -hx));
  }
  // Envelope samples one local length away set the magnitude scale.
  const std::size_t stencil = pts.size();
  for (int i = 0; i < n; ++i)
    for (double f : {-1.0, 1.0}) pts.push_back(shifted(p, i, f * ell));
  std::vector<PhasedComplex> v;
  double shift = -1e300;
  for (const auto& q : pts) {
    v.push_back(eval_K_z(z, q, cfg).value);
    if (!v.back().is_zero()) shift = std::max(shift, v.back().log_mag());
  }
  std::vector<Complex> k;
  double kmax = 0.0;
  for (const auto& e : v) {
    k.push_back(e.scaled(shift));
    kmax = std::max(kmax, std::abs(k.back()));
  }
  k.resize(stencil);
  if (kmax == 0.0) return 0.0;
  Complex r = (k[1] - k[2]) / (2.0 * ht);
  for (int i = 0; i < n; ++i) r += (k[3 + 2 * i] - 2.0 * k[0] + k[4 + 2 * i]) / (hx * hx);
  return std::abs(r) * ell * ell / kmax;
}

double gradient_fd_mismatch(const ComplexFrequency& z, const SpaceTimePoint& p,
                            const KernelConfig& cfg) {
  const int n = p.dim();
  const KernelJet j = eval_K_z_jet(z, p, cfg);
  const double shift = j.value.is_zero() ? 0.0 : j.value.log_mag();
  const double h = 1e-5 * std::max(1.0, p.x.norm()) / std::max(1.0, abs_z(z) / 10.0);
  double scale = abs_z(z) * std::abs(j.value.scaled(shift));
  for (int i = 0; i < n; ++i) scale = std::max(scale, std::abs(j.grad[i].scaled(shift)));
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const Complex kp = eval_K_z(z, shifted(p, i, h), cfg).value.scaled(shift);
    const Complex km = eval_K_z(z, shifted(p, i, -h), cfg).value.scaled(shift);
    const Complex fd = (kp - km) / (2.0 * h);
    worst = std::max(worst, std::abs(fd - j.grad[i].scaled(shift)) / scale);
  }
  return worst;
}

double ball_integral_tensor_grid(double eta, double beta) {
  constexpr int angles = 256;
  const GaussRule<double>& g = gauss_legendre<double>(32);
  const int panels = 8;
  double sum = 0.0;
  for (int pnl = 0; pnl < panels; ++pnl) {
    const double lo = static_cast<double>(pnl) / panels, half = 0.5 / panels;
    for (int k = 0; k < 32; ++k) {
      const double r = lo + half * (1.0 + g.nodes[k]);
      double ring = 0.0;
      for (int j = 0; j < angles; ++j) ring += std::cos(eta * r * std::cos(2.0 * kPi * j / angles));
      ring *= 2.0 * kPi / angles;
      sum += half * g.weights[k] * r * ring * std::exp(-beta * (1.0 - r * r));
    }
  }
  return sum;
}

double ball_integral_radial(double eta, double beta, const KernelConfig& cfg) {
  const ComplexFrequency z = frequency_from_parts(Vector{0.0, 0.0}, Vector{1.0, 0.0});
  const SpaceTimePoint p{Vector{eta, 0.0}, beta};
  const Complex k = eval_K_z(z, p, cfg).value.scaled(beta);
  return -k.real() * 4.0 * kPi * kPi;
}

CheckResult check_heat_residual(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    const ComplexFrequency z = random_frequency(rng, n);
    const SpaceTimePoint p = random_point(rng, n, 0.01);
    worst = std::max(worst, heat_residual(z, p, cfg));
  }
  CheckResult r{"backward heat residual", worst <= 1e-4, worst, 1e-4,
                std::to_string(samples) + " points, n = 1, 2", seconds_since(t0)};
  return r;
}

CheckResult check_gradient(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    const ComplexFrequency z = random_frequency(rng, n);
    const SpaceTimePoint p = random_point(rng, n, 0.01);
    worst = std::max(worst, gradient_fd_mismatch(z, p, cfg));
  }
  return {"gradient vs finite differences", worst <= 1e-4, worst, 1e-4,
          std::to_string(samples) + " points, n = 1, 2", seconds_since(t0)};
}

CheckResult check_scaling_law(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    const Vector w = random_unit(rng, n);
    const double tau = uniform(rng, 0.5, 5.0);
    const double lambda = uniform(rng, 0.5, 3.0);
    const SpaceTimePoint p = random_point(rng, n, 0.01);
    const ComplexFrequency big = frequency_from_parts(Vector(n), (lambda * tau) * w);
    const ComplexFrequency small = frequency_from_parts(Vector(n), tau * w);
    const PhasedComplex lhs = eval_G_z(big, p, cfg).value;
    const PhasedComplex rhs =
        eval_G_z(small, {lambda * p.x, lambda * lambda * p.t}, cfg).value * Complex(std::pow(lambda, n), 0.0);
    const double shift = std::max(lhs.log_mag(), rhs.log_mag());
    const double diff = std::abs(lhs.scaled(shift) - rhs.scaled(shift));
    worst = std::max(worst, diff / std::max(std::abs(lhs.scaled(shift)), std::abs(rhs.scaled(shift))));
  }
  return {"scaling law", worst <= 1e-9, worst, 1e-9, std::to_string(samples) + " samples",
          seconds_since(t0)};
}

CheckResult check_translation_law(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a[i] = uniform(rng, -4.0, 4.0);
      b[i] = uniform(rng, -4.0, 4.0);
    }
    if (b.norm() < 0.2) b[0] += 1.0;
    const SpaceTimePoint p = random_point(rng, n, 0.01);
    const ComplexFrequency z = frequency_from_parts(a, b);
    const ComplexFrequency zi = frequency_from_parts(Vector(n), b);
    const PhasedComplex lhs = eval_G_z(z, p, cfg).value;
    const PhasedComplex rhs = eval_G_z(zi, {p.x - (2.0 * p.t) * a, p.t}, cfg).value;
    const double shift = std::max(lhs.log_mag(), rhs.log_mag());
    const double diff = std::abs(lhs.scaled(shift) - rhs.scaled(shift));
    worst = std::max(worst, diff / std::max(std::abs(lhs.scaled(shift)), std::abs(rhs.scaled(shift))));
  }
  return {"translation law", worst <= 1e-9, worst, 1e-9, std::to_string(samples) + " samples",
          seconds_since(t0)};
}

CheckResult check_bessel_reduction(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const double eta = uniform(rng, 0.0, 20.0);
    const double beta = uniform(rng, 0.01, 5.0);
    worst = std::max(worst, std::abs(ball_integral_tensor_grid(eta, beta) - ball_integral_radial(eta, beta, cfg)));
  }
  return {"Bessel reduction (n = 2)", worst <= 1e-8, worst, 1e-8, std::to_string(samples) + " samples",
          seconds_since(t0)};
}

CheckResult check_decay(int points, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  const double c = 1.0, delta = 0.1;
  const std::vector<double> taus{20.0, 40.0, 80.0, 160.0};
  double worst_rise = -1e300;
  std::ostringstream detail;
  detail.precision(4);
  for (int n = 1; n <= 2; ++n) {
    std::mt19937_64 rng(seed + n);
    const ProbeDirection probe =
        n == 1 ? make_probe(c, Vector{1.0}) : make_probe(c, Vector{1.0, 0.0}, Vector{0.0, 1.0});
    std::vector<SpaceTimePoint> pts;
    while (static_cast<int>(pts.size()) < points) {
      SpaceTimePoint p{Vector(n), 0.0};
      for (int i = 0; i < n; ++i) p.x[i] = uniform(rng, -1.0, 1.0);
      const double level = pts.size() % 2 == 0 ? -delta : uniform(rng, -delta - 0.3, -delta);
      p.t = c * p.x[0] - level * std::sqrt(1.0 + c * c);
      if (std::abs(p.t) <= 1.0) pts.push_back(p);
    }
    double prev = 0.0;
    detail << "n=" << n << " Q:";
    for (std::size_t k = 0; k < taus.size(); ++k) {
      const ComplexFrequency z = make_z(probe, taus[k]);
      double sup = -1e300;
      for (const auto& p : pts) {
        const PhasedComplex v = eval_K_z(z, p, cfg).value;
        if (!v.is_zero()) sup = std::max(sup, v.log_mag());
      }
      const double q = sup + taus[k] * std::sqrt(1.0 + c * c) * delta - n * std::log(taus[k]);
      detail << " " << q;
      if (k > 0) worst_rise = std::max(worst_rise, q - prev);
      prev = q;
    }
    detail << (n == 1 ? "; " : "");
  }
  return {"decay on the far side", worst_rise <= 0.5, worst_rise, 0.5, detail.str(), seconds_since(t0)};
}

CheckResult check_branch_consistency(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    const ComplexFrequency z = random_frequency(rng, n);
    SpaceTimePoint p = random_point(rng, n, 0.0);
    if (p.x.norm() < 0.1) p.x[0] += 0.5;
    const double eps = 1e-15;
    const double base = phase_exponent(z, {p.x, 0.0}).real();
    const double k0 = eval_K_z(z, {p.x, 0.0}, cfg).value.scaled(base).real();
    const double kp = eval_K_z(z, {p.x, eps}, cfg).value.scaled(base).real();
    const double km = eval_K_z(z, {p.x, -eps}, cfg).value.scaled(base).real();
    worst = std::max({worst, std::abs(kp - k0), std::abs(km - k0)});
  }
  return {"branch consistency at t = 0", worst <= 10.0 * cfg.quad_tol, worst, 10.0 * cfg.quad_tol,
          "pre-phase values", seconds_since(t0)};
}

CheckResult check_cancellation_guard(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const int n = 1 + s % 2;
    const ComplexFrequency z = random_frequency(rng, n);
    const double bn = z.b.norm();
    const double beta = uniform(rng, 0.01, 2.0);
    SpaceTimePoint p = random_point(rng, n, 0.0);
    p.t = -beta / (bn * bn);
    const PhasedComplex split = eval_K_z_branch(z, p, cfg, KernelBranch::split).value;
    const PhasedComplex ext = eval_K_z_branch(z, p, cfg, KernelBranch::exterior).value;
    const double shift = std::max(split.log_mag(), ext.log_mag());
    const double d = std::abs(split.scaled(shift) - ext.scaled(shift));
    worst = std::max(worst, d / std::max(std::abs(split.scaled(shift)), std::abs(ext.scaled(shift))));
  }
  return {"heat term plus entire part vs exterior form", worst <= 1e-8, worst, 1e-8,
          "|b|^2|t| <= 2", seconds_since(t0)};
}

CheckResult check_line_closed_form(int samples, std::uint64_t seed, const KernelConfig& cfg) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ComplexFrequency z = random_frequency(rng, 1);
    const SpaceTimePoint p = random_point(rng, 1, 0.0);
    const KernelJet j = eval_K_z_jet(z, p, cfg);
    const double shift = j.value.log_mag();
    const LineJet<double> c = line_kernel_jet<double>(z.a[0], z.b.norm(), p.x[0], p.t);
    const double scale = std::max(std::abs(j.value.scaled(shift)) * abs_z(z), std::abs(j.grad[0].scaled(shift)));
    const double e = std::exp(-shift);
    worst = std::max({worst, std::abs(c.value * e - j.value.scaled(shift).real()) * abs_z(z) / scale,
                      std::abs(c.dy * e - j.grad[0].scaled(shift).real()) / scale});
  }
  return {"n = 1 closed form vs radial quadrature", worst <= 1e-9, worst, 1e-9,
          std::to_string(samples) + " samples", seconds_since(t0)};
}

std::vector<CheckResult> kernel_suite(const KernelConfig& cfg, double sample_scale) {
  auto count = [sample_scale](int base) { return std::max(4, static_cast<int>(base * sample_scale)); };
  KernelConfig tight = cfg;
  tight.quad_tol = std::min(cfg.quad_tol, 1e-13);
  tight.exterior_cutoff_eps = std::min(cfg.exterior_cutoff_eps, 1e-17);
  return {
      check_heat_residual(count(200), 11, tight),
      check_gradient(count(100), 12, tight),
      check_scaling_law(count(100), 13, tight),
      check_translation_law(count(100), 14, tight),
      check_bessel_reduction(count(100), 15, tight),
      check_decay(50, 16, cfg),
      check_branch_consistency(count(50), 17, cfg),
      check_cancellation_guard(count(50), 18, tight),
      check_line_closed_form(count(100), 19, tight),
  };
}

}  // namespace heatrecon
