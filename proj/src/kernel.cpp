#include "heatrecon/kernel.hpp"

#include "heatrecon/quadrature.hpp"
#include "heatrecon/special.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace heatrecon {

namespace {

constexpr double kPi = std::numbers::pi;

struct Radial {
  double i0 = 0.0;  // int r^{n-1} sigma(eta r) e^{g(r)} dr
  double i1 = 0.0;  // int r^n sigma'(eta r) e^{g(r)} dr
  double err = 0.0;
};

struct PanelSum {
  double i0 = 0.0, i1 = 0.0;
};

// Adaptive composite Gauss-Legendre (order 16) with bisection; panels start no
// wider than half an oscillation period and one e-fold of the exponent.
template <class G>
Radial integrate_radial(int n, double eta, double r0, double r1, G g, double rate, double tol_abs,
                        int max_panels) {
  const GaussRule<double>& rule = gauss_legendre<double>(16);
  auto panel = [&](double lo, double hi) {
    PanelSum s;
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int k = 0; k < 16; ++k) {
      const double r = mid + half * rule.nodes[k];
      const double e = std::exp(g(r)) * rule.weights[k] * half;
      const double rn1 = n == 1 ? 1.0 : (n == 2 ? r : r * r);
      s.i0 += rn1 * bessel_surface_kernel(n, eta * r) * e;
      s.i1 += rn1 * r * bessel_surface_kernel_derivative(n, eta * r) * e;
    }
    return s;
  };

  Radial out;
  const double length = r1 - r0;
  if (!(length > 0.0)) return out;
  double width = length;
  if (eta > 0.0) width = std::min(width, kPi / eta);
  if (rate > 0.0) width = std::min(width, 1.0 / rate);
  int initial = static_cast<int>(std::ceil(length / width));
  initial = std::clamp(initial, 1, std::max(1, max_panels / 2));

  struct Item {
    double lo, hi;
    PanelSum whole;
  };
  std::vector<Item> stack;
  const double h0 = length / initial;
  for (int i = initial - 1; i >= 0; --i) {
    const double lo = r0 + h0 * i, hi = i == initial - 1 ? r1 : r0 + h0 * (i + 1);
    stack.push_back({lo, hi, panel(lo, hi)});
  }
  double l1 = 0.0;
  for (const Item& it : stack) l1 += std::abs(it.whole.i0) + std::abs(it.whole.i1);
  const double tol = std::max(tol_abs, 1e-14 * l1);

  int panels = initial;
  while (!stack.empty()) {
    Item it = stack.back();
    stack.pop_back();
    const double mid = 0.5 * (it.lo + it.hi);
    const PanelSum left = panel(it.lo, mid), right = panel(mid, it.hi);
    const double e = std::max(std::abs(left.i0 + right.i0 - it.whole.i0),
                              std::abs(left.i1 + right.i1 - it.whole.i1));
    const double share = tol * (it.hi - it.lo) / length;
    if (e <= share || panels >= max_panels || it.hi - it.lo < 1e-14 * length) {
      out.i0 += left.i0 + right.i0;
      out.i1 += left.i1 + right.i1;
      out.err += e;
    } else {
      ++panels;
      stack.push_back({mid, it.hi, right});
      stack.push_back({it.lo, mid, left});
    }
  }
  return out;
}

// Radius below which e^{-beta (1 - r^2)} is negligible against the boundary layer at r = 1.
double inner_cutoff(double beta, const KernelConfig& cfg) {
  if (!(beta > 0.0)) return 0.0;
  const double drop = (std::log(1.0 / cfg.exterior_cutoff_eps) + std::log1p(2.0 * beta)) / beta;
  return drop >= 1.0 ? 0.0 : std::sqrt(1.0 - drop);
}

PhasedComplex real_phased(double log_base, double v) {
  if (v == 0.0) return PhasedComplex::zero();
  return PhasedComplex::from_log(log_base + std::log(std::abs(v)), v < 0.0 ? kPi : 0.0);
}

struct Setup {
  int n;
  double bn;         // |b|
  double eta;        // |eta|
  Vector ehat;       // eta / |eta|, zero when eta = 0
  double lambda;     // Re phase
  double scale_log;  // n log(|b| / 2 pi)
  double tol;        // absolute tolerance on the radial integral
};

Setup make_setup(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  const int n = z.dim();
  if (p.dim() != n) throw std::invalid_argument("kernel point dimension differs from frequency");
  Setup s{};
  s.n = n;
  s.bn = z.b.norm();
  if (!(s.bn > 0.0)) throw std::invalid_argument("kernel requires Im z != 0");
  Vector ev = s.bn * (p.x - 2.0 * p.t * z.a);
  s.eta = ev.norm();
  s.ehat = s.eta > 0.0 ? ev * (1.0 / s.eta) : Vector(n);
  s.lambda = phase_exponent(z, p).real();
  s.scale_log = n * std::log(s.bn / (2.0 * kPi));
  s.tol = cfg.quad_tol / std::exp(s.scale_log);
  return s;
}

KernelJet assemble(const ComplexFrequency& z, const Setup& s, double log_base, double v0,
                   const Radial& r, double sign) {
  // value = sign e^{log_base} i0, grad = a value + sign e^{log_base} |b| ehat i1
  KernelJet j;
  j.value = real_phased(log_base, sign * v0);
  for (int i = 0; i < s.n; ++i)
    j.grad[i] = real_phased(log_base, sign * (z.a[i] * v0 + s.bn * s.ehat[i] * r.i1));
  j.est_error = r.err * std::exp(s.scale_log);
  return j;
}

}  // namespace

void KernelConfig::validate() const {
  if (!(quad_tol > 0.0) || max_panels <= 0 || !(exterior_cutoff_eps > 0.0) || !(branch_R > 0.0))
    throw std::invalid_argument("kernel configuration values must be positive");
  if (!(exterior_cutoff_eps < quad_tol))
    throw std::invalid_argument("exterior_cutoff_eps must be below quad_tol");
}

double bessel_surface_kernel(int n, double s) {
  if (s < 0.0) throw std::domain_error("surface kernel argument must be nonnegative");
  switch (n) {
    case 1: return 2.0 * std::cos(s);
    case 2: return 2.0 * kPi * bessel_j0(s);
    case 3:
      if (s < 1e-4) return 4.0 * kPi * (1.0 - s * s / 6.0);
      return 4.0 * kPi * std::sin(s) / s;
  }
  throw std::invalid_argument("dimension must be 1, 2 or 3");
}

double bessel_surface_kernel_derivative(int n, double s) {
  if (s < 0.0) throw std::domain_error("surface kernel argument must be nonnegative");
  switch (n) {
    case 1: return -2.0 * std::sin(s);
    case 2: return -2.0 * kPi * bessel_j1(s);
    case 3:
      if (s < 1e-3) return 4.0 * kPi * (-s / 3.0 + s * s * s / 30.0);
      return 4.0 * kPi * (s * std::cos(s) - std::sin(s)) / (s * s);
  }
  throw std::invalid_argument("dimension must be 1, 2 or 3");
}

PhasedComplex backward_heat_term(const SpaceTimePoint& p) {
  if (p.t >= 0.0) return PhasedComplex::zero();
  const double at = -p.t;
  return PhasedComplex::from_log(-0.5 * p.dim() * std::log(4.0 * kPi * at) - p.x.dot(p.x) / (4.0 * at),
                                 0.0);
}

KernelBranch kernel_branch(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  if (p.t > 0.0) return KernelBranch::ball;
  if (p.t == 0.0) return KernelBranch::boundary;
  const double bn = z.b.norm();
  return bn * bn * (-p.t) >= cfg.branch_R ? KernelBranch::exterior : KernelBranch::split;
}

KernelJet eval_K_z_branch(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg,
                          KernelBranch branch) {
  if (p.t == 0.0 && p.x.norm() == 0.0)
    throw std::domain_error("K_z is singular at the origin");
  const Setup s = make_setup(z, p, cfg);
  const int n = s.n;
  const double b2 = s.bn * s.bn;
  const double base = s.lambda + s.scale_log;

  switch (branch) {
    case KernelBranch::ball: {
      if (!(p.t > 0.0)) throw std::invalid_argument("ball representation needs t > 0");
      const double beta = b2 * p.t;
      auto g = [beta](double r) { return -beta * (1.0 - r * r); };
      const Radial r = integrate_radial(n, s.eta, inner_cutoff(beta, cfg), 1.0, g, 2.0 * beta, s.tol,
                                        cfg.max_panels);
      return assemble(z, s, base, r.i0, r, -1.0);
    }
    case KernelBranch::exterior: {
      if (!(p.t < 0.0)) throw std::invalid_argument("exterior representation needs t < 0");
      const double beta = b2 * (-p.t);
      const double rmax = std::sqrt(1.0 + std::log(1.0 / cfg.exterior_cutoff_eps) / beta);
      auto g = [beta](double r) { return -beta * (r * r - 1.0); };
      const Radial r = integrate_radial(n, s.eta, 1.0, rmax, g, 2.0 * beta * rmax, s.tol, cfg.max_panels);
      return assemble(z, s, base, r.i0, r, 1.0);
    }
    case KernelBranch::boundary: {
      if (p.t != 0.0) throw std::invalid_argument("boundary representation needs t = 0");
      auto g = [](double) { return 0.0; };
      const Radial r = integrate_radial(n, s.eta, 0.0, 1.0, g, 0.0, s.tol, cfg.max_panels);
      return assemble(z, s, base, r.i0, r, -1.0);
    }
    case KernelBranch::split: {
      if (!(p.t < 0.0)) throw std::invalid_argument("split representation needs t < 0");
      const double beta = b2 * (-p.t);
      auto g = [beta](double r) { return -beta * r * r; };
      const Radial r = integrate_radial(n, s.eta, 0.0, 1.0, g, 2.0 * beta, s.tol * std::exp(-beta),
                                        cfg.max_panels);
      KernelJet w = assemble(z, s, base + beta, r.i0, r, -1.0);
      w.est_error *= std::exp(beta);
      const PhasedComplex h = backward_heat_term(p);
      w.value = w.value + h;
      for (int i = 0; i < n && i < 3; ++i)
        w.grad[i] = w.grad[i] + h * Complex(p.x[i] / (2.0 * p.t), 0.0);
      return w;
    }
  }
  throw std::logic_error("unknown kernel branch");
}

KernelJet eval_K_z_jet(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  return eval_K_z_branch(z, p, cfg, kernel_branch(z, p, cfg));
}

KernelValue eval_K_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  const KernelJet j = eval_K_z_jet(z, p, cfg);
  return {j.value, j.est_error};
}

std::array<PhasedComplex, 3> grad_K_z(const ComplexFrequency& z, const SpaceTimePoint& p,
                                      const KernelConfig& cfg) {
  return eval_K_z_jet(z, p, cfg).grad;
}

KernelValue eval_w_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  const Setup s = make_setup(z, p, cfg);
  const double b2 = s.bn * s.bn;
  const double tb = b2 * p.t;
  auto g = [tb](double r) { return tb * r * r; };
  const double log_base = p.x.dot(z.a) - p.t * z.a.dot(z.a) + s.scale_log;
  const double r0 = tb > 0.0 ? inner_cutoff(tb, cfg) : 0.0;
  const Radial r = integrate_radial(s.n, s.eta, r0, 1.0, g, 2.0 * std::abs(tb), s.tol, cfg.max_panels);
  return {real_phased(log_base, -r.i0), r.err * std::exp(s.scale_log)};
}

KernelValue eval_G_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg) {
  KernelValue k = eval_K_z(z, p, cfg);
  k.value = k.value * PhasedComplex::exp(-phase_exponent(z, p));
  return k;
}

}  // namespace heatrecon
