#include "heatrecon/oracle.hpp"

#include "heatrecon/quadrature.hpp"
#include "heatrecon/reconstruct.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace heatrecon {

namespace {

struct Moment {
  Complex value;
  double error = 0.0;
};

Moment phase_integral(const ConeRegion& cone, const ComplexFrequency& z, const SpaceTimeFunction& rho,
                      const OracleConfig& cfg) {
  Complex prev;
  bool have_prev = false;
  for (int deg = cfg.min_degree; deg <= cfg.max_degree; deg += 2) {
    const ConeProductRule rule = cone_product_rule(cone, z, deg);
    std::vector<Complex> terms(rule.nodes.size());
    for (std::size_t j = 0; j < rule.nodes.size(); ++j) terms[j] = rule.weights[j] * rho(rule.nodes[j]);
    const Complex m = pairwise_sum(terms);
    if (have_prev) {
      const double diff = std::abs(m - prev);
      if (diff <= cfg.rel_tol * std::abs(m) || (m == Complex(0.0, 0.0) && diff == 0.0)) return {m, diff};
    }
    prev = m;
    have_prev = true;
  }
  throw std::runtime_error("cone quadrature did not reach the requested tolerance by degree " +
                           std::to_string(cfg.max_degree));
}

}  // namespace

std::vector<double> doubling_taus(double tau0, int count) {
  std::vector<double> t;
  for (int k = 0; k < count; ++k) t.push_back(std::ldexp(tau0, k));
  return t;
}

VisibilityFit visibility_limit_numeric(const ConeRegion& cone, const SpaceTimeFunction& density,
                                       const std::vector<double>& taus, const OracleConfig& cfg) {
  if (taus.size() < 4) throw std::invalid_argument("visibility fit needs at least four tau values");
  const double c = cone.probe.c;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (!(c * c * taus[i] > 1.0)) throw std::invalid_argument("every tau needs c^2 tau > 1");
    if (i > 0 && !(taus[i] > taus[i - 1])) throw std::invalid_argument("taus must be strictly increasing");
  }
  VisibilityFit fit;
  fit.per_tau.resize(taus.size());
  parallel_for(taus.size(), [&](std::size_t i) {
    const Moment m = phase_integral(cone, make_z(cone.probe, taus[i]), density, cfg);
    fit.per_tau[i].tau = taus[i];
    fit.per_tau[i].M = m.value;
    fit.per_tau[i].quad_error = m.error;
  });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  bool all_nonzero = true;
  for (const VisibilityPoint& p : fit.per_tau) all_nonzero = all_nonzero && std::abs(p.M) > 0.0;
  const double rho0 = density(cone.target);
  if (!all_nonzero) {
    fit.mu_fit = nan;
    fit.C_fit = Complex(nan, nan);
    fit.residual = nan;
    for (VisibilityPoint& p : fit.per_tau) p.scaled = Complex(nan, nan);
    return fit;
  }
  const double n = static_cast<double>(taus.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const VisibilityPoint& p : fit.per_tau) {
    const double x = std::log(p.tau), y = std::log(std::abs(p.M));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double icept = (sy - slope * sx) / n;
  double ss = 0;
  for (const VisibilityPoint& p : fit.per_tau) {
    const double r = std::log(std::abs(p.M)) - (icept + slope * std::log(p.tau));
    ss += r * r;
  }
  fit.mu_fit = -slope;
  fit.residual = std::sqrt(ss / n);
  for (VisibilityPoint& p : fit.per_tau) p.scaled = std::pow(p.tau, fit.mu_fit) * p.M / rho0;
  const std::size_t k = fit.per_tau.size();
  fit.C_fit = 0.5 * (fit.per_tau[k - 1].scaled + fit.per_tau[k - 2].scaled);
  return fit;
}

QuadratureResult reference_quadrature(const std::function<double(double)>& f, double a, double b,
                                      double target_tol, int order, int max_levels) {
  const double factor = std::pow(2.0, 2.0 * order) - 1.0;
  double prev_s = 0.0, prev_v = 0.0;
  for (int level = 0; level < max_levels; ++level) {
    const int panels = 1 << level;
    std::vector<double> x, w;
    composite_gauss<double>(a, b, panels, order, x, w);
    std::vector<double> terms(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) terms[i] = w[i] * f(x[i]);
    const double s = pairwise_sum(terms);
    const double v = level == 0 ? s : s + (s - prev_s) / factor;
    if (level >= 2) {
      const double err = std::abs(v - prev_v);
      if (err <= target_tol * std::max(1.0, std::abs(v))) return {v, err, panels};
    }
    prev_s = s;
    prev_v = v;
  }
  throw std::runtime_error("reference quadrature did not converge in " + std::to_string(max_levels) +
                           " levels");
}

CalibrationRow calibrate(const ConeRegion& cone, const std::vector<double>& taus, const OracleConfig& cfg) {
  CalibrationRow row;
  row.n = cone.n;
  row.c = cone.probe.c;
  row.delta = cone.delta;
  row.fit = visibility_limit_numeric(cone, [](const SpaceTimePoint&) { return 1.0; }, taus, cfg);
  row.printed = analytic_constant(cone);
  row.edge = edge_constant(cone);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  if (cone.n == 1) {
    row.triangle = triangle_rhs_constant(cone);
    row.ratio = row.printed.C / row.triangle.C;
  } else {
    row.triangle = {nan, Complex(nan, nan)};
    row.ratio = Complex(nan, nan);
  }
  return row;
}

namespace {

void put(std::ostringstream& os, double v) {
  if (std::isfinite(v)) os << v;
}

void put(std::ostringstream& os, Complex v) {
  put(os, v.real());
  os << ',';
  put(os, v.imag());
}

}  // namespace

void write_calibration_csv(std::ostream& os, const std::vector<CalibrationRow>& rows) {
  os << "n,c,delta,mu_fit,re_C_fit,im_C_fit,fit_residual,re_C_printed,im_C_printed,re_C_edge,im_C_edge,"
        "re_C_triangle,im_C_triangle,re_ratio,im_ratio\n";
  for (const CalibrationRow& r : rows) {
    std::ostringstream line;
    line << std::setprecision(17) << r.n << ',' << r.c << ',' << r.delta << ',';
    put(line, r.fit.mu_fit);
    line << ',';
    put(line, r.fit.C_fit);
    line << ',';
    put(line, r.fit.residual);
    line << ',';
    put(line, r.printed.C);
    line << ',';
    put(line, r.edge.C);
    line << ',';
    put(line, r.triangle.C);
    line << ',';
    put(line, r.ratio);
    os << line.str() << '\n';
  }
}

void write_visibility_csv(std::ostream& os, const VisibilityFit& fit) {
  os << "tau,re_M,im_M,re_scaled,im_scaled,quad_error\n";
  for (const VisibilityPoint& p : fit.per_tau) {
    std::ostringstream line;
    line << std::setprecision(17) << p.tau << ',';
    put(line, p.M);
    line << ',';
    put(line, p.scaled);
    line << ',' << p.quad_error;
    os << line.str() << '\n';
  }
}

}  // namespace heatrecon
