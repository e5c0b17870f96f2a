#pragma once

#include "heatrecon/caloric.hpp"
#include "heatrecon/geometry.hpp"
#include "heatrecon/space_time.hpp"

#include <functional>
#include <iosfwd>
#include <vector>

namespace heatrecon {

struct VisibilityPoint {
  double tau = 0.0;
  Complex M;       // e^{-phase(target)} int_D e^{phase} rho
  Complex scaled;  // tau^{mu_fit} M / rho(target)
  double quad_error = 0.0;
};

struct VisibilityFit {
  double mu_fit = 0.0;
  Complex C_fit;
  std::vector<VisibilityPoint> per_tau;
  double residual = 0.0;  // rms of the log-log fit
};

struct OracleConfig {
  double rel_tol = 1e-12;
  int min_degree = 2;
  int max_degree = 12;
};

// Product rules of rising degree on the cone until M(tau) settles to rel_tol.
// mu_fit is minus the least-squares slope of log|M| against log tau; C_fit
// averages tau^{mu_fit} M / rho(target) over the two largest tau.
VisibilityFit visibility_limit_numeric(const ConeRegion& cone, const SpaceTimeFunction& density,
                                       const std::vector<double>& taus, const OracleConfig& cfg = {});

// Geometric progression tau_0, 2 tau_0, ... of length count.
std::vector<double> doubling_taus(double tau0, int count);

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int panels = 0;
};

// Composite Gauss-Legendre with doubling panel counts, Richardson-corrected;
// the error is the change between the last two levels.
QuadratureResult reference_quadrature(const std::function<double(double)>& f, double a, double b,
                                      double target_tol, int order = 8, int max_levels = 20);

struct CalibrationRow {
  int n = 1;
  double c = 0.0;
  double delta = 0.0;
  VisibilityFit fit;
  VisibilityConstant printed;   // analytic_constant
  VisibilityConstant edge;      // edge_constant
  VisibilityConstant triangle;  // triangle_rhs_constant (n = 1)
  Complex ratio;                // printed.C / triangle.C (n = 1)
};

CalibrationRow calibrate(const ConeRegion& cone, const std::vector<double>& taus,
                         const OracleConfig& cfg = {});

// Columns n,c,delta,mu_fit,re_C_fit,im_C_fit,fit_residual,re_C_printed,
// im_C_printed,re_C_edge,im_C_edge,re_C_triangle,im_C_triangle,re_ratio,im_ratio.
void write_calibration_csv(std::ostream& os, const std::vector<CalibrationRow>& rows);

// Columns tau,re_M,im_M,re_scaled,im_scaled,quad_error.
void write_visibility_csv(std::ostream& os, const VisibilityFit& fit);

}  // namespace heatrecon
