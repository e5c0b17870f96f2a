#pragma once

#include "heatrecon/space_time.hpp"

#include <array>

namespace heatrecon {

struct KernelConfig {
  double quad_tol = 1e-10;
  int max_panels = 4096;
  double exterior_cutoff_eps = 1e-16;
  // |b|^2 |t| below which t < 0 is evaluated as heat term plus entire part.
  double branch_R = 1.0;

  void validate() const;
};

struct KernelValue {
  PhasedComplex value;
  double est_error = 0.0;
};

struct KernelJet {
  PhasedComplex value;
  std::array<PhasedComplex, 3> grad;
  double est_error = 0.0;
};

// sigma_n(s) with  int_{|xi|=r} e^{i eta.xi} dS = r^{n-1} sigma_n(|eta| r).
double bessel_surface_kernel(int n, double s);
double bessel_surface_kernel_derivative(int n, double s);

// H(-t) (4 pi |t|)^{-n/2} e^{|x|^2/(4t)}, zero for t >= 0.
PhasedComplex backward_heat_term(const SpaceTimePoint& p);

KernelValue eval_w_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);
KernelValue eval_K_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);
std::array<PhasedComplex, 3> grad_K_z(const ComplexFrequency& z, const SpaceTimePoint& p,
                                      const KernelConfig& cfg);
KernelJet eval_K_z_jet(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);
KernelValue eval_G_z(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);

// Which representation eval_K_z uses at p.
enum class KernelBranch { ball, exterior, split, boundary };
KernelBranch kernel_branch(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);

// Forced-branch evaluation for cross-checks; `split` is valid for any t < 0.
KernelJet eval_K_z_branch(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg,
                          KernelBranch branch);

}  // namespace heatrecon
