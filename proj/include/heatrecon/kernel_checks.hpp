#pragma once

#include "heatrecon/check.hpp"
#include "heatrecon/kernel.hpp"

#include <cstdint>
#include <vector>

namespace heatrecon {

// |(d_t + Laplacian) K_z| at p by centered differences, relative to the largest
// |K_z| within one local length ell = min(1/|z|, sqrt|t|/2) divided by ell^2.
double heat_residual(const ComplexFrequency& z, const SpaceTimePoint& p, const KernelConfig& cfg);

// Largest relative mismatch between grad_K_z and centered differences with
// step 1e-5 max(1, |x|), relative to max(|grad K|, |z| |K|).
double gradient_fd_mismatch(const ComplexFrequency& z, const SpaceTimePoint& p,
                            const KernelConfig& cfg);

// int_{|xi|<1} e^{i eta.xi} e^{-beta (1 - |xi|^2)} dxi for n = 2 from a polar
// tensor grid (Gauss-Legendre in r, trapezoid in angle); no Bessel functions.
double ball_integral_tensor_grid(double eta, double beta);
// The same integral through eval_K_z.
double ball_integral_radial(double eta, double beta, const KernelConfig& cfg);

CheckResult check_heat_residual(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_gradient(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_scaling_law(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_translation_law(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_bessel_reduction(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_decay(int points, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_branch_consistency(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_cancellation_guard(int samples, std::uint64_t seed, const KernelConfig& cfg);
CheckResult check_line_closed_form(int samples, std::uint64_t seed, const KernelConfig& cfg);

std::vector<CheckResult> kernel_suite(const KernelConfig& cfg, double sample_scale = 1.0);

}  // namespace heatrecon
