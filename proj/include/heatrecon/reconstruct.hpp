#pragma once

#include "heatrecon/caloric.hpp"
#include "heatrecon/geometry.hpp"
#include "heatrecon/kernel.hpp"
#include "heatrecon/precision.hpp"
#include "heatrecon/space_time.hpp"

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace heatrecon {

struct ReconstructConfig {
  KernelConfig kernel;
  // Largest phase change (radians) of the integrand across one panel.
  double panel_phase = 256.0;
  // Digits kept relative to an O(1) result after cancellation.
  double target_digits = 12.0;
  // Multiplies every Gauss order (refinement checks).
  double order_factor = 1.0;
  Arithmetic arithmetic = Arithmetic::automatic;
  TraceOrders orders;
  // Total degree of the product rule over the cone (enclosure).
  int lattice_degree = 3;
  // Cone quadrature points per direction for the direct enclosure test function.
  int cone_order = 12;
  double min_target_distance = 1e-6;
};

struct ReconstructionEstimate {
  double tau = 0.0;
  Complex estimate;
  double phase_scale = 1.0;
  double quad_error = 0.0;
  Arithmetic arithmetic = Arithmetic::standard;  // widest tier used
  std::size_t nodes = 0;
};

// Value and outward normal derivative of a test function at a boundary point.
struct TestJet {
  PhasedComplex value;
  PhasedComplex normal_derivative;
};
// The normal is empty for points of the initial slice.
using TestFunction = std::function<TestJet(const SpaceTimePoint& p, const Vector& normal)>;

// int_Gamma ((dv/dnu + rho v) u - h0 v) - int_U v(x,0) u(x,0) over the sample quadrature.
PhasedComplex assemble_I_tau(const MeasurementSet& data, const TestFunction& v,
                             const ScenarioGeometry& geom);

// v(x,t) = K_z(x - x0, t - t0).
TestFunction carleman_test_function(const ComplexFrequency& z, const SpaceTimePoint& target,
                                    const KernelConfig& cfg);

// Part of the boundary of Omega x (0,T) for n = 1. Lateral: x = fixed,
// t in (lo, hi), sign is the outward normal. Slice: t = fixed, x in (lo, hi),
// the term sign * int v u dx.
struct LineSegment {
  bool lateral = true;
  double fixed = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double sign = 1.0;
};

// Gamma and U with the signs of I(tau).
std::vector<LineSegment> known_segments(const ScenarioGeometry& geom);
// The rest of the boundary: with these, known + unknown functionals sum to -u(target).
std::vector<LineSegment> unknown_segments(const ScenarioGeometry& geom);

struct LineFunctional {
  double value = 0.0;
  double quad_error = 0.0;
};

// Boundary functional of K_z(. - target) for n = 1 with the kernel sampled
// once; each panel runs in the narrowest arithmetic that survives the
// cancellation of its e^{phase} magnitude.
class LineCarlemanPlan {
 public:
  LineCarlemanPlan(std::vector<LineSegment> segments, const ProbeDirection& probe,
                   const SpaceTimePoint& target, double tau, const ReconstructConfig& cfg);

  LineFunctional apply(const CaloricField& u) const;
  std::size_t node_count() const;
  Arithmetic widest_tier() const;
  double tau() const { return tau_; }

 private:
  struct Tiers;
  std::shared_ptr<const Tiers> tiers_;
  double tau_ = 0.0;
};

// estimate = -I(tau) with v = K_z(x - x0, t - t0). n = 1 uses LineCarlemanPlan,
// n = 2 the sampled traces in double arithmetic.
ReconstructionEstimate carleman_estimate(const CaloricField& field, const ScenarioGeometry& geom,
                                         const ProbeDirection& probe, double tau,
                                         const ReconstructConfig& cfg);
ReconstructionEstimate carleman_estimate(const MeasurementSet& data, const ScenarioGeometry& geom,
                                         const ProbeDirection& probe, double tau,
                                         const ReconstructConfig& cfg);

// v(p) = int_D K_z(p - q) e^{phase(q)} dq by collapsed cone quadrature; when
// p lies in D the cone is split into simplices with apex p and radial
// coordinate rho^2.
PhasedComplex enclosure_v(const ComplexFrequency& z, const ConeRegion& cone,
                          const SpaceTimePoint& p, const KernelConfig& cfg, int order);
TestFunction enclosure_test_function(const ComplexFrequency& z, const ConeRegion& cone,
                                     const KernelConfig& cfg, int order);

// Product rule over D with e^{phase} weight: nodes on the barycentric lattice
// of total degree `degree`, weights exact for alpha^m, |m| <= degree, scaled
// by e^{-phase(target)}.
// lower_weights: least-norm weights exact to degree - 1 on the same nodes; the
// difference of the two rules estimates the rule error.
struct ConeProductRule {
  std::vector<SpaceTimePoint> nodes;
  std::vector<Complex> weights;
  std::vector<Complex> lower_weights;
};
ConeProductRule cone_product_rule(const ConeRegion& cone, const ComplexFrequency& z, int degree);

// -(1/C) tau^mu e^{-phase(target)} I(tau) with v = enclosure_v, evaluated as
// int_D e^{phase(q)} I_q dq where I_q is the Carleman functional with target q
// (n = 1).
ReconstructionEstimate enclosure_estimate(const CaloricField& field, const ScenarioGeometry& geom,
                                          const ConeRegion& cone, const ProbeDirection& probe,
                                          double tau, const VisibilityConstant& constant,
                                          const ReconstructConfig& cfg);
// Literal form from sampled traces with enclosure_test_function (double
// arithmetic); quad_error bounds the rounding of the assembly only.
ReconstructionEstimate enclosure_estimate(const MeasurementSet& data, const ScenarioGeometry& geom,
                                          const ConeRegion& cone, const ProbeDirection& probe,
                                          double tau, const VisibilityConstant& constant,
                                          const ReconstructConfig& cfg);

struct SweepRow {
  double tau = 0.0;
  Complex estimate;
  std::optional<double> reference;
  double rel_error = 0.0;  // NaN without reference
  double quad_error = 0.0;
  double wall_ms = 0.0;
};

struct SweepTrend {
  bool defined = false;
  double slope = 0.0;           // least squares of log|error| against tau
  std::size_t stable_row = 0;   // last row before successive differences grow
};

struct SweepReport {
  std::vector<SweepRow> rows;
  SweepTrend trend;
};

using Estimator = std::function<ReconstructionEstimate(double tau)>;

SweepReport tau_sweep(const Estimator& estimator, const std::vector<double>& taus,
                      std::optional<double> reference);

// Columns tau,re_estimate,im_estimate,reference,rel_error,quad_error,wall_ms;
// wall_ms is left empty unless with_timing.
void write_sweep_csv(std::ostream& os, const SweepReport& report, bool with_timing);

// Real test function for the integration-by-parts identity. source is
// v_t + Laplacian v (empty means zero); point_source adds -delta at that point.
struct BackwardField {
  std::function<double(const SpaceTimePoint&)> value;
  std::function<Vector(const SpaceTimePoint&)> gradient;
  std::function<double(const SpaceTimePoint&)> source;
  std::optional<SpaceTimePoint> point_source;
};

// Real part of K_z(. - target) with the point source at the target.
BackwardField carleman_backward_field(const ComplexFrequency& z, const SpaceTimePoint& target,
                                      const KernelConfig& cfg);

struct IbpOrders {
  int panels = 32;
  int order = 16;
};

// |LHS - RHS| of
// int_0^T (<dv/dnu + rho v, u> - <du/dnu + rho u, v>) dt
//   = int int f1 u + int u(x,0) v(x,0) dx - int u(x,T) v(x,T) dx
// over the whole boundary of Omega, f1 = v_t + Laplacian v.
double ibp_residual(const CaloricField& u, const BackwardField& v, const ScenarioGeometry& geom,
                    const SpaceTimeFunction& rho, const IbpOrders& orders);

}  // namespace heatrecon
