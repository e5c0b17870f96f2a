#pragma once

#include "heatrecon/space_time.hpp"

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace heatrecon {

// Axis-aligned box: an interval for n = 1, a rectangle for n = 2.
struct Box {
  Vector lo;
  Vector hi;

  int dim() const { return lo.size(); }
  bool contains_open(const Vector& x) const;
};

// Part of the lateral boundary: the face {x[axis] = lo or hi} (side 0 or 1),
// restricted to s in [s_lo, s_hi] along the other axis (n = 2 only) and to the
// time window (t_lo, t_hi).
struct GammaPiece {
  int axis = 0;
  int side = 1;
  double s_lo = 0.0;
  double s_hi = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
};

struct ScenarioGeometry {
  Box domain;
  double T = 0.0;
  std::vector<GammaPiece> gamma;
  Box U;
  SpaceTimePoint target;

  int dim() const { return domain.dim(); }
  // Throws std::invalid_argument when the shape itself is malformed.
  void check_well_formed() const;
};

// Outward unit normal of a face.
Vector face_normal(int n, int axis, int side);

struct Margins {
  double final_time = 0.0;        // over Omega x {T}
  double initial_data = 0.0;      // over (Omega \ U) x {0}
  double lateral_boundary = 0.0;  // over (boundary x (0,T)) \ Gamma

  double min() const;
};

class ConfigurationRejected : public std::runtime_error {
 public:
  ConfigurationRejected(std::string condition, double margin);
  const std::string& condition() const { return condition_; }
  double margin() const { return margin_; }

 private:
  std::string condition_;
  double margin_;
};

// Margins of the three half-space conditions without judging them.
Margins compute_margins(const ScenarioGeometry& geom, const ProbeDirection& probe);
// As compute_margins; throws ConfigurationRejected naming the first violated condition.
Margins validate_config(const ScenarioGeometry& geom, const ProbeDirection& probe);

struct VisibilityConstant {
  double mu = 0.0;
  Complex C;
};

// Simplex with vertex 0 at the target. n = 1: P, P0, P1. n = 2: (x0,t0),
// (x1,t0), (x2,t0), apex. n = 3: (x0,t0), (x1,t0), (x2,t0), (x3,t0), apex.
// The apex is (x0, t0 + delta sqrt(1+c^2)).
struct ConeRegion {
  int n = 0;
  SpaceTimePoint target;
  ProbeDirection probe;
  double delta = 0.0;
  std::vector<SpaceTimePoint> vertices;
  std::vector<Vector> aux_points;

  // Edge j runs from the target to vertices[j + 1].
  SpaceTimePoint edge(int j) const { return vertices[j + 1] - vertices[0]; }
  double volume() const;
  // Largest time coordinate over the closure.
  double t_max() const;
};

// Symmetric aux points on the plane x.omega = x0.omega - (delta/c) sqrt(1+c^2).
std::vector<Vector> default_aux_points(const SpaceTimePoint& target, const ProbeDirection& probe,
                                       double delta);

ConeRegion build_cone(int n, const SpaceTimePoint& target, const ProbeDirection& probe,
                      double delta, const std::vector<Vector>& aux = {});

// Largest delta for which the closed cone with default aux points stays in
// the open box Omega x (0, T), scanning the shape once (the cone scales linearly in delta).
double max_cone_delta(const ScenarioGeometry& geom, const ProbeDirection& probe);
// 0.4 min(margins, max_cone_delta).
double default_cone_delta(const ScenarioGeometry& geom, const ProbeDirection& probe);

// Printed closed forms: n = 1 -(1+i)/(4c^3); n = 2 the face-normal triple
// product; n = 3 the bottom-tetrahedron edge product. Throws on degenerate cones.
VisibilityConstant analytic_constant(const ConeRegion& cone);
// Limit of tau^{n+1} e^{-phase(P)} int_D e^{phase} from the edge vectors of the
// simplex (Laplace asymptotics at the vertex).
VisibilityConstant edge_constant(const ConeRegion& cone);
// Triangle right-hand side -i|P1-P0|^2 / (|P1-P| (sqrt(c^2+1) + i (c/delta)|P0-P|))
// divided by the prefactor 2c^2; n = 1 only.
VisibilityConstant triangle_rhs_constant(const ConeRegion& cone);

struct ConeQuadrature {
  std::vector<SpaceTimePoint> nodes;
  std::vector<double> weights;
};

// Collapsed-coordinate Gauss-Jacobi rule with `order` points per direction;
// exact for polynomials of degree 2 order - 1.
ConeQuadrature cone_quadrature(const ConeRegion& cone, int order);

// Multi-indices m with |m| <= degree over d coordinates, in graded order.
std::vector<std::array<int, 4>> multi_indices(int d, int degree);

// With q = P + sum_j alpha_j e_j over the cone edges:
// e^{-phase(P)} int_D e^{phase(q)} alpha(q)^m dq for every multi-index of
// multi_indices(n + 1, degree), evaluated exactly through confluent divided
// differences of exp.
std::vector<Complex> exponential_moments(const ConeRegion& cone, const ComplexFrequency& z,
                                         int degree);

// Divided difference of exp over complex nodes with multiplicities.
Complex exp_divided_difference(const std::vector<Complex>& nodes,
                               const std::vector<int>& multiplicity);

}  // namespace heatrecon
