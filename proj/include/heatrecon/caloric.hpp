#pragma once

#include "heatrecon/geometry.hpp"
#include "heatrecon/space_time.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

namespace heatrecon {

enum class FieldKind { constant, exponential, heat_kernel, polynomial, grid };

std::string to_string(FieldKind k);
FieldKind parse_field_kind(const std::string& s);

// Parameters of the closed-form kinds. exponential: amplitude e^{a.x + |a|^2 t};
// heat_kernel: amplitude (4 pi (t - ts))^{-n/2} e^{-|x - xs|^2 / (4 (t - ts))};
// polynomial: |x|^2 + 2 n t; constant: amplitude.
struct FieldParams {
  int n = 1;
  double amplitude = 1.0;
  Vector drift;
  Vector source;
  double t_source = -1.0;
};

// Space-time samples of a one-dimensional solution: values[k * (nx + 1) + i]
// at x = x_lo + i h, t = k dt.
struct GridData {
  int nx = 0;
  int nt = 0;
  double x_lo = 0.0;
  double x_hi = 1.0;
  double T = 1.0;
  std::vector<double> values;

  double h() const { return (x_hi - x_lo) / nx; }
  double dt() const { return T / nt; }
  double at(int i, int k) const { return values[static_cast<std::size_t>(k) * (nx + 1) + i]; }
};

// Header line "nx,nt,x_lo,x_hi,T" then one row of nx+1 values per time level.
void write_grid_csv(std::ostream& os, const GridData& g);
GridData read_grid_csv(std::istream& is);

class CaloricField {
 public:
  static CaloricField analytic(FieldKind kind, const FieldParams& params);
  static CaloricField from_grid(GridData grid);

  FieldKind kind() const { return kind_; }
  int dim() const { return params_.n; }
  const FieldParams& params() const { return params_; }
  const GridData* grid() const { return grid_.get(); }

  double value(const SpaceTimePoint& p) const;
  Vector gradient(const SpaceTimePoint& p) const;

  // Evaluation in arithmetic R; the grid kind is evaluated in double and converted.
  template <class R>
  R value_at(const std::array<R, 3>& x, const R& t) const;
  template <class R>
  std::array<R, 3> gradient_at(const std::array<R, 3>& x, const R& t) const;

 private:
  FieldKind kind_ = FieldKind::constant;
  FieldParams params_;
  std::shared_ptr<const GridData> grid_;
};

CaloricField analytic_solution(FieldKind kind, const FieldParams& params);

using SpaceTimeFunction = std::function<double(const SpaceTimePoint&)>;
using SpaceFunction = std::function<double(double)>;

struct ForwardGrid {
  int nx = 0;
  int nt = 0;
};

// Crank-Nicolson for u_t = u_xx on the interval of geom with
// du/dnu + rho u = h0 at both ends (ghost points). h0 and rho receive the
// boundary point with its time.
CaloricField solve_forward(const ScenarioGeometry& geom, const SpaceFunction& initial,
                           const SpaceTimeFunction& h0, const SpaceTimeFunction& rho,
                           ForwardGrid grid);

struct GammaSample {
  SpaceTimePoint p;
  Vector normal;
  double u = 0.0;
  double flux = 0.0;  // du/dnu, outward
  double rho = 0.0;
  double h0 = 0.0;    // flux + rho u
  double weight = 0.0;
};

struct InitialSample {
  Vector x;
  double u = 0.0;
  double weight = 0.0;
};

struct MeasurementSet {
  int n = 1;
  std::vector<GammaSample> gamma;
  std::vector<InitialSample> initial;
};

// Composite Gauss-Legendre sampling: panels x order per direction.
struct TraceOrders {
  int time_panels = 16;
  int time_order = 16;
  int space_panels = 4;
  int space_order = 16;
  int initial_panels = 8;
  int initial_order = 16;
};

MeasurementSet extract_traces(const CaloricField& field, const ScenarioGeometry& geom,
                              const SpaceTimeFunction& rho, const TraceOrders& orders);

enum class NoiseKind { uniform, gaussian };

struct NoiseSpec {
  double amplitude = 0.0;
  NoiseKind kind = NoiseKind::uniform;
  std::uint64_t seed = 1;
};

// Adds independent perturbations to u and flux of every sample (h0 follows).
void add_noise(MeasurementSet& data, const NoiseSpec& noise);

// Largest |u_t - Laplacian u| at p by centered differences of step h.
double heat_equation_residual(const CaloricField& field, const SpaceTimePoint& p, double h);

}  // namespace heatrecon
