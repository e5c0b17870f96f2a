#include "heatrecon/caloric.hpp"

#include "heatrecon/precision.hpp"
#include "heatrecon/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

namespace heatrecon {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw std::invalid_argument(std::string("non-finite ") + what);
}

// Derivative in x at grid node (i, k): fourth-order one-sided at the ends,
// fourth-order centered inside where five points exist.
double node_dx(const GridData& g, int i, int k) {
  const double h = g.h();
  const int n = g.nx;
  auto u = [&](int j) { return g.at(j, k); };
  if (n < 4) {
    if (i == 0) return (u(1) - u(0)) / h;
    if (i == n) return (u(n) - u(n - 1)) / h;
    return (u(i + 1) - u(i - 1)) / (2.0 * h);
  }
  if (i == 0) return (-25.0 * u(0) + 48.0 * u(1) - 36.0 * u(2) + 16.0 * u(3) - 3.0 * u(4)) / (12.0 * h);
  if (i == n)
    return (25.0 * u(n) - 48.0 * u(n - 1) + 36.0 * u(n - 2) - 16.0 * u(n - 3) + 3.0 * u(n - 4)) /
           (12.0 * h);
  if (i == 1) return (-3.0 * u(0) - 10.0 * u(1) + 18.0 * u(2) - 6.0 * u(3) + u(4)) / (12.0 * h);
  if (i == n - 1)
    return (3.0 * u(n) + 10.0 * u(n - 1) - 18.0 * u(n - 2) + 6.0 * u(n - 3) - u(n - 4)) / (12.0 * h);
  return (u(i - 2) - 8.0 * u(i - 1) + 8.0 * u(i + 1) - u(i + 2)) / (12.0 * h);
}

// Bilinear interpolation of f(i, k) over the grid cell containing (x, t).
template <class F>
double bilinear(const GridData& g, double x, double t, F f) {
  const double fx = std::clamp((x - g.x_lo) / g.h(), 0.0, static_cast<double>(g.nx));
  const double ft = std::clamp(t / g.dt(), 0.0, static_cast<double>(g.nt));
  const int i = std::min(static_cast<int>(fx), g.nx - 1);
  const int k = std::min(static_cast<int>(ft), g.nt - 1);
  const double sx = fx - i, st = ft - k;
  return (1 - st) * ((1 - sx) * f(i, k) + sx * f(i + 1, k)) +
         st * ((1 - sx) * f(i, k + 1) + sx * f(i + 1, k + 1));
}

// Thomas algorithm for a tridiagonal system; sub[0] and sup[n-1] are unused.
void solve_tridiagonal(std::vector<double> sub, std::vector<double> diag, std::vector<double> sup,
                       std::vector<double>& rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = sub[i] / diag[i - 1];
    diag[i] -= m * sup[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  rhs[n - 1] /= diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] = (rhs[i] - sup[i] * rhs[i + 1]) / diag[i];
}

template <class R>
R to_r(double v) {
  return R(v);
}

}  // namespace

std::string to_string(FieldKind k) {
  switch (k) {
    case FieldKind::constant: return "constant";
    case FieldKind::exponential: return "exponential";
    case FieldKind::heat_kernel: return "heat_kernel";
    case FieldKind::polynomial: return "polynomial";
    case FieldKind::grid: return "grid";
  }
  return "?";
}

FieldKind parse_field_kind(const std::string& s) {
  for (FieldKind k : {FieldKind::constant, FieldKind::exponential, FieldKind::heat_kernel,
                      FieldKind::polynomial, FieldKind::grid})
    if (to_string(k) == s) return k;
  throw std::invalid_argument("unknown field kind '" + s + "'");
}

void write_grid_csv(std::ostream& os, const GridData& g) {
  os << std::setprecision(17);
  os << "nx,nt,x_lo,x_hi,T\n" << g.nx << ',' << g.nt << ',' << g.x_lo << ',' << g.x_hi << ',' << g.T
     << '\n';
  for (int k = 0; k <= g.nt; ++k) {
    for (int i = 0; i <= g.nx; ++i) os << (i ? "," : "") << g.at(i, k);
    os << '\n';
  }
}

GridData read_grid_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "nx,nt,x_lo,x_hi,T")
    throw std::runtime_error("grid CSV: missing header");
  GridData g;
  char sep;
  if (!std::getline(is, line)) throw std::runtime_error("grid CSV: missing dimensions");
  std::istringstream head(line);
  head >> g.nx >> sep >> g.nt >> sep >> g.x_lo >> sep >> g.x_hi >> sep >> g.T;
  if (!head || g.nx < 1 || g.nt < 1) throw std::runtime_error("grid CSV: bad dimensions");
  g.values.reserve(static_cast<std::size_t>(g.nx + 1) * (g.nt + 1));
  for (int k = 0; k <= g.nt; ++k) {
    if (!std::getline(is, line)) throw std::runtime_error("grid CSV: truncated");
    std::istringstream row(line);
    for (int i = 0; i <= g.nx; ++i) {
      double v;
      if (i) row >> sep;
      row >> v;
      if (!row) throw std::runtime_error("grid CSV: bad value");
      g.values.push_back(v);
    }
  }
  return g;
}

CaloricField CaloricField::analytic(FieldKind kind, const FieldParams& p) {
  if (kind == FieldKind::grid) throw std::invalid_argument("grid fields come from solve_forward");
  if (p.n < 1 || p.n > 3) throw std::invalid_argument("field dimension must be 1, 2 or 3");
  require_finite(p.amplitude, "amplitude");
  if (kind == FieldKind::exponential && p.drift.size() != p.n)
    throw std::invalid_argument("exponential field needs a drift vector of dimension n");
  if (kind == FieldKind::heat_kernel) {
    if (p.source.size() != p.n) throw std::invalid_argument("heat_kernel needs a source point");
    if (!(p.t_source < 0.0)) throw std::invalid_argument("heat_kernel needs t_source < 0");
  }
  CaloricField f;
  f.kind_ = kind;
  f.params_ = p;
  return f;
}

CaloricField CaloricField::from_grid(GridData grid) {
  if (grid.nx < 1 || grid.nt < 1 ||
      grid.values.size() != static_cast<std::size_t>(grid.nx + 1) * (grid.nt + 1))
    throw std::invalid_argument("grid dimensions do not match its values");
  CaloricField f;
  f.kind_ = FieldKind::grid;
  f.params_.n = 1;
  f.grid_ = std::make_shared<const GridData>(std::move(grid));
  return f;
}

CaloricField analytic_solution(FieldKind kind, const FieldParams& params) {
  return CaloricField::analytic(kind, params);
}

template <class R>
R CaloricField::value_at(const std::array<R, 3>& x, const R& t) const {
  using std::exp;
  using std::pow;
  using std::sqrt;
  const int n = params_.n;
  switch (kind_) {
    case FieldKind::constant: return to_r<R>(params_.amplitude);
    case FieldKind::exponential: {
      R e = 0, a2 = 0;
      for (int i = 0; i < n; ++i) {
        const R a = to_r<R>(params_.drift[i]);
        e += a * x[i];
        a2 += a * a;
      }
      return to_r<R>(params_.amplitude) * exp(e + a2 * t);
    }
    case FieldKind::heat_kernel: {
      const R s = t - to_r<R>(params_.t_source);
      R r2 = 0;
      for (int i = 0; i < n; ++i) {
        const R d = x[i] - to_r<R>(params_.source[i]);
        r2 += d * d;
      }
      R norm = 4 * pi_v<R>() * s;
      norm = n == 1 ? sqrt(norm) : (n == 2 ? norm : norm * sqrt(norm));
      return to_r<R>(params_.amplitude) * exp(-r2 / (4 * s)) / norm;
    }
    case FieldKind::polynomial: {
      R v = 2 * n * t;
      for (int i = 0; i < n; ++i) v += x[i] * x[i];
      return v;
    }
    case FieldKind::grid: {
      const double xd = static_cast<double>(x[0]);
      const double td = static_cast<double>(t);
      return to_r<R>(bilinear(*grid_, xd, td, [&](int i, int k) { return grid_->at(i, k); }));
    }
  }
  return R(0);
}

template <class R>
std::array<R, 3> CaloricField::gradient_at(const std::array<R, 3>& x, const R& t) const {
  const int n = params_.n;
  std::array<R, 3> g{R(0), R(0), R(0)};
  switch (kind_) {
    case FieldKind::constant: break;
    case FieldKind::exponential: {
      const R u = value_at<R>(x, t);
      for (int i = 0; i < n; ++i) g[i] = to_r<R>(params_.drift[i]) * u;
      break;
    }
    case FieldKind::heat_kernel: {
      const R u = value_at<R>(x, t);
      const R s = t - to_r<R>(params_.t_source);
      for (int i = 0; i < n; ++i) g[i] = -(x[i] - to_r<R>(params_.source[i])) / (2 * s) * u;
      break;
    }
    case FieldKind::polynomial:
      for (int i = 0; i < n; ++i) g[i] = 2 * x[i];
      break;
    case FieldKind::grid: {
      const double xd = static_cast<double>(x[0]);
      const double td = static_cast<double>(t);
      g[0] = to_r<R>(bilinear(*grid_, xd, td, [&](int i, int k) { return node_dx(*grid_, i, k); }));
      break;
    }
  }
  return g;
}

double CaloricField::value(const SpaceTimePoint& p) const {
  std::array<double, 3> x{};
  for (int i = 0; i < p.dim(); ++i) x[i] = p.x[i];
  return value_at<double>(x, p.t);
}

Vector CaloricField::gradient(const SpaceTimePoint& p) const {
  std::array<double, 3> x{};
  for (int i = 0; i < p.dim(); ++i) x[i] = p.x[i];
  const auto g = gradient_at<double>(x, p.t);
  Vector r(dim());
  for (int i = 0; i < dim(); ++i) r[i] = g[i];
  return r;
}

template double CaloricField::value_at<double>(const std::array<double, 3>&, const double&) const;
template Extended50 CaloricField::value_at<Extended50>(const std::array<Extended50, 3>&,
                                                       const Extended50&) const;
template Extended100 CaloricField::value_at<Extended100>(const std::array<Extended100, 3>&,
                                                         const Extended100&) const;
template std::array<double, 3> CaloricField::gradient_at<double>(const std::array<double, 3>&,
                                                                 const double&) const;
template std::array<Extended50, 3> CaloricField::gradient_at<Extended50>(
    const std::array<Extended50, 3>&, const Extended50&) const;
template std::array<Extended100, 3> CaloricField::gradient_at<Extended100>(
    const std::array<Extended100, 3>&, const Extended100&) const;

CaloricField solve_forward(const ScenarioGeometry& geom, const SpaceFunction& initial,
                           const SpaceTimeFunction& h0, const SpaceTimeFunction& rho,
                           ForwardGrid grid) {
  if (geom.dim() != 1) throw std::invalid_argument("the forward solver is one-dimensional");
  if (grid.nx < 8 || grid.nt < 8) throw std::invalid_argument("forward grid needs nx, nt >= 8");
  GridData g;
  g.nx = grid.nx;
  g.nt = grid.nt;
  g.x_lo = geom.domain.lo[0];
  g.x_hi = geom.domain.hi[0];
  g.T = geom.T;
  const int N = g.nx;
  const double h = g.h(), k = g.dt();
  const double r = k / (h * h);
  g.values.resize(static_cast<std::size_t>(N + 1) * (g.nt + 1));
  std::vector<double> u(N + 1);
  for (int i = 0; i <= N; ++i) {
    u[i] = initial(g.x_lo + i * h);
    require_finite(u[i], "initial data");
  }
  std::copy(u.begin(), u.end(), g.values.begin());

  auto boundary = [&](double t, double& rho_l, double& h_l, double& rho_r, double& h_r) {
    const SpaceTimePoint pl{Vector{g.x_lo}, t}, pr{Vector{g.x_hi}, t};
    rho_l = rho(pl);
    h_l = h0(pl);
    rho_r = rho(pr);
    h_r = h0(pr);
    require_finite(rho_l + h_l + rho_r + h_r, "boundary data");
  };
  // A u + b: second differences with ghost points u_{-1} = u_1 - 2h (rho_l u_0 - h_l)
  // and u_{N+1} = u_{N-1} + 2h (h_r - rho_r u_N).
  auto apply = [&](const std::vector<double>& v, double rl, double hl, double rr, double hr) {
    std::vector<double> out(N + 1);
    out[0] = (2.0 * v[1] - 2.0 * v[0] - 2.0 * h * (rl * v[0] - hl)) / (h * h);
    out[N] = (2.0 * v[N - 1] - 2.0 * v[N] + 2.0 * h * (hr - rr * v[N])) / (h * h);
    for (int i = 1; i < N; ++i) out[i] = (v[i - 1] - 2.0 * v[i] + v[i + 1]) / (h * h);
    return out;
  };

  double rl0, hl0, rr0, hr0;
  boundary(0.0, rl0, hl0, rr0, hr0);
  for (int step = 1; step <= g.nt; ++step) {
    const double t1 = step * k;
    double rl1, hl1, rr1, hr1;
    boundary(t1, rl1, hl1, rr1, hr1);
    const std::vector<double> Au = apply(u, rl0, hl0, rr0, hr0);
    std::vector<double> rhs(N + 1);
    for (int i = 0; i <= N; ++i) rhs[i] = u[i] + 0.5 * k * Au[i];
    // Inhomogeneous boundary part at the new level moves to the right-hand side.
    rhs[0] += 0.5 * k * 2.0 * hl1 / h;
    rhs[N] += 0.5 * k * 2.0 * hr1 / h;
    std::vector<double> sub(N + 1, -0.5 * r), diag(N + 1, 1.0 + r), sup(N + 1, -0.5 * r);
    sup[0] = -r;
    diag[0] = 1.0 + r + r * h * rl1;
    sub[N] = -r;
    diag[N] = 1.0 + r + r * h * rr1;
    solve_tridiagonal(sub, diag, sup, rhs);
    u = rhs;
    std::copy(u.begin(), u.end(), g.values.begin() + static_cast<std::ptrdiff_t>(step) * (N + 1));
    rl0 = rl1;
    hl0 = hl1;
    rr0 = rr1;
    hr0 = hr1;
  }
  return CaloricField::from_grid(std::move(g));
}

MeasurementSet extract_traces(const CaloricField& field, const ScenarioGeometry& geom,
                              const SpaceTimeFunction& rho, const TraceOrders& orders) {
  geom.check_well_formed();
  const int n = geom.dim();
  if (field.dim() != n) throw std::invalid_argument("field dimension differs from the geometry");
  MeasurementSet data;
  data.n = n;
  for (const GammaPiece& g : geom.gamma) {
    std::vector<double> ts, wt;
    composite_gauss<double>(g.t_lo, g.t_hi, orders.time_panels, orders.time_order, ts, wt);
    std::vector<double> ss{0.0}, ws{1.0};
    if (n == 2) composite_gauss<double>(g.s_lo, g.s_hi, orders.space_panels, orders.space_order, ss, ws);
    const Vector normal = face_normal(n, g.axis, g.side);
    const double face_x = g.side == 1 ? geom.domain.hi[g.axis] : geom.domain.lo[g.axis];
    for (std::size_t a = 0; a < ss.size(); ++a) {
      for (std::size_t b = 0; b < ts.size(); ++b) {
        GammaSample s;
        s.p.x = Vector(n);
        s.p.x[g.axis] = face_x;
        if (n == 2) s.p.x[1 - g.axis] = ss[a];
        s.p.t = ts[b];
        s.normal = normal;
        s.u = field.value(s.p);
        s.flux = field.gradient(s.p).dot(normal);
        s.rho = rho ? rho(s.p) : 0.0;
        s.h0 = s.flux + s.rho * s.u;
        s.weight = ws[a] * wt[b];
        data.gamma.push_back(s);
      }
    }
  }
  std::vector<std::vector<double>> xs(n), wx(n);
  for (int i = 0; i < n; ++i) {
    const double lo = std::max(geom.U.lo[i], geom.domain.lo[i]);
    const double hi = std::min(geom.U.hi[i], geom.domain.hi[i]);
    composite_gauss<double>(lo, hi, orders.initial_panels, orders.initial_order, xs[i], wx[i]);
  }
  const std::size_t m0 = xs[0].size(), m1 = n == 2 ? xs[1].size() : 1;
  for (std::size_t a = 0; a < m0; ++a) {
    for (std::size_t b = 0; b < m1; ++b) {
      InitialSample s;
      s.x = Vector(n);
      s.x[0] = xs[0][a];
      s.weight = wx[0][a];
      if (n == 2) {
        s.x[1] = xs[1][b];
        s.weight *= wx[1][b];
      }
      s.u = field.value({s.x, 0.0});
      data.initial.push_back(s);
    }
  }
  return data;
}

void add_noise(MeasurementSet& data, const NoiseSpec& noise) {
  if (noise.amplitude == 0.0) return;
  if (!(noise.amplitude > 0.0)) throw std::invalid_argument("noise amplitude must be nonnegative");
  std::mt19937_64 rng(noise.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto draw = [&]() { return noise.amplitude * (noise.kind == NoiseKind::uniform ? uni(rng) : gauss(rng)); };
  for (GammaSample& s : data.gamma) {
    s.u += draw();
    s.flux += draw();
    s.h0 = s.flux + s.rho * s.u;
  }
  for (InitialSample& s : data.initial) s.u += draw();
}

double heat_equation_residual(const CaloricField& field, const SpaceTimePoint& p, double h) {
  const double ut = (field.value({p.x, p.t + h}) - field.value({p.x, p.t - h})) / (2.0 * h);
  double lap = 0.0;
  for (int i = 0; i < p.dim(); ++i) {
    Vector e(p.dim());
    e[i] = h;
    lap += (field.value({p.x + e, p.t}) - 2.0 * field.value(p) + field.value({p.x - e, p.t})) / (h * h);
  }
  return std::abs(ut - lap);
}

}  // namespace heatrecon
