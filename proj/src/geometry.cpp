#include "heatrecon/geometry.hpp"

#include "heatrecon/quadrature.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace heatrecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using Vec3c = Eigen::Vector3cd;
using Vec3 = Eigen::Vector3d;

// Sorted distinct breakpoints of [lo, hi] together with the given cuts.
std::vector<double> breakpoints(double lo, double hi, std::vector<double> cuts) {
  std::vector<double> r{lo, hi};
  for (double c : cuts)
    if (c > lo && c < hi) r.push_back(c);
  std::sort(r.begin(), r.end());
  r.erase(std::unique(r.begin(), r.end()), r.end());
  return r;
}

// Supremum of f over the closure of the union of grid cells not covered.
// The grid is the product of the per-axis breakpoint lists; f is affine, so
// only cell corners matter.
double sup_over_uncovered(const std::vector<std::vector<double>>& axes,
                          const std::function<bool(const std::vector<double>&)>& covered,
                          const std::function<double(const std::vector<double>&)>& f) {
  const int d = static_cast<int>(axes.size());
  std::vector<int> idx(d, 0);
  double sup = -kInf;
  while (true) {
    std::vector<double> center(d);
    for (int k = 0; k < d; ++k) center[k] = 0.5 * (axes[k][idx[k]] + axes[k][idx[k] + 1]);
    if (!covered(center)) {
      for (int corner = 0; corner < (1 << d); ++corner) {
        std::vector<double> p(d);
        for (int k = 0; k < d; ++k) p[k] = axes[k][idx[k] + ((corner >> k) & 1)];
        sup = std::max(sup, f(p));
      }
    }
    int k = 0;
    while (k < d && ++idx[k] + 1 >= static_cast<int>(axes[k].size())) idx[k++] = 0;
    if (k == d) break;
  }
  return sup;
}

Vec3 to3(const SpaceTimePoint& p) { return {p.x[0], p.x[1], p.t}; }

Vec3c theta_vector(const ProbeDirection& probe) {
  const Vector& w = probe.omega;
  const Vector& wp = *probe.omega_perp;
  const double c = probe.c;
  return {Complex(c * w[0], c * wp[0]), Complex(c * w[1], c * wp[1]), Complex(-1.0, 0.0)};
}

Complex theta_dot(const ProbeDirection& probe, const SpaceTimePoint& e) {
  const int n = e.dim();
  const double c = probe.c;
  Complex s = -e.t;
  for (int i = 0; i < n; ++i) s += Complex(c * probe.omega[i], c * (*probe.omega_perp)[i]) * e.x[i];
  return s;
}

// Outward unit normal of the face (p, q, r) of a tetrahedron whose remaining vertex is opp.
Vec3 outward_normal(const Vec3& p, const Vec3& q, const Vec3& r, const Vec3& opp) {
  Vec3 nrm = (q - p).cross(r - p);
  const double len = nrm.norm();
  const double scale = std::max({(q - p).norm(), (r - p).norm(), 1e-300});
  if (len < 1e-12 * scale * scale) throw std::invalid_argument("degenerate cone: zero-area face");
  nrm /= len;
  if (nrm.dot(opp - p) > 0.0) nrm = -nrm;
  return nrm;
}

double orientation(const std::vector<Vector>& cols) {
  const int n = static_cast<int>(cols.size());
  Eigen::MatrixXd m(n, n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) m(i, j) = cols[j][i];
  return m.determinant();
}

Eigen::MatrixXd edge_matrix(const ConeRegion& cone) {
  const int d = cone.n + 1;
  Eigen::MatrixXd E(d, d);
  for (int j = 0; j < d; ++j) {
    const SpaceTimePoint e = cone.edge(j);
    for (int i = 0; i < cone.n; ++i) E(i, j) = e.x[i];
    E(cone.n, j) = e.t;
  }
  return E;
}

double factorial(int k) {
  double r = 1.0;
  for (int i = 2; i <= k; ++i) r *= i;
  return r;
}

}  // namespace

bool Box::contains_open(const Vector& x) const {
  for (int i = 0; i < dim(); ++i)
    if (!(x[i] > lo[i] && x[i] < hi[i])) return false;
  return true;
}

void ScenarioGeometry::check_well_formed() const {
  const int n = dim();
  if (n < 1 || n > 2) throw std::invalid_argument("domain must be an interval or a rectangle");
  if (domain.hi.size() != n) throw std::invalid_argument("domain bounds differ in dimension");
  for (int i = 0; i < n; ++i)
    if (!(domain.lo[i] < domain.hi[i])) throw std::invalid_argument("domain is empty");
  if (!(T > 0.0) || !std::isfinite(T)) throw std::invalid_argument("T must be positive");
  if (U.lo.size() != n || U.hi.size() != n) throw std::invalid_argument("U differs in dimension");
  for (int i = 0; i < n; ++i)
    if (!(U.lo[i] < U.hi[i])) throw std::invalid_argument("U is empty");
  if (gamma.empty()) throw std::invalid_argument("Gamma is empty");
  for (const GammaPiece& g : gamma) {
    if (g.axis < 0 || g.axis >= n || (g.side != 0 && g.side != 1))
      throw std::invalid_argument("Gamma piece is not on a face of the domain");
    if (!(g.t_lo < g.t_hi) || g.t_lo < 0.0 || g.t_hi > T)
      throw std::invalid_argument("Gamma time window must be a nonempty part of (0, T)");
    if (n == 2) {
      const int o = 1 - g.axis;
      if (!(g.s_lo < g.s_hi) || g.s_lo < domain.lo[o] || g.s_hi > domain.hi[o])
        throw std::invalid_argument("Gamma piece leaves its face");
    }
  }
  if (target.dim() != n) throw std::invalid_argument("target differs in dimension");
  if (!domain.contains_open(target.x) || !(target.t > 0.0 && target.t < T))
    throw std::invalid_argument("target must lie strictly inside Omega x (0, T)");
}

Vector face_normal(int n, int axis, int side) {
  Vector v(n);
  v[axis] = side == 1 ? 1.0 : -1.0;
  return v;
}

double Margins::min() const { return std::min({final_time, initial_data, lateral_boundary}); }

ConfigurationRejected::ConfigurationRejected(std::string condition, double margin)
    : std::runtime_error("configuration rejected: " + condition + " fails (margin " +
                         std::to_string(margin) + ")"),
      condition_(std::move(condition)),
      margin_(margin) {}

Margins compute_margins(const ScenarioGeometry& geom, const ProbeDirection& probe) {
  geom.check_well_formed();
  const int n = geom.dim();
  if (probe.dim() != n) throw std::invalid_argument("probe dimension differs from the domain");
  const double l0 = probe_level(probe, geom.target);
  auto level = [&](const Vector& x, double t) { return probe_level(probe, {x, t}); };
  const Box& dom = geom.domain;

  Margins m;
  {
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < n; ++i) axes.push_back({dom.lo[i], dom.hi[i]});
    const double sup = sup_over_uncovered(
        axes, [](const std::vector<double>&) { return false; },
        [&](const std::vector<double>& p) {
          Vector x(n);
          for (int i = 0; i < n; ++i) x[i] = p[i];
          return level(x, geom.T);
        });
    m.final_time = l0 - sup;
  }
  {
    std::vector<std::vector<double>> axes;
    for (int i = 0; i < n; ++i)
      axes.push_back(breakpoints(dom.lo[i], dom.hi[i], {geom.U.lo[i], geom.U.hi[i]}));
    const double sup = sup_over_uncovered(
        axes,
        [&](const std::vector<double>& p) {
          Vector x(n);
          for (int i = 0; i < n; ++i) x[i] = p[i];
          return geom.U.contains_open(x);
        },
        [&](const std::vector<double>& p) {
          Vector x(n);
          for (int i = 0; i < n; ++i) x[i] = p[i];
          return level(x, 0.0);
        });
    m.initial_data = l0 - sup;
  }
  {
    double sup = -kInf;
    for (int axis = 0; axis < n; ++axis) {
      for (int side = 0; side < 2; ++side) {
        std::vector<const GammaPiece*> pieces;
        for (const GammaPiece& g : geom.gamma)
          if (g.axis == axis && g.side == side) pieces.push_back(&g);
        std::vector<double> tcuts, scuts;
        for (const GammaPiece* g : pieces) {
          tcuts.push_back(g->t_lo);
          tcuts.push_back(g->t_hi);
          scuts.push_back(g->s_lo);
          scuts.push_back(g->s_hi);
        }
        const int o = 1 - axis;
        std::vector<std::vector<double>> axes{breakpoints(0.0, geom.T, tcuts)};
        if (n == 2) axes.push_back(breakpoints(dom.lo[o], dom.hi[o], scuts));
        const double face_x = side == 1 ? dom.hi[axis] : dom.lo[axis];
        auto point = [&](const std::vector<double>& p) {
          Vector x(n);
          x[axis] = face_x;
          if (n == 2) x[o] = p[1];
          return x;
        };
        const double s = sup_over_uncovered(
            axes,
            [&](const std::vector<double>& p) {
              for (const GammaPiece* g : pieces) {
                const bool in_t = p[0] > g->t_lo && p[0] < g->t_hi;
                const bool in_s = n == 1 || (p[1] > g->s_lo && p[1] < g->s_hi);
                if (in_t && in_s) return true;
              }
              return false;
            },
            [&](const std::vector<double>& p) { return level(point(p), p[0]); });
        sup = std::max(sup, s);
      }
    }
    m.lateral_boundary = l0 - sup;
  }
  return m;
}

Margins validate_config(const ScenarioGeometry& geom, const ProbeDirection& probe) {
  const Margins m = compute_margins(geom, probe);
  if (!(m.final_time > 0.0))
    throw ConfigurationRejected("final-time half-space condition on Omega x {T}", m.final_time);
  if (!(m.initial_data > 0.0))
    throw ConfigurationRejected("initial-data half-space condition on (Omega \\ U) x {0}",
                                m.initial_data);
  if (!(m.lateral_boundary > 0.0))
    throw ConfigurationRejected(
        "lateral-boundary half-space condition on (boundary of Omega x (0,T)) \\ Gamma",
        m.lateral_boundary);
  return m;
}

double ConeRegion::volume() const {
  return std::abs(edge_matrix(*this).determinant()) / factorial(n + 1);
}

double ConeRegion::t_max() const {
  double t = -kInf;
  for (const SpaceTimePoint& v : vertices) t = std::max(t, v.t);
  return t;
}

std::vector<Vector> default_aux_points(const SpaceTimePoint& target, const ProbeDirection& probe,
                                       double delta) {
  const int n = probe.dim();
  const double c = probe.c;
  const double L = (delta / c) * std::sqrt(1.0 + c * c);
  const Vector base = target.x - L * probe.omega;
  if (n == 1) return {};
  const Vector& wp = *probe.omega_perp;
  if (n == 2) {
    const double sign = orientation({probe.omega, wp}) > 0.0 ? 1.0 : -1.0;
    return {base + (sign * L) * wp, base - (sign * L) * wp};
  }
  const Vector& w = probe.omega;
  Vector v(3);
  v[0] = w[1] * wp[2] - w[2] * wp[1];
  v[1] = w[2] * wp[0] - w[0] * wp[2];
  v[2] = w[0] * wp[1] - w[1] * wp[0];
  const double h = std::sqrt(3.0) / 2.0;
  std::vector<Vector> pts{base + L * wp, base + (-0.5 * L) * wp + (h * L) * v,
                          base + (-0.5 * L) * wp + (-h * L) * v};
  if (orientation({w, pts[0] - pts[1], pts[2] - pts[1]}) < 0.0) std::swap(pts[0], pts[2]);
  return pts;
}

ConeRegion build_cone(int n, const SpaceTimePoint& target, const ProbeDirection& probe,
                      double delta, const std::vector<Vector>& aux_in) {
  if (n < 1 || n > 3 || target.dim() != n || probe.dim() != n)
    throw std::invalid_argument("cone dimension mismatch");
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  const double c = probe.c;
  const double rc = std::sqrt(1.0 + c * c);
  const double L = (delta / c) * rc;
  ConeRegion cone;
  cone.n = n;
  cone.target = target;
  cone.probe = probe;
  cone.delta = delta;
  const SpaceTimePoint apex{target.x, target.t + delta * rc};
  cone.vertices.push_back(target);
  if (n == 1) {
    cone.vertices.push_back({target.x - L * probe.omega, target.t});
    cone.vertices.push_back(apex);
  } else {
    std::vector<Vector> aux = aux_in.empty() ? default_aux_points(target, probe, delta) : aux_in;
    if (static_cast<int>(aux.size()) != n)
      throw std::invalid_argument("cone needs exactly n aux points");
    const double plane = target.x.dot(probe.omega) - L;
    for (const Vector& x : aux) {
      if (x.size() != n) throw std::invalid_argument("aux point dimension mismatch");
      if (std::abs(x.dot(probe.omega) - plane) > 1e-8)
        throw std::invalid_argument("aux point off the plane x.omega = x0.omega - (delta/c)sqrt(1+c^2)");
    }
    std::vector<Vector> cols{probe.omega, aux[0] - aux[1]};
    if (n == 3) cols.push_back(aux[2] - aux[1]);
    const double det = orientation(cols);
    double scale = 1.0;
    for (std::size_t k = 1; k < cols.size(); ++k) scale *= cols[k].norm();
    if (!(det > 1e-12 * scale)) throw std::invalid_argument("aux points are not positively oriented");
    for (const Vector& x : aux) cone.vertices.push_back({x, target.t});
    cone.vertices.push_back(apex);
    cone.aux_points = aux;
  }
  const double l0 = probe_level(probe, target);
  for (std::size_t k = 1; k < cone.vertices.size(); ++k)
    if (std::abs(l0 - probe_level(probe, cone.vertices[k]) - delta) > 1e-10 * std::max(1.0, delta))
      throw std::logic_error("cone vertex off the delta-plane");
  return cone;
}

double max_cone_delta(const ScenarioGeometry& geom, const ProbeDirection& probe) {
  geom.check_well_formed();
  const ConeRegion unit = build_cone(geom.dim(), geom.target, probe, 1.0);
  const int n = geom.dim();
  double best = kInf;
  auto limit = [&](double p, double d, double lo, double hi) {
    if (d > 0.0) best = std::min(best, (hi - p) / d);
    if (d < 0.0) best = std::min(best, (lo - p) / d);
  };
  for (std::size_t k = 1; k < unit.vertices.size(); ++k) {
    const SpaceTimePoint d = unit.vertices[k] - unit.target;
    for (int i = 0; i < n; ++i)
      limit(geom.target.x[i], d.x[i], geom.domain.lo[i], geom.domain.hi[i]);
    limit(geom.target.t, d.t, 0.0, geom.T);
  }
  return best;
}

double default_cone_delta(const ScenarioGeometry& geom, const ProbeDirection& probe) {
  const Margins m = validate_config(geom, probe);
  return 0.4 * std::min(m.min(), max_cone_delta(geom, probe));
}

VisibilityConstant analytic_constant(const ConeRegion& cone) {
  const double c = cone.probe.c;
  if (cone.n == 1) return {3.0, Complex(-1.0, -1.0) / (4.0 * c * c * c)};
  const Vec3c theta = theta_vector(cone.probe);
  if (cone.n == 2) {
    const Vec3 p = to3(cone.vertices[0]), v1 = to3(cone.vertices[1]), v2 = to3(cone.vertices[2]),
               apex = to3(cone.vertices[3]);
    const Vec3 nu1 = outward_normal(p, v1, apex, v2);
    const Vec3 nu2 = outward_normal(p, v2, apex, v1);
    const Vec3 nu3 = outward_normal(p, v1, v2, apex);
    const Vec3 u = nu3.cross(nu2);
    const Vec3 v = nu1.cross(nu3);
    const Complex den = (u.cast<Complex>().array() * theta.array()).sum() *
                        (v.cast<Complex>().array() * theta.array()).sum();
    if (std::abs(den) == 0.0) throw std::invalid_argument("degenerate cone");
    return {3.0, u.cross(v).norm() / den};
  }
  Eigen::Matrix3d A;
  Complex prod = 1.0;
  for (int j = 0; j < 3; ++j) {
    const SpaceTimePoint e = cone.edge(j);
    if (std::abs(e.t) > 1e-14) throw std::logic_error("bottom tetrahedron leaves t = t0");
    for (int i = 0; i < 3; ++i) A(i, j) = e.x[i];
    prod *= theta_dot(cone.probe, e);
  }
  const double vol = std::sqrt(std::abs((A.transpose() * A).determinant()));
  if (vol == 0.0 || prod == Complex(0.0)) throw std::invalid_argument("degenerate cone");
  return {4.0, -vol / prod};
}

VisibilityConstant edge_constant(const ConeRegion& cone) {
  const int d = cone.n + 1;
  const double det = std::abs(edge_matrix(cone).determinant());
  if (det == 0.0) throw std::invalid_argument("degenerate cone");
  if (cone.n >= 2) {
    Complex prod = 1.0;
    for (int j = 0; j < d; ++j) prod *= theta_dot(cone.probe, cone.edge(j));
    return {static_cast<double>(d), (d % 2 == 0 ? 1.0 : -1.0) * det / prod};
  }
  // n = 1: an edge with a time component has exponent -2i c^2 tau^2 e_t to
  // leading order, a time-free edge c tau (1 + i) omega e_x.
  const double c = cone.probe.c;
  const double w = cone.probe.omega[0];
  Complex lead = 1.0;
  int power = 0;
  int time_free = 0;
  for (int j = 0; j < 2; ++j) {
    const SpaceTimePoint e = cone.edge(j);
    if (e.t != 0.0) {
      lead *= Complex(0.0, -2.0 * c * c * e.t);
      power += 2;
    } else {
      lead *= Complex(c * w * e.x[0], c * w * e.x[0]);
      power += 1;
      ++time_free;
    }
  }
  if (time_free != 1) throw std::invalid_argument("triangle needs exactly one time-free edge");
  return {static_cast<double>(power), det / lead};
}

VisibilityConstant triangle_rhs_constant(const ConeRegion& cone) {
  if (cone.n != 1) throw std::invalid_argument("triangle constant is defined for n = 1");
  const double c = cone.probe.c;
  auto dist = [](const SpaceTimePoint& a, const SpaceTimePoint& b) {
    const SpaceTimePoint d = a - b;
    return std::sqrt(d.x.dot(d.x) + d.t * d.t);
  };
  const SpaceTimePoint& P = cone.vertices[0];
  const SpaceTimePoint& P0 = cone.vertices[1];
  const SpaceTimePoint& P1 = cone.vertices[2];
  const double d10 = dist(P1, P0);
  const Complex rhs = Complex(0.0, -d10 * d10) /
                      (dist(P1, P) * Complex(std::sqrt(c * c + 1.0), (c / cone.delta) * dist(P0, P)));
  return {3.0, rhs / (2.0 * c * c)};
}

ConeQuadrature cone_quadrature(const ConeRegion& cone, int order) {
  if (order < 1) throw std::invalid_argument("cone quadrature order must be positive");
  const int d = cone.n + 1;
  const double det = std::abs(edge_matrix(cone).determinant());
  std::vector<GaussRule<double>> rules;
  for (int k = 0; k < d; ++k) rules.push_back(gauss_jacobi_unit(order, d - 1 - k));
  ConeQuadrature q;
  std::vector<int> idx(d, 0);
  while (true) {
    double w = det;
    double remaining = 1.0;
    SpaceTimePoint p = cone.target;
    for (int k = 0; k < d; ++k) {
      const double u = rules[k].nodes[idx[k]];
      w *= rules[k].weights[idx[k]];
      const double alpha = remaining * u;
      remaining *= 1.0 - u;
      const SpaceTimePoint e = cone.edge(k);
      p.x += alpha * e.x;
      p.t += alpha * e.t;
    }
    q.nodes.push_back(p);
    q.weights.push_back(w);
    int k = 0;
    while (k < d && ++idx[k] >= order) idx[k++] = 0;
    if (k == d) break;
  }
  return q;
}

std::vector<std::array<int, 4>> multi_indices(int d, int degree) {
  std::vector<std::array<int, 4>> out;
  for (int total = 0; total <= degree; ++total) {
    std::array<int, 4> m{};
    std::function<void(int, int)> rec = [&](int k, int left) {
      if (k == d - 1) {
        m[k] = left;
        out.push_back(m);
        return;
      }
      for (int v = left; v >= 0; --v) {
        m[k] = v;
        rec(k + 1, left - v);
      }
    };
    rec(0, total);
  }
  return out;
}

Complex exp_divided_difference(const std::vector<Complex>& nodes_in,
                               const std::vector<int>& mult_in) {
  if (nodes_in.size() != mult_in.size() || nodes_in.empty())
    throw std::invalid_argument("divided difference needs matching nonempty node lists");
  // Nodes closer than 1e-7 of their scale are merged.
  std::vector<Complex> x;
  std::vector<int> r;
  for (std::size_t i = 0; i < nodes_in.size(); ++i) {
    if (mult_in[i] < 1) throw std::invalid_argument("multiplicities must be positive");
    bool merged = false;
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double scale = std::max({1.0, std::abs(x[j]), std::abs(nodes_in[i])});
      if (std::abs(x[j] - nodes_in[i]) < 1e-7 * scale) {
        r[j] += mult_in[i];
        merged = true;
        break;
      }
    }
    if (!merged) {
      x.push_back(nodes_in[i]);
      r.push_back(mult_in[i]);
    }
  }
  // Sum of residues of e^zeta / prod (zeta - x_i)^{r_i}.
  Complex total = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    const int order = r[j];
    std::vector<Complex> series(order, 0.0);
    series[0] = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (i == j) continue;
      const Complex dd = x[j] - x[i];
      std::vector<Complex> f(order);
      Complex coef = std::pow(dd, -r[i]);
      for (int k = 0; k < order; ++k) {
        f[k] = coef;
        coef *= -static_cast<double>(r[i] + k) / static_cast<double>(k + 1) / dd;
      }
      std::vector<Complex> prod(order, 0.0);
      for (int a = 0; a < order; ++a)
        for (int b = 0; a + b < order; ++b) prod[a + b] += series[a] * f[b];
      series = prod;
    }
    Complex coeff = 0.0;
    double inv_fact = 1.0;
    for (int k = 0; k < order; ++k) {
      if (k > 0) inv_fact /= k;
      coeff += inv_fact * series[order - 1 - k];
    }
    total += std::exp(x[j]) * coeff;
  }
  return total;
}

std::vector<Complex> exponential_moments(const ConeRegion& cone, const ComplexFrequency& z,
                                         int degree) {
  if (z.dim() != cone.n) throw std::invalid_argument("frequency dimension differs from the cone");
  const int d = cone.n + 1;
  const double det = std::abs(edge_matrix(cone).determinant());
  std::vector<Complex> kappa(d);
  for (int j = 0; j < d; ++j) kappa[j] = phase_exponent(z, cone.edge(j));
  std::vector<Complex> out;
  for (const auto& m : multi_indices(d, degree)) {
    std::vector<Complex> nodes{0.0};
    std::vector<int> mult{1};
    double fact = 1.0;
    for (int j = 0; j < d; ++j) {
      nodes.push_back(kappa[j]);
      mult.push_back(m[j] + 1);
      fact *= factorial(m[j]);
    }
    out.push_back(det * fact * exp_divided_difference(nodes, mult));
  }
  return out;
}

}  // namespace heatrecon
