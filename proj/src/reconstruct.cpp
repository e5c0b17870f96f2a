#include "heatrecon/reconstruct.hpp"

#include "heatrecon/quadrature.hpp"
#include "heatrecon/line_kernel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace heatrecon {

namespace {

PhasedComplex normal_part(const std::array<PhasedComplex, 3>& grad, const Vector& normal) {
  PhasedComplex s;
  for (int i = 0; i < normal.size(); ++i)
    if (normal[i] != 0.0) s = s + grad[i] * Complex(normal[i], 0.0);
  return s;
}

PhasedComplex phased_sum(std::vector<PhasedComplex>& terms) {
  if (terms.empty()) return PhasedComplex::zero();
  std::span<const PhasedComplex> all(terms);
  std::function<PhasedComplex(std::span<const PhasedComplex>)> rec =
      [&](std::span<const PhasedComplex> v) -> PhasedComplex {
    if (v.size() <= 8) {
      PhasedComplex s = v[0];
      for (std::size_t i = 1; i < v.size(); ++i) s = s + v[i];
      return s;
    }
    const std::size_t h = v.size() / 2;
    return rec(v.subspan(0, h)) + rec(v.subspan(h));
  };
  return rec(all);
}

double magnitude(const PhasedComplex& v) {
  return v.is_zero() ? 0.0 : std::exp(std::min(v.log_mag(), 700.0));
}

void check_data(const MeasurementSet& data, const ScenarioGeometry& geom) {
  if (data.n != geom.dim()) throw std::invalid_argument("measurement dimension does not match the domain");
  for (const GammaSample& s : data.gamma)
    if (s.p.dim() != data.n || s.normal.size() != data.n)
      throw std::invalid_argument("measurement sample dimension mismatch");
  for (const InitialSample& s : data.initial)
    if (s.x.size() != data.n) throw std::invalid_argument("measurement sample dimension mismatch");
}

struct Assembled {
  PhasedComplex value;
  double abs_sum = 0.0;
};

Assembled assemble(const MeasurementSet& data, const TestFunction& v, const ScenarioGeometry& geom) {
  check_data(data, geom);
  const std::size_t ng = data.gamma.size();
  const std::size_t n = ng + data.initial.size();
  std::vector<PhasedComplex> terms(n);
  std::vector<double> mags(n);
  parallel_for(n, [&](std::size_t i) {
    PhasedComplex term;
    if (i < ng) {
      const GammaSample& s = data.gamma[i];
      const TestJet j = v(s.p, s.normal);
      term = (j.normal_derivative * Complex(s.weight * s.u, 0.0)) +
             (j.value * Complex(s.weight * (s.rho * s.u - s.h0), 0.0));
      mags[i] = s.weight * (magnitude(j.normal_derivative) * std::abs(s.u) +
                            magnitude(j.value) * (std::abs(s.rho * s.u) + std::abs(s.h0)));
    } else {
      const InitialSample& s = data.initial[i - ng];
      const TestJet j = v({s.x, 0.0}, Vector());
      term = -(j.value * Complex(s.weight * s.u, 0.0));
      mags[i] = s.weight * magnitude(j.value) * std::abs(s.u);
    }
    terms[i] = term;
  });
  Assembled out;
  out.value = phased_sum(terms);
  out.abs_sum = pairwise_sum(mags);
  return out;
}

double segment_distance(const LineSegment& seg, double x, double t) {
  if (seg.lateral) {
    const double tc = std::clamp(t, seg.lo, seg.hi);
    return std::hypot(x - seg.fixed, t - tc);
  }
  const double xc = std::clamp(x, seg.lo, seg.hi);
  return std::hypot(x - xc, t - seg.fixed);
}

void add_gaps(std::vector<std::pair<double, double>> covered, double lo, double hi,
              const std::function<void(double, double)>& emit) {
  std::sort(covered.begin(), covered.end());
  double cur = lo;
  for (const auto& [a, b] : covered) {
    if (a > cur) emit(cur, std::min(a, hi));
    cur = std::max(cur, b);
    if (cur >= hi) return;
  }
  if (cur < hi) emit(cur, hi);
}

template <class R>
struct TierNodes {
  std::vector<R> x, t, w, k, dk;
  std::vector<signed char> normal;  // 0 on slices
  std::vector<double> tol;

  std::size_t size() const { return x.size(); }
};

template <class R>
void append_panel(TierNodes<R>& tn, const LineSegment& seg, double a, double b, int p, int panels, int m,
                  double tol) {
  const GaussRule<R>& g = gauss_legendre<R>(m);
  // Endpoints from one expression so that adjacent panels share them exactly.
  auto at = [&](int k) { return k == panels ? R(b) : R(a) + (R(b) - R(a)) * k / panels; };
  const R lo = at(p), hi = at(p + 1);
  const R half = (hi - lo) / 2;
  const R mid = lo + half;
  for (int i = 0; i < m; ++i) {
    const R s = mid + half * g.nodes[i];
    const R w = half * g.weights[i];
    if (seg.lateral) {
      tn.x.push_back(R(seg.fixed));
      tn.t.push_back(s);
      tn.w.push_back(w);
      tn.normal.push_back(seg.sign > 0 ? 1 : -1);
    } else {
      tn.x.push_back(s);
      tn.t.push_back(R(seg.fixed));
      tn.w.push_back(seg.sign * w);
      tn.normal.push_back(0);
    }
    tn.tol.push_back(tol);
  }
}

template <class R>
void fill_kernel(TierNodes<R>& tn, double a, double bm, const SpaceTimePoint& target) {
  tn.k.resize(tn.size());
  tn.dk.resize(tn.size());
  const R A(a), B(bm), X0(target.x[0]), T0(target.t);
  parallel_for(tn.size(), [&](std::size_t i) {
    const LineJet<R> j = line_kernel_jet<R>(A, B, tn.x[i] - X0, tn.t[i] - T0);
    tn.k[i] = j.value;
    tn.dk[i] = j.dy;
  });
}

template <class R>
Extended100 apply_tier(const TierNodes<R>& tn, const CaloricField& u, double& err) {
  if (tn.size() == 0) return Extended100(0);
  std::vector<R> terms(tn.size());
  parallel_for(tn.size(), [&](std::size_t i) {
    const std::array<R, 3> x{tn.x[i], R(0), R(0)};
    const R v = u.value_at<R>(x, tn.t[i]);
    if (tn.normal[i] != 0) {
      const R ux = u.gradient_at<R>(x, tn.t[i])[0];
      const R nu(tn.normal[i]);
      terms[i] = tn.w[i] * (nu * tn.dk[i] * v - tn.k[i] * nu * ux);
    } else {
      terms[i] = tn.w[i] * tn.k[i] * v;
    }
  });
  // Grid fields carry double rounding whatever the tier.
  const double data_tol = u.grid() ? 4.0 * std::numeric_limits<double>::epsilon() : 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i)
    err += (tn.tol[i] + data_tol) * std::abs(static_cast<double>(terms[i]));
  const R s = pairwise_sum(terms);
  if constexpr (std::is_same_v<R, Extended100>) {
    return s;
  } else {
    return Extended100(s);
  }
}

}  // namespace

PhasedComplex assemble_I_tau(const MeasurementSet& data, const TestFunction& v,
                             const ScenarioGeometry& geom) {
  return assemble(data, v, geom).value;
}

TestFunction carleman_test_function(const ComplexFrequency& z, const SpaceTimePoint& target,
                                    const KernelConfig& cfg) {
  return [z, target, cfg](const SpaceTimePoint& p, const Vector& normal) {
    const SpaceTimePoint q = p - target;
    if (normal.size() == 0) return TestJet{eval_K_z(z, q, cfg).value, PhasedComplex::zero()};
    const KernelJet j = eval_K_z_jet(z, q, cfg);
    return TestJet{j.value, normal_part(j.grad, normal)};
  };
}

std::vector<LineSegment> known_segments(const ScenarioGeometry& geom) {
  if (geom.dim() != 1) throw std::invalid_argument("line segments require n = 1");
  std::vector<LineSegment> out;
  for (const GammaPiece& g : geom.gamma) {
    const double x = g.side == 1 ? geom.domain.hi[0] : geom.domain.lo[0];
    out.push_back({true, x, g.t_lo, g.t_hi, g.side == 1 ? 1.0 : -1.0});
  }
  out.push_back({false, 0.0, geom.U.lo[0], geom.U.hi[0], -1.0});
  return out;
}

std::vector<LineSegment> unknown_segments(const ScenarioGeometry& geom) {
  if (geom.dim() != 1) throw std::invalid_argument("line segments require n = 1");
  std::vector<LineSegment> out;
  for (int side : {0, 1}) {
    std::vector<std::pair<double, double>> cov;
    for (const GammaPiece& g : geom.gamma)
      if (g.side == side) cov.emplace_back(g.t_lo, g.t_hi);
    const double x = side == 1 ? geom.domain.hi[0] : geom.domain.lo[0];
    const double sign = side == 1 ? 1.0 : -1.0;
    add_gaps(cov, 0.0, geom.T, [&](double a, double b) { out.push_back({true, x, a, b, sign}); });
  }
  add_gaps({{geom.U.lo[0], geom.U.hi[0]}}, geom.domain.lo[0], geom.domain.hi[0],
           [&](double a, double b) { out.push_back({false, 0.0, a, b, -1.0}); });
  out.push_back({false, geom.T, geom.domain.lo[0], geom.domain.hi[0], 1.0});
  return out;
}

struct LineCarlemanPlan::Tiers {
  TierNodes<double> d;
  TierNodes<Extended50> e50;
  TierNodes<Extended100> e100;
  Arithmetic widest = Arithmetic::standard;
};

LineCarlemanPlan::LineCarlemanPlan(std::vector<LineSegment> segments, const ProbeDirection& probe,
                                   const SpaceTimePoint& target, double tau,
                                   const ReconstructConfig& cfg)
    : tau_(tau) {
  if (probe.dim() != 1 || target.dim() != 1) throw std::invalid_argument("line plan requires n = 1");
  const ComplexFrequency z = make_z(probe, tau);
  const double a = z.a[0];
  const double bm = std::abs(z.b[0]);
  const double x0 = target.x[0];
  const double t0 = target.t;
  auto tiers = std::make_shared<Tiers>();
  int widest = 0;

  for (const LineSegment& seg : segments) {
    if (!(seg.hi > seg.lo)) continue;
    if (segment_distance(seg, x0, t0) < cfg.min_target_distance)
      throw std::invalid_argument("target lies within the minimum distance of a data set");
    const double inner = seg.lateral ? t0 : x0;
    std::vector<double> cuts{seg.lo};
    if (inner > seg.lo && inner < seg.hi) cuts.push_back(inner);
    cuts.push_back(seg.hi);
    // Geometric grading toward t0 from below, where the backward heat term
    // e^{y^2/(4s)} is flat but not analytic.
    std::vector<char> graded(cuts.size(), 0);
    const double y = seg.fixed - x0;
    if (seg.lateral && y != 0.0) {
      for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        if (cuts[c + 1] != t0) continue;
        const double floor_s = y * y / (4.0 * (cfg.target_digits + 30.0) * std::log(10.0));
        std::vector<double> extra;
        for (double len = (t0 - cuts[c]) / 2.0; len > floor_s; len /= 2.0) extra.push_back(t0 - len);
        cuts.insert(cuts.begin() + static_cast<std::ptrdiff_t>(c) + 1, extra.begin(), extra.end());
        graded.assign(cuts.size(), 0);
        for (std::size_t k = c; k <= c + extra.size(); ++k) graded[k] = 1;
        break;
      }
    }
    const double rate =
        std::max(1.0, seg.lateral ? std::hypot(2.0 * std::abs(a) * bm, tau) : std::hypot(bm, a));
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      const int panels = panels_for_rate(cuts[c + 1] - cuts[c], rate, cfg.panel_phase);
      const double h = (cuts[c + 1] - cuts[c]) / panels;
      for (int p = 0; p < panels; ++p) {
        const double pl = cuts[c] + p * h;
        const double pr = p + 1 == panels ? cuts[c + 1] : cuts[c] + (p + 1) * h;
        auto level = [&](double s) {
          return seg.lateral ? a * (seg.fixed - x0) - tau * (s - t0) : a * (s - x0) - tau * (seg.fixed - t0);
        };
        const double lmax = std::max(level(pl), level(pr)) + std::log(std::max(bm, 1.0));
        const double digits = std::max(lmax, 0.0) / std::log(10.0) + cfg.target_digits;
        const Arithmetic tier = cfg.arithmetic == Arithmetic::automatic ? choose_arithmetic(digits)
                                                                        : cfg.arithmetic;
        const int m0 = gauss_order_for_digits(digits + 1.0, rate * (pr - pl));
        const int m = static_cast<int>(std::ceil(cfg.order_factor * (graded[c] ? std::max(m0, 24) : m0)));
        const double avail = arithmetic_digits(tier);
        const double tol = std::pow(10.0, -(std::min(digits, avail) + 1.0)) + 16.0 * std::pow(10.0, -avail);
        switch (tier) {
          case Arithmetic::extended100:
            append_panel(tiers->e100, seg, cuts[c], cuts[c + 1], p, panels, m, tol);
            widest = std::max(widest, 2);
            break;
          case Arithmetic::extended50:
            append_panel(tiers->e50, seg, cuts[c], cuts[c + 1], p, panels, m, tol);
            widest = std::max(widest, 1);
            break;
          default:
            append_panel(tiers->d, seg, cuts[c], cuts[c + 1], p, panels, m, tol);
        }
      }
    }
  }
  fill_kernel(tiers->d, a, bm, target);
  fill_kernel(tiers->e50, a, bm, target);
  fill_kernel(tiers->e100, a, bm, target);
  tiers->widest = widest == 2 ? Arithmetic::extended100
                              : widest == 1 ? Arithmetic::extended50 : Arithmetic::standard;
  tiers_ = tiers;
}

LineFunctional LineCarlemanPlan::apply(const CaloricField& u) const {
  if (u.dim() != 1) throw std::invalid_argument("line plan requires a one-dimensional field");
  double err = 0.0;
  Extended100 total = apply_tier(tiers_->d, u, err);
  total += apply_tier(tiers_->e50, u, err);
  total += apply_tier(tiers_->e100, u, err);
  return {static_cast<double>(total), err};
}

std::size_t LineCarlemanPlan::node_count() const {
  return tiers_->d.size() + tiers_->e50.size() + tiers_->e100.size();
}

Arithmetic LineCarlemanPlan::widest_tier() const { return tiers_->widest; }

ReconstructionEstimate carleman_estimate(const CaloricField& field, const ScenarioGeometry& geom,
                                         const ProbeDirection& probe, double tau,
                                         const ReconstructConfig& cfg) {
  geom.check_well_formed();
  validate_config(geom, probe);
  if (field.dim() != geom.dim()) throw std::invalid_argument("field dimension does not match the domain");
  if (geom.dim() != 1)
    return carleman_estimate(extract_traces(field, geom, nullptr, cfg.orders), geom, probe, tau, cfg);
  const LineCarlemanPlan plan(known_segments(geom), probe, geom.target, tau, cfg);
  const LineFunctional f = plan.apply(field);
  ReconstructionEstimate e;
  e.tau = tau;
  e.estimate = -f.value;
  e.quad_error = f.quad_error;
  e.arithmetic = plan.widest_tier();
  e.nodes = plan.node_count();
  return e;
}

ReconstructionEstimate carleman_estimate(const MeasurementSet& data, const ScenarioGeometry& geom,
                                         const ProbeDirection& probe, double tau,
                                         const ReconstructConfig& cfg) {
  geom.check_well_formed();
  validate_config(geom, probe);
  const ComplexFrequency z = make_z(probe, tau);
  for (const GammaSample& s : data.gamma)
    if ((s.p - geom.target).x.norm() + std::abs(s.p.t - geom.target.t) < cfg.min_target_distance)
      throw std::invalid_argument("target lies within the minimum distance of a data set");
  const Assembled a = assemble(data, carleman_test_function(z, geom.target, cfg.kernel), geom);
  ReconstructionEstimate e;
  e.tau = tau;
  e.estimate = -a.value.value();
  e.quad_error = a.abs_sum * (cfg.kernel.quad_tol + std::numeric_limits<double>::epsilon());
  e.nodes = data.gamma.size() + data.initial.size();
  return e;
}

namespace {

using Coords = std::array<double, 4>;

Coords coords(const SpaceTimePoint& p) {
  Coords c{};
  for (int i = 0; i < p.dim(); ++i) c[i] = p.x[i];
  c[p.dim()] = p.t;
  return c;
}

SpaceTimePoint point(const Coords& c, int n) {
  SpaceTimePoint p{Vector(n), c[n]};
  for (int i = 0; i < n; ++i) p.x[i] = c[i];
  return p;
}

// Barycentric nodes on the unit simplex of dimension m with weights summing to 1/m!.
std::vector<std::pair<std::vector<double>, double>> unit_simplex_rule(int m, int order) {
  std::vector<std::pair<std::vector<double>, double>> out;
  if (m == 0) {
    out.push_back({{}, 1.0});
    return out;
  }
  std::vector<GaussRule<double>> rules;
  for (int k = 0; k < m; ++k) rules.push_back(gauss_jacobi_unit(order, m - 1 - k));
  std::vector<int> idx(m, 0);
  while (true) {
    std::vector<double> beta(m);
    double w = 1.0, remaining = 1.0;
    for (int k = 0; k < m; ++k) {
      const double u = rules[k].nodes[idx[k]];
      w *= rules[k].weights[idx[k]];
      beta[k] = remaining * u;
      remaining *= 1.0 - u;
    }
    out.push_back({beta, w});
    int k = 0;
    while (k < m && ++idx[k] >= order) idx[k++] = 0;
    if (k == m) break;
  }
  return out;
}

// Simplex conv(p, facet) in d = n + 1 dimensions, with q = p + rho^2 (f - p):
// the r^{-1/2} singularity of the kernel at p becomes smooth in rho.
void apex_rule(const Coords& p, const std::vector<Coords>& facet, int n, int order, ConeQuadrature& out) {
  const int d = n + 1;
  Eigen::MatrixXd E(d, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < d; ++i) E(i, j) = facet[j][i] - p[i];
  const double scale = std::abs(E.determinant());
  if (!(scale > 0.0)) return;
  const GaussRule<double>& g = gauss_legendre<double>(order);
  for (const auto& [beta, wf] : unit_simplex_rule(d - 1, order)) {
    Coords f = facet[0];
    for (int k = 0; k + 1 < d; ++k)
      for (int i = 0; i < d; ++i) f[i] += beta[k] * (facet[k + 1][i] - facet[0][i]);
    for (int r = 0; r < order; ++r) {
      const double rho = 0.5 * (g.nodes[r] + 1.0);
      const double wr = 0.5 * g.weights[r] * 2.0 * std::pow(rho, 2 * d - 1);
      Coords q{};
      for (int i = 0; i < d; ++i) q[i] = p[i] + rho * rho * (f[i] - p[i]);
      out.nodes.push_back(point(q, n));
      out.weights.push_back(scale * wf * wr);
    }
  }
}

bool inside_simplex(const ConeRegion& cone, const SpaceTimePoint& p) {
  const int d = cone.n + 1;
  Eigen::MatrixXd E(d, d);
  Eigen::VectorXd r(d);
  for (int j = 0; j < d; ++j) {
    const SpaceTimePoint e = cone.edge(j);
    for (int i = 0; i < cone.n; ++i) E(i, j) = e.x[i];
    E(cone.n, j) = e.t;
  }
  const SpaceTimePoint q = p - cone.vertices[0];
  for (int i = 0; i < cone.n; ++i) r(i) = q.x[i];
  r(cone.n) = q.t;
  const Eigen::VectorXd al = E.fullPivLu().solve(r);
  return al.minCoeff() > 0.0 && al.sum() < 1.0;
}

ConeQuadrature enclosure_nodes(const ConeRegion& cone, const SpaceTimePoint& p, int order) {
  if (!inside_simplex(cone, p)) return cone_quadrature(cone, order);
  ConeQuadrature all;
  const int n = cone.n;
  const Coords c = coords(p);
  const std::size_t nv = cone.vertices.size();
  for (std::size_t drop = 0; drop < nv; ++drop) {
    std::vector<Coords> facet;
    for (std::size_t j = 0; j < nv; ++j)
      if (j != drop) facet.push_back(coords(cone.vertices[j]));
    // For n = 1 the facet is also cut at t = p.t, where the backward heat term switches on.
    const double t0 = facet[0][n] - c[n], t1 = facet[1][n] - c[n];
    if (n == 1 && t0 * t1 < 0.0) {
      Coords mid{};
      for (int i = 0; i <= n; ++i) mid[i] = facet[0][i] + t0 / (t0 - t1) * (facet[1][i] - facet[0][i]);
      apex_rule(c, {facet[0], mid}, n, order, all);
      apex_rule(c, {mid, facet[1]}, n, order, all);
    } else {
      apex_rule(c, facet, n, order, all);
    }
  }
  return all;
}

}  // namespace

PhasedComplex enclosure_v(const ComplexFrequency& z, const ConeRegion& cone, const SpaceTimePoint& p,
                          const KernelConfig& cfg, int order) {
  const ConeQuadrature q = enclosure_nodes(cone, p, order);
  std::vector<PhasedComplex> terms(q.nodes.size());
  parallel_for(q.nodes.size(), [&](std::size_t k) {
    const SpaceTimePoint d = p - q.nodes[k];
    if (d.x.norm() == 0.0 && d.t == 0.0) return;
    terms[k] = eval_K_z(z, d, cfg).value * PhasedComplex::exp(phase_exponent(z, q.nodes[k])) *
               Complex(q.weights[k], 0.0);
  });
  return phased_sum(terms);
}

TestFunction enclosure_test_function(const ComplexFrequency& z, const ConeRegion& cone,
                                     const KernelConfig& cfg, int order) {
  const ConeQuadrature base = cone_quadrature(cone, order);
  std::vector<PhasedComplex> phases;
  for (const SpaceTimePoint& q : base.nodes) phases.push_back(PhasedComplex::exp(phase_exponent(z, q)));
  return [z, cone, cfg, order, base, phases](const SpaceTimePoint& p, const Vector& normal) {
    if (normal.size() == 0) return TestJet{enclosure_v(z, cone, p, cfg, order), PhasedComplex::zero()};
    if (inside_simplex(cone, p)) throw std::invalid_argument("boundary point inside the cone");
    std::vector<PhasedComplex> v(base.nodes.size()), dv(base.nodes.size());
    for (std::size_t k = 0; k < base.nodes.size(); ++k) {
      const KernelJet j = eval_K_z_jet(z, p - base.nodes[k], cfg);
      const PhasedComplex w = phases[k] * Complex(base.weights[k], 0.0);
      v[k] = j.value * w;
      dv[k] = normal_part(j.grad, normal) * w;
    }
    return TestJet{phased_sum(v), phased_sum(dv)};
  };
}

ConeProductRule cone_product_rule(const ConeRegion& cone, const ComplexFrequency& z, int degree) {
  const int d = cone.n + 1;
  const std::vector<std::array<int, 4>> idx = multi_indices(d, degree);
  const std::vector<Complex> moments = exponential_moments(cone, z, degree);
  const int n = static_cast<int>(idx.size());
  Eigen::MatrixXcd Vt(n, n);
  ConeProductRule rule;
  for (int j = 0; j < n; ++j) {
    std::array<double, 4> alpha{};
    SpaceTimePoint q = cone.vertices[0];
    for (int k = 0; k < d; ++k) {
      alpha[k] = static_cast<double>(idx[j][k]) / degree;
      const SpaceTimePoint e = cone.edge(k);
      q.x += alpha[k] * e.x;
      q.t += alpha[k] * e.t;
    }
    rule.nodes.push_back(q);
    for (int m = 0; m < n; ++m) {
      double v = 1.0;
      for (int k = 0; k < d; ++k) v *= std::pow(alpha[k], idx[m][k]);
      Vt(m, j) = v;
    }
  }
  Eigen::VectorXcd M(n);
  for (int m = 0; m < n; ++m) M(m) = moments[m];
  const Eigen::VectorXcd W = Vt.fullPivLu().solve(M);
  rule.weights.assign(W.data(), W.data() + n);
  const int nl = static_cast<int>(multi_indices(d, degree - 1).size());
  const Eigen::VectorXcd L = Vt.topRows(nl).completeOrthogonalDecomposition().solve(M.head(nl));
  rule.lower_weights.assign(L.data(), L.data() + n);
  return rule;
}

namespace {

void check_constant(const VisibilityConstant& c) {
  if (c.C == Complex(0.0, 0.0) || !std::isfinite(c.C.real()) || !std::isfinite(c.C.imag()))
    throw std::invalid_argument("visibility constant must be finite and nonzero");
}

void check_cone_inside(const ConeRegion& cone, const ScenarioGeometry& geom) {
  for (const SpaceTimePoint& v : cone.vertices) {
    if (!geom.domain.contains_open(v.x) || !(v.t > 0.0) || !(v.t < geom.T))
      throw std::invalid_argument("cone closure must lie inside Omega x (0, T)");
  }
}

}  // namespace

ReconstructionEstimate enclosure_estimate(const CaloricField& field, const ScenarioGeometry& geom,
                                          const ConeRegion& cone, const ProbeDirection& probe,
                                          double tau, const VisibilityConstant& constant,
                                          const ReconstructConfig& cfg) {
  geom.check_well_formed();
  validate_config(geom, probe);
  check_constant(constant);
  check_cone_inside(cone, geom);
  if (geom.dim() != 1 || field.dim() != 1)
    return enclosure_estimate(extract_traces(field, geom, nullptr, cfg.orders), geom, cone, probe, tau,
                              constant, cfg);
  const ComplexFrequency z = make_z(probe, tau);
  const ConeProductRule rule = cone_product_rule(cone, z, cfg.lattice_degree);
  Complex sum = 0.0, lower = 0.0;
  double err = 0.0;
  std::size_t nodes = 0;
  int widest = static_cast<int>(Arithmetic::standard);
  for (std::size_t j = 0; j < rule.nodes.size(); ++j) {
    const LineCarlemanPlan plan(known_segments(geom), probe, rule.nodes[j], tau, cfg);
    const LineFunctional f = plan.apply(field);
    sum += rule.weights[j] * f.value;
    lower += rule.lower_weights[j] * f.value;
    err += std::abs(rule.weights[j]) * f.quad_error;
    nodes += plan.node_count();
    widest = std::max(widest, static_cast<int>(plan.widest_tier()));
  }
  const double scale = std::pow(tau, constant.mu) / std::abs(constant.C);
  ReconstructionEstimate e;
  e.tau = tau;
  e.estimate = -std::pow(tau, constant.mu) * sum / constant.C;
  e.quad_error = scale * (err + std::abs(sum - lower));
  e.phase_scale = std::pow(tau, constant.mu) * std::exp(-phase_exponent(z, cone.target).real());
  e.arithmetic = static_cast<Arithmetic>(widest);
  e.nodes = nodes;
  return e;
}

ReconstructionEstimate enclosure_estimate(const MeasurementSet& data, const ScenarioGeometry& geom,
                                          const ConeRegion& cone, const ProbeDirection& probe,
                                          double tau, const VisibilityConstant& constant,
                                          const ReconstructConfig& cfg) {
  geom.check_well_formed();
  validate_config(geom, probe);
  check_constant(constant);
  check_cone_inside(cone, geom);
  const ComplexFrequency z = make_z(probe, tau);
  const Assembled a = assemble(data, enclosure_test_function(z, cone, cfg.kernel, cfg.cone_order), geom);
  const PhasedComplex shift = PhasedComplex::exp(-phase_exponent(z, cone.target));
  const Complex factor = std::pow(tau, constant.mu) / constant.C;
  ReconstructionEstimate e;
  e.tau = tau;
  e.estimate = -(a.value * shift).value() * factor;
  e.quad_error = a.abs_sum * (shift.is_zero() ? 0.0 : std::exp(shift.log_mag())) * std::abs(factor) *
                 (cfg.kernel.quad_tol + std::numeric_limits<double>::epsilon());
  e.phase_scale = std::pow(tau, constant.mu) * std::exp(shift.log_mag());
  e.nodes = data.gamma.size() + data.initial.size();
  return e;
}

SweepReport tau_sweep(const Estimator& estimator, const std::vector<double>& taus,
                      std::optional<double> reference) {
  if (taus.size() < 3) throw std::invalid_argument("a sweep needs at least three tau values");
  for (std::size_t i = 1; i < taus.size(); ++i)
    if (!(taus[i] > taus[i - 1])) throw std::invalid_argument("sweep taus must be strictly increasing");
  SweepReport rep;
  for (double tau : taus) {
    const auto start = std::chrono::steady_clock::now();
    const ReconstructionEstimate e = estimator(tau);
    const auto stop = std::chrono::steady_clock::now();
    SweepRow r;
    r.tau = tau;
    r.estimate = e.estimate;
    r.reference = reference;
    r.quad_error = e.quad_error;
    r.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
    r.rel_error = reference ? std::abs(e.estimate - *reference) / std::max(std::abs(*reference), 1e-300)
                            : std::numeric_limits<double>::quiet_NaN();
    rep.rows.push_back(r);
  }
  const std::size_t n = rep.rows.size();
  rep.trend.stable_row = n - 1;
  for (std::size_t k = 2; k < n; ++k) {
    const double prev = std::abs(rep.rows[k - 1].estimate - rep.rows[k - 2].estimate);
    const double cur = std::abs(rep.rows[k].estimate - rep.rows[k - 1].estimate);
    if (cur > prev) {
      rep.trend.stable_row = k - 1;
      break;
    }
  }
  bool ok = reference.has_value();
  for (const SweepRow& r : rep.rows) ok = ok && std::isfinite(r.rel_error) && r.rel_error > 0.0;
  if (ok) {
    double st = 0, sl = 0, stt = 0, stl = 0;
    for (const SweepRow& r : rep.rows) {
      const double l = std::log(r.rel_error);
      st += r.tau;
      sl += l;
      stt += r.tau * r.tau;
      stl += r.tau * l;
    }
    const double dn = static_cast<double>(n);
    rep.trend.slope = (dn * stl - st * sl) / (dn * stt - st * st);
    rep.trend.defined = true;
  }
  return rep;
}

void write_sweep_csv(std::ostream& os, const SweepReport& report, bool with_timing) {
  os << "tau,re_estimate,im_estimate,reference,rel_error,quad_error,wall_ms\n";
  std::ostringstream line;
  for (const SweepRow& r : report.rows) {
    line.str("");
    line << std::setprecision(17) << r.tau << ',' << r.estimate.real() << ',' << r.estimate.imag() << ',';
    if (r.reference) line << *r.reference;
    line << ',';
    if (std::isfinite(r.rel_error)) line << r.rel_error;
    line << ',' << r.quad_error << ',';
    if (with_timing) line << std::setprecision(6) << r.wall_ms;
    os << line.str() << '\n';
  }
}

BackwardField carleman_backward_field(const ComplexFrequency& z, const SpaceTimePoint& target,
                                      const KernelConfig& cfg) {
  BackwardField f;
  f.value = [z, target, cfg](const SpaceTimePoint& p) {
    return eval_K_z(z, p - target, cfg).value.value().real();
  };
  f.gradient = [z, target, cfg](const SpaceTimePoint& p) {
    const auto g = grad_K_z(z, p - target, cfg);
    Vector r(p.dim());
    for (int i = 0; i < p.dim(); ++i) r[i] = g[i].value().real();
    return r;
  };
  f.point_source = target;
  return f;
}

namespace {

struct Rule1 {
  std::vector<double> x, w;
};

Rule1 rule_1d(double lo, double hi, int panels, int order, std::optional<double> cut) {
  Rule1 r;
  std::vector<double> cuts{lo};
  if (cut && *cut > lo && *cut < hi) cuts.push_back(*cut);
  cuts.push_back(hi);
  for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
    std::vector<double> x, w;
    composite_gauss<double>(cuts[c], cuts[c + 1], panels, order, x, w);
    r.x.insert(r.x.end(), x.begin(), x.end());
    r.w.insert(r.w.end(), w.begin(), w.end());
  }
  return r;
}

}  // namespace

double ibp_residual(const CaloricField& u, const BackwardField& v, const ScenarioGeometry& geom,
                    const SpaceTimeFunction& rho, const IbpOrders& orders) {
  const int n = geom.dim();
  if (u.dim() != n) throw std::invalid_argument("field dimension does not match the domain");
  if (n < 1 || n > 2) throw std::invalid_argument("identity check supports n = 1, 2");
  std::optional<double> tcut, xcut[2];
  if (v.point_source) {
    tcut = v.point_source->t;
    for (int i = 0; i < n; ++i) xcut[i] = v.point_source->x[i];
  }
  const Rule1 rt = rule_1d(0.0, geom.T, orders.panels, orders.order, tcut);
  Rule1 rx[2];
  for (int i = 0; i < n; ++i)
    rx[i] = rule_1d(geom.domain.lo[i], geom.domain.hi[i], orders.panels, orders.order, xcut[i]);

  // Spatial points of Omega with weights.
  std::vector<std::pair<Vector, double>> omega;
  if (n == 1) {
    for (std::size_t i = 0; i < rx[0].x.size(); ++i) omega.push_back({Vector{rx[0].x[i]}, rx[0].w[i]});
  } else {
    for (std::size_t i = 0; i < rx[0].x.size(); ++i)
      for (std::size_t j = 0; j < rx[1].x.size(); ++j)
        omega.push_back({Vector{rx[0].x[i], rx[1].x[j]}, rx[0].w[i] * rx[1].w[j]});
  }
  // Boundary points of Omega with weights and outward normals.
  struct BPoint {
    Vector x;
    Vector normal;
    double w;
  };
  std::vector<BPoint> bnd;
  for (int axis = 0; axis < n; ++axis)
    for (int side : {0, 1}) {
      const double xf = side == 1 ? geom.domain.hi[axis] : geom.domain.lo[axis];
      const Vector nu = face_normal(n, axis, side);
      if (n == 1) {
        bnd.push_back({Vector{xf}, nu, 1.0});
      } else {
        const int other = 1 - axis;
        for (std::size_t j = 0; j < rx[other].x.size(); ++j) {
          Vector x(2);
          x[axis] = xf;
          x[other] = rx[other].x[j];
          bnd.push_back({x, nu, rx[other].w[j]});
        }
      }
    }

  std::vector<double> lhs(bnd.size() * rt.x.size());
  parallel_for(lhs.size(), [&](std::size_t idx) {
    const BPoint& b = bnd[idx / rt.x.size()];
    const std::size_t k = idx % rt.x.size();
    const SpaceTimePoint p{b.x, rt.x[k]};
    const double r = rho ? rho(p) : 0.0;
    const double uv = u.value(p), vv = v.value(p);
    const double h1 = v.gradient(p).dot(b.normal) + r * vv;
    const double h0 = u.gradient(p).dot(b.normal) + r * uv;
    lhs[idx] = b.w * rt.w[k] * (h1 * uv - h0 * vv);
  });

  std::vector<double> rhs(2 * omega.size());
  parallel_for(omega.size(), [&](std::size_t i) {
    const auto& [x, w] = omega[i];
    const SpaceTimePoint p0{x, 0.0}, p1{x, geom.T};
    rhs[2 * i] = w * u.value(p0) * v.value(p0);
    rhs[2 * i + 1] = -w * u.value(p1) * v.value(p1);
  });
  if (v.source) {
    std::vector<double> vol(omega.size() * rt.x.size());
    parallel_for(vol.size(), [&](std::size_t idx) {
      const auto& [x, w] = omega[idx / rt.x.size()];
      const std::size_t k = idx % rt.x.size();
      const SpaceTimePoint p{x, rt.x[k]};
      vol[idx] = w * rt.w[k] * v.source(p) * u.value(p);
    });
    rhs.push_back(pairwise_sum(vol));
  }
  if (v.point_source) rhs.push_back(-u.value(*v.point_source));
  return std::abs(pairwise_sum(lhs) - pairwise_sum(rhs));
}

}  // namespace heatrecon
