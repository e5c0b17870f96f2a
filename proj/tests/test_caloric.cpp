#include "doctest.h"

#include "heatrecon/caloric.hpp"
#include "heatrecon/precision.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

using namespace heatrecon;

namespace {

constexpr double kPi = std::numbers::pi;

ScenarioGeometry line_scenario(double T = 2.0) {
  ScenarioGeometry g;
  g.domain = {Vector{0.0}, Vector{1.0}};
  g.T = T;
  g.gamma = {GammaPiece{0, 1, 0.0, 0.0, 0.0, T}};
  g.U = {Vector{0.0}, Vector{1.0}};
  g.target = {Vector{0.5}, 0.5 * T};
  return g;
}

FieldParams heat_params() {
  FieldParams p;
  p.source = Vector{0.3};
  p.t_source = -0.5;
  return p;
}

double max_grid_error(int nx, double T) {
  const ScenarioGeometry g = line_scenario(T);
  auto exact = [](double x, double t) { return std::exp(-kPi * kPi * t) * std::sin(kPi * x); };
  const CaloricField f = solve_forward(
      g, [&](double x) { return exact(x, 0.0); },
      [](const SpaceTimePoint& p) { return -kPi * std::exp(-kPi * kPi * p.t); },
      [](const SpaceTimePoint&) { return 0.0; }, {nx, nx});
  const GridData& d = *f.grid();
  double err = 0.0;
  for (int k = 0; k <= d.nt; ++k)
    for (int i = 0; i <= d.nx; ++i)
      err = std::max(err, std::abs(d.at(i, k) - exact(d.x_lo + i * d.h(), k * d.dt())));
  return err;
}

}  // namespace

TEST_CASE("closed-form field values") {
  FieldParams p;
  p.drift = Vector{1.0};
  const SpaceTimePoint q{Vector{0.5}, 0.5};
  CHECK(analytic_solution(FieldKind::exponential, p).value(q) == doctest::Approx(2.7182818).epsilon(1e-8));
  CHECK(analytic_solution(FieldKind::polynomial, p).value(q) == doctest::Approx(1.25));
  const double hk = analytic_solution(FieldKind::heat_kernel, heat_params()).value(q);
  CHECK(hk == doctest::Approx(0.2792879).epsilon(1e-7));
  CHECK(hk == doctest::Approx(std::exp(-0.01) / std::sqrt(4.0 * kPi)).epsilon(1e-15));
  FieldParams bad = heat_params();
  bad.t_source = 0.0;
  CHECK_THROWS_AS(analytic_solution(FieldKind::heat_kernel, bad), std::invalid_argument);
}

TEST_CASE("analytic kinds solve the heat equation") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0.05, 0.95);
  for (int n : {1, 2}) {
    std::vector<CaloricField> fields;
    FieldParams p;
    p.n = n;
    p.amplitude = 1.3;
    fields.push_back(analytic_solution(FieldKind::constant, p));
    fields.push_back(analytic_solution(FieldKind::polynomial, p));
    p.drift = n == 1 ? Vector{0.7} : Vector{0.7, -0.4};
    fields.push_back(analytic_solution(FieldKind::exponential, p));
    p.source = n == 1 ? Vector{0.3} : Vector{0.3, 0.6};
    p.t_source = -0.5;
    fields.push_back(analytic_solution(FieldKind::heat_kernel, p));
    for (const CaloricField& f : fields) {
      for (int k = 0; k < 100; ++k) {
        SpaceTimePoint q{Vector(n), U(rng)};
        for (int i = 0; i < n; ++i) q.x[i] = U(rng);
        const double scale = std::max(1.0, std::abs(f.value(q)));
        CHECK(heat_equation_residual(f, q, 1e-3) <= 1e-6 * scale);
        const Vector g = f.gradient(q);
        for (int i = 0; i < n; ++i) {
          Vector e(n);
          e[i] = 1e-6;
          const double fd = (f.value({q.x + e, q.t}) - f.value({q.x - e, q.t})) / 2e-6;
          CHECK(std::abs(fd - g[i]) <= 1e-7 * scale);
        }
      }
    }
  }
}

TEST_CASE("extended evaluation agrees with double") {
  const CaloricField f = analytic_solution(FieldKind::heat_kernel, heat_params());
  const std::array<Extended100, 3> x{Extended100(0.75), Extended100(0), Extended100(0)};
  const Extended100 v = f.value_at<Extended100>(x, Extended100(1.25));
  CHECK(static_cast<double>(v) == doctest::Approx(f.value({Vector{0.75}, 1.25})).epsilon(1e-15));
  const auto g = f.gradient_at<Extended100>(x, Extended100(1.25));
  CHECK(static_cast<double>(g[0]) == doctest::Approx(f.gradient({Vector{0.75}, 1.25})[0]).epsilon(1e-15));
}

TEST_CASE("forward solver preserves trivial solutions") {
  const ScenarioGeometry g = line_scenario();
  auto zero = [](const SpaceTimePoint&) { return 0.0; };
  const CaloricField one = solve_forward(g, [](double) { return 1.0; }, zero, zero, {16, 16});
  for (double v : one.grid()->values) CHECK(std::abs(v - 1.0) <= 1e-12);
  const CaloricField nil = solve_forward(g, [](double) { return 0.0; }, zero, zero, {16, 16});
  for (double v : nil.grid()->values) CHECK(v == 0.0);
  CHECK_THROWS_AS(solve_forward(g, [](double) { return 0.0; }, zero, zero, {4, 16}),
                  std::invalid_argument);
}

TEST_CASE("forward solver converges at second order") {
  double prev = max_grid_error(16, 0.2);
  for (int nx : {32, 64, 128}) {
    const double err = max_grid_error(nx, 0.2);
    CHECK(prev / err == doctest::Approx(4.0).epsilon(0.125));
    prev = err;
  }
}

TEST_CASE("forward solver with Robin data reproduces an exponential field") {
  const ScenarioGeometry g = line_scenario(0.5);
  auto exact = [](double x, double t) { return std::exp(x + t); };
  // rho = 2: h0 = du/dnu + 2u with outward normal.
  auto h0 = [&](const SpaceTimePoint& p) {
    const double sgn = p.x[0] > 0.5 ? 1.0 : -1.0;
    return sgn * exact(p.x[0], p.t) + 2.0 * exact(p.x[0], p.t);
  };
  auto rho = [](const SpaceTimePoint&) { return 2.0; };
  double prev = 0.0;
  for (int nx : {32, 64}) {
    const CaloricField f = solve_forward(g, [&](double x) { return exact(x, 0.0); }, h0, rho, {nx, nx});
    const double err = std::abs(f.value({Vector{0.5}, 0.5}) - exact(0.5, 0.5));
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.125));
    prev = err;
  }
}

TEST_CASE("traces of analytic fields") {
  const ScenarioGeometry g = line_scenario();
  FieldParams p;
  p.drift = Vector{1.0};
  const MeasurementSet e = extract_traces(analytic_solution(FieldKind::exponential, p), g, nullptr, {});
  for (const GammaSample& s : e.gamma) {
    CHECK(s.u == doctest::Approx(std::exp(1.0 + s.p.t)));
    CHECK(s.flux == doctest::Approx(std::exp(1.0 + s.p.t)));
  }
  const MeasurementSet c = extract_traces(analytic_solution(FieldKind::constant, p), g, nullptr, {});
  for (const GammaSample& s : c.gamma) {
    CHECK(s.u == 1.0);
    CHECK(s.flux == 0.0);
  }
  const CaloricField hk = analytic_solution(FieldKind::heat_kernel, heat_params());
  const MeasurementSet h = extract_traces(hk, g, nullptr, {});
  for (const GammaSample& s : h.gamma)
    CHECK(s.flux == doctest::Approx(-((1.0 - 0.3) / (2.0 * (s.p.t + 0.5))) * s.u).epsilon(1e-13));
}

TEST_CASE("trace quadrature integrates smooth functions") {
  ScenarioGeometry g;
  g.domain = {Vector{0.0, 0.0}, Vector{1.0, 2.0}};
  g.T = 1.5;
  g.gamma = {GammaPiece{0, 1, 0.0, 2.0, 0.0, 1.5}};
  g.U = {Vector{0.0, 0.0}, Vector{1.0, 2.0}};
  g.target = {Vector{0.5, 0.5}, 0.5};
  FieldParams p;
  p.n = 2;
  p.drift = Vector{0.5, 1.0};
  const MeasurementSet d = extract_traces(analytic_solution(FieldKind::exponential, p), g, nullptr, {});
  double sg = 0.0, su = 0.0;
  for (const GammaSample& s : d.gamma) sg += s.weight * s.u;
  for (const InitialSample& s : d.initial) su += s.weight * s.u;
  // int_0^2 int_0^1.5 e^{0.5 + y + 1.25 t} dt dy and int e^{0.5 x + y} over U.
  const double eg = std::exp(0.5) * (std::exp(2.0) - 1.0) * (std::exp(1.875) - 1.0) / 1.25;
  const double eu = 2.0 * (std::exp(0.5) - 1.0) * (std::exp(2.0) - 1.0);
  CHECK(std::abs(sg - eg) <= 1e-10 * eg);
  CHECK(std::abs(su - eu) <= 1e-10 * eu);
}

TEST_CASE("grid traces use one-sided differences") {
  const ScenarioGeometry g = line_scenario(0.5);
  auto exact = [](double x, double t) { return std::exp(x + t); };
  const CaloricField f = solve_forward(
      g, [&](double x) { return exact(x, 0.0); },
      [&](const SpaceTimePoint& p) { return (p.x[0] > 0.5 ? 1.0 : -1.0) * exact(p.x[0], p.t); },
      [](const SpaceTimePoint&) { return 0.0; }, {128, 128});
  const MeasurementSet d = extract_traces(f, g, nullptr, {4, 8, 1, 1, 4, 8});
  for (const GammaSample& s : d.gamma) CHECK(s.flux == doctest::Approx(exact(1.0, s.p.t)).epsilon(1e-3));
}

TEST_CASE("grid CSV round trip and noise determinism") {
  const ScenarioGeometry g = line_scenario(0.5);
  auto zero = [](const SpaceTimePoint&) { return 0.0; };
  const CaloricField f = solve_forward(g, [](double x) { return x * (1.0 - x); }, zero, zero, {10, 12});
  std::stringstream ss;
  write_grid_csv(ss, *f.grid());
  const GridData back = read_grid_csv(ss);
  CHECK(back.nx == 10);
  CHECK(back.nt == 12);
  CHECK(back.values == f.grid()->values);

  const MeasurementSet clean = extract_traces(f, g, nullptr, {2, 4, 1, 1, 2, 4});
  MeasurementSet a = clean, b = clean;
  add_noise(a, {1e-3, NoiseKind::gaussian, 9});
  add_noise(b, {1e-3, NoiseKind::gaussian, 9});
  for (std::size_t k = 0; k < a.gamma.size(); ++k) {
    CHECK(a.gamma[k].u == b.gamma[k].u);
    CHECK(a.gamma[k].u != clean.gamma[k].u);
    CHECK(a.gamma[k].h0 == doctest::Approx(a.gamma[k].flux));
  }
}
