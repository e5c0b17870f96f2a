#include "experiment.hpp"

#include "heatrecon/kernel_checks.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace heatrecon;
using namespace heatrecon::cli;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string config_path(const std::string& name) { return std::string(HEATRECON_CONFIG_DIR) + "/" + name; }

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

std::string fmt(Complex v) { return "(" + fmt(v.real()) + ", " + fmt(v.imag()) + ")"; }

Outcome from_check(const CheckResult& r) { return {r.pass, r.name + ": measured " + fmt(r.measured) + " threshold " + fmt(r.threshold) + (r.detail.empty() ? "" : " (" + r.detail + ")")}; }

KernelConfig tight_kernel() {
  KernelConfig k;
  k.quad_tol = 1e-13;
  k.exterior_cutoff_eps = 1e-17;
  return k;
}

Outcome kernel_residual() {
  const CheckResult r = check_heat_residual(200, 11, tight_kernel());
  Outcome o = from_check(r);
  o.pass = o.pass && r.threshold <= 1e-4 && r.seconds < 10.0;
  return o;
}

Outcome representation_laws() {
  const CheckResult s = check_scaling_law(100, 13, tight_kernel());
  const CheckResult t = check_translation_law(100, 14, tight_kernel());
  return {s.pass && t.pass && s.threshold <= 1e-9 && t.threshold <= 1e-9,
          from_check(s).detail + "; " + from_check(t).detail};
}

Outcome bessel_reduction() {
  const CheckResult r = check_bessel_reduction(100, 15, tight_kernel());
  Outcome o = from_check(r);
  o.pass = o.pass && r.threshold <= 1e-8;
  return o;
}

Outcome decay() {
  const CheckResult r = check_decay(50, 16, KernelConfig{});
  Outcome o = from_check(r);
  o.pass = o.pass && r.threshold <= 0.5;
  return o;
}

Outcome visibility() {
  bool ok = true;
  std::string detail;
  for (double c : {1.0, 2.0}) {
    const double delta = 0.1;
    const ConeRegion cone = build_cone(1, {Vector{0.5}, 0.5}, make_probe(c, Vector{1.0}), delta);
    const CalibrationRow row = calibrate(cone, doubling_taus(400.0, 4));
    const Complex expected = Complex(-1.0, -1.0) * delta * (1.0 + c * c) / (4.0 * std::pow(c, 4));
    const double mu_err = std::abs(row.fit.mu_fit - 3.0);
    const double c_err = std::abs(row.fit.C_fit - expected) / std::abs(expected);
    const double want_ratio = c / (delta * (1.0 + c * c));
    const double ratio_err = std::abs(row.printed.C / row.fit.C_fit - want_ratio) / want_ratio;
    const double vertex_err = std::abs(row.fit.C_fit - row.printed.C) / std::abs(row.printed.C);
    ok = ok && mu_err <= 0.05 && c_err <= 0.01 && ratio_err <= 0.01;
    detail += "c=" + fmt(c) + ": mu_fit " + fmt(row.fit.mu_fit) + (mu_err <= 0.05 ? " ok" : " FAIL") + ", C_fit " +
              fmt(row.fit.C_fit) + " vs " + fmt(expected) + " rel " + fmt(c_err) + (c_err <= 0.01 ? " ok" : " FAIL") +
              ", ratio " + fmt(std::abs(row.printed.C / row.fit.C_fit)) + " vs " + fmt(want_ratio) +
              (ratio_err <= 0.01 ? " ok" : " FAIL") + ", info: C_fit vs -(1+i)/(4c^3) rel " + fmt(vertex_err) + "; ";
  }
  return {ok, detail};
}

std::string sweep_csv(const SweepReport& r) {
  std::ostringstream os;
  write_sweep_csv(os, r, false);
  return os.str();
}

std::string carleman_heat_csv;

Outcome carleman() {
  bool ok = true;
  std::string detail;
  for (const char* name : {"carleman_1d_constant.cfg", "carleman_1d_exponential.cfg", "carleman_1d_heatkernel.cfg"}) {
    const ExperimentConfig cfg = load_experiment(config_path(name));
    const auto start = std::chrono::steady_clock::now();
    const ReconstructRun run = run_reconstruct(cfg);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const auto& rows = run.report.rows;
    bool decreasing = true;
    for (std::size_t k = 1; k < rows.size(); ++k) decreasing = decreasing && rows[k].rel_error < rows[k - 1].rel_error;
    const double final_err = rows.back().rel_error;
    const bool pass = cfg.taus == std::vector<double>{10, 20, 40, 80} && decreasing && final_err <= 0.02 && secs < 60;
    ok = ok && pass;
    detail += cfg.field.kind + ": errors";
    for (const SweepRow& r : rows) detail += " " + fmt(r.rel_error);
    detail += (decreasing ? " decreasing" : " NOT decreasing") + std::string(", ") + fmt(secs) + " s; ";
    if (cfg.field.kind == "heat_kernel") carleman_heat_csv = sweep_csv(run.report);
  }
  return {ok, detail};
}

Outcome enclosure() {
  const ExperimentConfig cfg = load_experiment(config_path("enclosure_1d_heatkernel.cfg"));
  const auto start = std::chrono::steady_clock::now();
  const ReconstructRun run = run_reconstruct(cfg);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const SweepRow& best = run.report.rows[run.report.trend.stable_row];
  const bool pass = cfg.constant_source == ConstantSource::oracle && !cfg.cone->delta && best.rel_error <= 0.05 &&
                    secs < 300;
  std::string detail = "best stable tau " + fmt(best.tau) + " rel error " + fmt(best.rel_error) + " (errors";
  for (const SweepRow& r : run.report.rows) detail += " " + fmt(r.rel_error);
  detail += "), delta " + fmt(*run.cone_delta) + ", C " + fmt(run.constant->C) + ", " + fmt(secs) + " s";
  return {pass, detail};
}

Outcome integration_by_parts() {
  ScenarioGeometry g;
  g.domain = {Vector{0.0}, Vector{1.0}};
  g.T = 2.0;
  g.gamma = {GammaPiece{0, 1, 0.0, 0.0, 0.0, 2.0}};
  g.U = g.domain;
  g.target = {Vector{0.5}, 0.5};
  FieldParams ep;
  ep.drift = Vector{1.0};
  const CaloricField u1 = analytic_solution(FieldKind::exponential, ep);
  FieldParams hp;
  hp.source = Vector{0.3};
  hp.t_source = -0.5;
  const CaloricField u2 = analytic_solution(FieldKind::heat_kernel, hp);
  BackwardField v1;
  v1.value = [](const SpaceTimePoint& p) { return std::exp(p.x[0] - p.t); };
  v1.gradient = [](const SpaceTimePoint& p) { return Vector{std::exp(p.x[0] - p.t)}; };
  BackwardField v2;
  v2.value = [](const SpaceTimePoint& p) { return p.x[0] * p.x[0] + 2.0 * (2.0 - p.t); };
  v2.gradient = [](const SpaceTimePoint& p) { return Vector{2.0 * p.x[0]}; };
  const double r1 = ibp_residual(u1, v1, g, nullptr, {});
  const double r2 = ibp_residual(u2, v2, g, [](const SpaceTimePoint& p) { return 1.0 + p.t; }, {});
  const BackwardField k = carleman_backward_field(make_z(make_probe(2.0, Vector{1.0}), 2.0), g.target, {});
  const double r3 = ibp_residual(u2, k, g, nullptr, {});
  return {r1 <= 1e-6 && r2 <= 1e-6 && r3 <= 1e-5, "e^{x+t} with e^{x-t}: " + fmt(r1) +
                                                      "; heat kernel with x^2 + 2(2-t), Robin 1+t: " + fmt(r2) +
                                                      "; heat kernel with the Carleman kernel (tau 2): " + fmt(r3)};
}

Outcome forward_solver() {
  ExperimentConfig cfg;
  cfg.forward.levels = {16, 32, 64, 128};
  bool ok = true;
  std::string detail = "ratios";
  for (const ForwardLevel& l : run_forward_study(cfg)) {
    if (std::isnan(l.ratio)) continue;
    ok = ok && std::abs(l.ratio - 4.0) <= 0.5;
    detail += " " + fmt(l.ratio);
  }
  return {ok, detail};
}

Outcome determinism() {
  const ExperimentConfig cfg = load_experiment(config_path("carleman_1d_heatkernel.cfg"));
  setenv("HEATRECON_THREADS", "1", 1);
  const std::string one = sweep_csv(run_reconstruct(cfg).report);
  setenv("HEATRECON_THREADS", "4", 1);
  const std::string four = sweep_csv(run_reconstruct(cfg).report);
  unsetenv("HEATRECON_THREADS");
  const bool same = one == four && one == carleman_heat_csv;
  return {same, same ? "heat_kernel sweep CSV identical for default, 1 and 4 threads"
                     : "CSV differs between thread counts"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"kernel backward-heat residual", kernel_residual},
      {"scaling and translation laws", representation_laws},
      {"radial reduction for n = 2", bessel_reduction},
      {"far-side decay", decay},
      {"visibility calibration", visibility},
      {"Carleman reconstruction, n = 1", carleman},
      {"enclosure reconstruction, n = 1", enclosure},
      {"integration by parts identity", integration_by_parts},
      {"Crank-Nicolson convergence", forward_solver},
      {"determinism across thread counts", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (!o.pass) ++failed;
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << " (" << criteria[i].first << "): " << o.detail
              << " [" << std::fixed << std::setprecision(1) << secs << " s]" << std::defaultfloat << std::endl;
  }
  std::cout << criteria.size() - failed << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
