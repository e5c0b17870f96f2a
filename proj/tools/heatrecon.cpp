#include "experiment.hpp"

#include "heatrecon/kernel_checks.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>

using namespace heatrecon;
using namespace heatrecon::cli;

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRejected = 3;

// CSV to output.csv when set, else stdout; the summary goes to the other stream.
template <class Write>
void emit(const std::string& path, Write write, std::ostream*& summary) {
  if (path.empty()) {
    write(std::cout);
    summary = &std::cerr;
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output.csv '" + path + "'");
  write(out);
  summary = &std::cout;
}

int reconstruct(const std::string& config, std::optional<double> tau_max, const std::string& method,
                const std::vector<std::string>& sets) {
  std::vector<std::string> overrides = sets;
  if (!method.empty()) overrides.push_back("method=" + method);
  ExperimentConfig cfg = load_experiment(config, overrides);
  if (tau_max) {
    std::erase_if(cfg.taus, [&](double t) { return t > *tau_max; });
    if (cfg.taus.size() < 3) throw ConfigError("--tau-max leaves fewer than three tau values");
  }
  const ReconstructRun run = run_reconstruct(cfg);
  std::ostream* summary = nullptr;
  emit(cfg.output_path, [&](std::ostream& os) { write_sweep_csv(os, run.report, cfg.timing); }, summary);
  write_reconstruct_summary(*summary, cfg, run);
  return 0;
}

int visibility(const std::string& config, const std::vector<std::string>& sets) {
  const ExperimentConfig cfg = load_experiment(config, sets);
  const std::vector<CalibrationRow> rows = run_visibility_oracle(cfg);
  std::ostream* summary = nullptr;
  emit(cfg.output_path, [&](std::ostream& os) { write_calibration_csv(os, rows); }, summary);
  for (const CalibrationRow& r : rows) {
    *summary << "c " << r.c << ", delta " << r.delta << ": mu_fit " << r.fit.mu_fit << ", C_fit " << r.fit.C_fit
             << ", printed " << r.printed.C << ", edge " << r.edge.C << '\n';
    write_visibility_csv(*summary, r.fit);
  }
  return 0;
}

int forward(const std::string& config, const std::vector<std::string>& sets) {
  const ExperimentConfig cfg = load_experiment(config, sets);
  const std::vector<ForwardLevel> levels = run_forward_study(cfg);
  std::ostream* summary = nullptr;
  emit(cfg.output_path, [&](std::ostream& os) { write_forward_csv(os, levels); }, summary);
  *summary << "finest max error " << levels.back().max_error << '\n';
  return 0;
}

int verify_kernel(double scale, const std::string& output) {
  const std::vector<CheckResult> checks = kernel_suite(KernelConfig{}, scale);
  bool ok = true;
  for (const CheckResult& c : checks) {
    std::cerr << format_check(c) << '\n';
    ok = ok && c.pass;
  }
  std::ostream* summary = nullptr;
  emit(output, [&](std::ostream& os) { write_checks_csv(os, checks); }, summary);
  return ok ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reconstruction of caloric fields from lateral Cauchy data"};
  app.require_subcommand(1);

  std::string config, method, output;
  std::optional<double> tau_max;
  std::vector<std::string> sets;
  double scale = 1.0;

  CLI::App* rec = app.add_subcommand("reconstruct", "tau sweep of the Carleman or enclosure estimate");
  rec->add_option("--config", config, "experiment config")->required()->check(CLI::ExistingFile);
  rec->add_option("--tau-max", tau_max, "drop tau values above this");
  rec->add_option("--method", method, "carleman | enclosure")->check(CLI::IsMember({"carleman", "enclosure"}));
  rec->add_option("--set", sets, "key=value override");

  CLI::App* vis = app.add_subcommand("visibility-oracle", "numeric visibility limits and calibration");
  vis->add_option("--config", config, "experiment config")->required()->check(CLI::ExistingFile);
  vis->add_option("--set", sets, "key=value override");

  CLI::App* ver = app.add_subcommand("verify-kernel", "kernel invariant suite");
  ver->add_option("--sample-scale", scale, "multiplies the sample counts")->check(CLI::PositiveNumber);
  ver->add_option("--output", output, "CSV path (default stdout)");

  CLI::App* fwd = app.add_subcommand("forward-solve", "Crank-Nicolson convergence table");
  fwd->add_option("--config", config, "experiment config")->required()->check(CLI::ExistingFile);
  fwd->add_option("--set", sets, "key=value override");

  CLI11_PARSE(app, argc, argv);

  try {
    if (rec->parsed()) return reconstruct(config, tau_max, method, sets);
    if (vis->parsed()) return visibility(config, sets);
    if (ver->parsed()) return verify_kernel(scale, output);
    if (fwd->parsed()) return forward(config, sets);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const ConfigurationRejected& e) {
    std::cerr << e.what() << '\n';
    return kExitRejected;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
