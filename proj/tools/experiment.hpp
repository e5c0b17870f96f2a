#pragma once

#include "heatrecon/caloric.hpp"
#include "heatrecon/check.hpp"
#include "heatrecon/geometry.hpp"
#include "heatrecon/oracle.hpp"
#include "heatrecon/reconstruct.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace heatrecon::cli {

// Malformed or inconsistent configuration; the message names the key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Flat `key.path = value` lines; `#` starts a comment.
using KeyValues = std::map<std::string, std::string>;
KeyValues read_key_values(std::istream& is);
KeyValues read_key_values_file(const std::string& path);
// `key=value` from the command line; replaces the file entry.
void apply_override(KeyValues& kv, const std::string& assignment);

enum class Method { carleman, enclosure };
enum class ConstantSource { oracle, edge, printed, triangle, given };

struct FieldSpec {
  std::string kind = "constant";  // closed-form kinds, grid, forward
  FieldParams params;
  std::string grid_path;
  std::string forward_initial = "sin_pi";
  ForwardGrid forward_grid{64, 256};
};

struct ConeSpec {
  std::optional<double> delta;  // empty: default rule
  std::vector<Vector> aux;
};

struct OracleSpec {
  int n = 1;
  std::vector<std::pair<double, double>> cases;  // (c, delta)
  double tau_start = 400.0;
  int tau_count = 4;
  std::string density = "one";  // one | linear
};

struct ForwardStudy {
  double T = 0.2;
  std::vector<int> levels{16, 32, 64, 128};
};

struct ExperimentConfig {
  ScenarioGeometry geom;
  ProbeDirection probe;
  FieldSpec field;
  Method method = Method::carleman;
  std::optional<ConeSpec> cone;
  ConstantSource constant_source = ConstantSource::oracle;
  VisibilityConstant given_constant;
  std::vector<double> taus{10.0, 20.0, 40.0, 80.0};
  ReconstructConfig recon;
  bool reference_auto = true;
  std::optional<double> reference;
  NoiseSpec noise;
  std::string output_path;
  bool timing = false;
  OracleSpec oracle;
  ForwardStudy forward;
};

// Every key must be known; required keys depend on the method.
ExperimentConfig parse_experiment(const KeyValues& kv);
ExperimentConfig load_experiment(const std::string& path, const std::vector<std::string>& overrides = {});

std::string to_string(Method m);
Method parse_method(const std::string& s);

struct ReconstructRun {
  Margins margins;
  std::optional<VisibilityConstant> constant;
  std::optional<double> cone_delta;
  SweepReport report;
};

// Validates the geometry first (throws ConfigurationRejected).
ReconstructRun run_reconstruct(const ExperimentConfig& cfg);
void write_reconstruct_summary(std::ostream& os, const ExperimentConfig& cfg, const ReconstructRun& run);

std::vector<CalibrationRow> run_visibility_oracle(const ExperimentConfig& cfg);

struct ForwardLevel {
  int nx = 0;
  int nt = 0;
  double max_error = 0.0;
  double ratio = 0.0;  // previous error / this error, NaN on the first level
};
// Crank-Nicolson against e^{-pi^2 t} sin(pi x) with exact Neumann data.
std::vector<ForwardLevel> run_forward_study(const ExperimentConfig& cfg);
void write_forward_csv(std::ostream& os, const std::vector<ForwardLevel>& levels);

void write_checks_csv(std::ostream& os, const std::vector<CheckResult>& checks);

}  // namespace heatrecon::cli
