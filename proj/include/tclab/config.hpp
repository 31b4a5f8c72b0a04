#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "tclab/counterexample.hpp"
#include "tclab/error.hpp"

namespace tclab {

/// Rejected configuration; field() names the offending key, e.g. "params.nu".
class ConfigError : public InvalidArgument {
 public:
  ConfigError(std::string field, const std::string& message)
      : InvalidArgument(field + ": " + message), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

struct ExperimentConfig {
  std::string experiment = "evolve";
  std::string out = "tclab-out";
  std::int64_t seed = 1;
  int jobs = 1;

  // [params]
  std::string op = "tc";  // tc | couette
  std::vector<double> nu{1e-3, 1e-4, 1e-5};
  std::vector<int> k{1};
  std::vector<double> B{1.0};
  std::vector<int> q{0, 1, 2};
  std::vector<double> lambda{-1.0, 0.0, 0.25, 0.5, 0.9, 1.0, 2.0};
  double theta = 32.0;
  int n_max = 12;
  int trials = 50;
  int n_scan = 41;
  int panels = 256;

  // [grid]; n_interior = 0 derives it from points_per_unit
  double r_min = 1.0;
  double r_max = 5.0;
  int n_interior = 0;
  double points_per_unit = 1500.0;

  // [time]; 0 selects the defaults derived from the physical parameters
  double dt = 0.0;
  double t_end = 0.0;

  // [data]
  double bump_center = 2.0;
  double bump_half_width = 0.5;
  double forcing_until = 1.0;

  // [weights]
  std::string w_in = "r^-2";
  std::string w_out = "r^2";
  std::string a1 = "r^-1";
  std::string a2 = "r";
  std::string phi = "kappa*r^-2";

  // [counterexample]
  double delta = 0.1;
  int local_nodes = 127;
  double local_dt = 1e-3;
  std::string domain = "line";
  double length = 5.0;
  std::vector<double> v1{0.0, 1.0};
  std::vector<double> v2{3.0, 4.0};
  double x0 = 3.5;
  int quad_nodes = 161;

  // [analysis]
  int j_max = 12;
  int samples = 20000;
  double r0 = 10.0;
  std::vector<double> delta_tilde{0.01, 0.1, 0.5};

  // [convergence]
  std::string target = "evolve";

  bool operator==(const ExperimentConfig&) const = default;
};

/// Experiment names accepted by the runner.
const std::vector<std::string>& experiment_names();

/// Defaults tuned per experiment (sweep lists, grids, weights).
ExperimentConfig default_config(const std::string& experiment);

/// Parses TOML text. Keys absent from the text take the defaults of the
/// named experiment; unknown keys and type mismatches are rejected. A
/// nonempty `experiment` is used when the text names none and must agree
/// with it otherwise.
ExperimentConfig parse_config(std::string_view text, std::string_view experiment = {});
ExperimentConfig load_config(const std::filesystem::path& path,
                             std::string_view experiment = {});

/// TOML text that parses back to an identical config.
std::string emit_config(const ExperimentConfig& c);

/// Field-level checks; throws ConfigError naming the first bad field.
void validate(const ExperimentConfig& c);

/// Product of factors separated by '*': a number, "kappa", "r" or "x", or
/// "r^p" / "x^p". Examples: "kappa*r^-2", "r^-1", "1", "x".
RadialProfile parse_profile(const std::string& text, double kappa);

}  // namespace tclab
