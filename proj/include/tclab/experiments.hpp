#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "tclab/config.hpp"

namespace tclab {

/// CSV table; every row starts with the parameter tuple it came from.
struct Table {
  std::string name;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const;
};

struct Verdict {
  std::string id;  // acceptance assertion, e.g. "AC3.slope"
  bool passed = false;
  std::string detail;
};

struct ReportBundle {
  ExperimentConfig config;
  std::string version;
  double wall_seconds = 0.0;
  std::vector<Table> tables;
  std::vector<Verdict> verdicts;
  std::vector<std::string> tuple_failures;

  bool all_passed() const;
  /// Config echo, version, wall time and verdict summary as plain text.
  std::string manifest() const;
  /// manifest.txt, verdicts.csv and one <name>.csv per table.
  void write(const std::filesystem::path& dir) const;
};

std::string code_version();

/// Shortest round-trip decimal form, used for every CSV cell.
std::string format_number(double x);

/// Creates the directory if needed and checks that a file can be written
/// there; throws ConfigError("out", ...) otherwise.
void ensure_output_dir(const std::filesystem::path& dir);

/// Runs the named experiment over the Cartesian nu x k x B sweep. Tuples are
/// independent and may run concurrently (config.jobs); results are assembled
/// in tuple order. A failing tuple is recorded and the sweep continues.
ReportBundle run(const ExperimentConfig& config);

/// Refinement study for evolve (dt, h, dense SVD oracle), pseudo-bound
/// (R_max and h doubling) or sharpness (quadrature panels). The target is
/// config.target when config.experiment is "convergence", otherwise
/// config.experiment.
ReportBundle convergence_study(const ExperimentConfig& config);

/// Smallest weighted singular value of a tridiagonal operator from a dense
/// SVD (n <= 1024).
double dense_sigma_min(const TridiagonalOperator& A, const WeightSpec& w_in,
                       const WeightSpec& w_out);

}  // namespace tclab
