#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tclab/analysis.hpp"
#include "tclab/evolution.hpp"
#include "tclab/resolvent.hpp"

namespace tclab {

using RadialProfile = std::function<double(double)>;

/// Weights a1, a2 and the exponent profile phi, with labels for manifests.
struct WeightTriple {
  RadialProfile a1;
  RadialProfile a2;
  RadialProfile phi;
  std::string a1_label = "a1";
  std::string a2_label = "a2";
  std::string phi_label = "phi";
};

/// Checks a1, a2 > 0 on [lo, hi]; with strict_decreasing, phi must be
/// strictly decreasing there, otherwise merely non-constant.
void validate_weights(const WeightTriple& w, double lo, double hi, bool strict_decreasing);

/// exp(4 - 1/((t-1)(2-t))) on (1, 2), zero elsewhere (peak 1 at t = 3/2).
double boundary_signal(double t);
/// First time derivative of boundary_signal.
double boundary_signal_dt(double t);
/// Quintic smoothstep s^3 (10 - 15 s + 6 s^2) on [0, 1], with derivatives.
ShapeValue lift_profile(double s);

struct LocalProblem {
  double delta = 0.1;
  int n_interior = 127;  // >= 64
  double dt = 1e-3;
  double amplitude = 1.0;  // g = amplitude * boundary_signal; 0 gives the trivial run
};

struct LocalSolve {
  PhysParams params;
  LocalProblem problem;
  double h = 0.0;
  std::vector<double> times{};
  /// eta_tilde at r = 1 + i h, i = 0..n+1 (both boundary nodes included).
  std::vector<std::vector<Complex>> eta_tilde{};
  std::vector<double> eta_norm{};  // ||eta(t)|| (lifted part removed)

  double boundary_error = 0.0;     // max |eta~(1)| + |eta~(1+delta) - g(t)|
  double residual_error = 0.0;     // max |G_h - G| at the step containing t = 3/2
  double residual_tolerance = 0.0; // 10 (dt^2 + h^2) scale
  double poincare_constant = 0.0;  // C_P from the discrete Dirichlet eigenvalue
  double decay_rate = 0.0;         // measured -d/dt log ||eta|| after t = 2
  double decay_bound = 0.0;        // nu / (4 C_P^2 delta^2)
};

/// Solves d_t eta + T eta = -G_h on [1, 1 + delta] with zero boundary data,
/// where G_h is the discrete d_t f + T f of the lift f = g(t) psi((r-1)/delta),
/// so that eta~ = eta + f solves the scheme with boundary data g exactly.
LocalSolve local_boundary_solve(const PhysParams& p, const LocalProblem& lp, double t_end);

/// Hestenes reflection coefficients c_m in u(x + s) = sum c_m u(x - m s).
inline constexpr double kReflection[3] = {6.0, -8.0, 3.0};

struct Extension {
  double h = 0.0;
  std::size_t seam = 0;        // index of r = 1 + delta
  std::vector<Complex> values; // nodes r = 1 + i h, i = 0..size-1; last node is 0
  double seam_jump = 0.0;      // relative C^2 mismatch of the one-sided jets
};

/// Extends local values (r = 1 + i h, i = 0..seam) across the seam and
/// multiplies by a C^2 cutoff: 1 on [1+delta, 1+delta+sigma/2], 0 beyond
/// 1 + delta + sigma, sigma = min(delta/3, 1 - delta). The result lives on
/// r in [1, 1 + (size-1) h] with 1 + (size-1) h >= 2 + delta.
Extension smooth_extension(std::span<const Complex> local, double delta, double h);

struct RatioEntry {
  int n = 0;
  double numerator = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

struct RatioSeries {
  std::vector<RatioEntry> entries;
  double slope = 0.0;      // least squares slope of log R_n against n
  double predicted = 0.0;  // support-gap prediction
  bool eventually_increasing = false;
  double successive_spread = 0.0;  // relative spread of R_{n+1}/R_n over the last four n
};

void write_ratio_csv(std::ostream& os, const RatioSeries& s, bool header = true);

struct TcCounterexample {
  RatioSeries series{};
  double delta = 0.0;         // final delta after halving
  int halvings = 0;
  double t_eff = 0.0;
  double eps_star = 0.0;      // (1 + delta) - centroid of numerator mass left of the seam
  double tail_bound = 0.0;    // relative weighted tail beyond t_eff
  double finite_num = 0.0;    // ||e^{t phi} a1 eta~|| at n = 0
  double finite_den = 0.0;    // ||e^{t phi} a2 F|| at n = 0
  double left_residual = 0.0; // ||F||_{[1,1+delta)} / ||F||
  double seam_jump = 0.0;
  double translation_gap = 0.0;  // direct vs reweighted R_n, relative
  LocalSolve local;
};

/// Runs the boundary-driven construction, halving delta (at most 6 times)
/// until the decay rate exceeds sup phi, and builds R_n for n = 0..n_max.
TcCounterexample build_tc_sequence(const PhysParams& p, const WeightTriple& w,
                                   LocalProblem lp, int n_max);

enum class HeatDomain { line, half_line_dirichlet, interval_dirichlet };

HeatDomain parse_heat_domain(const std::string& name);
const char* heat_domain_name(HeatDomain d) noexcept;

/// log of the heat kernel; -inf where it vanishes. For the interval the
/// domain is (0, length).
double log_heat_kernel(HeatDomain d, double length, double t, double x, double y);
double heat_kernel(HeatDomain d, double length, double t, double x, double y);

struct HeatSetup {
  HeatDomain domain = HeatDomain::line;
  double length = 5.0;  // interval domain only
  Interval v1{0.0, 1.0};
  Interval v2{3.0, 4.0};
  double x0 = 3.5;
  WeightTriple weights;
  int n_max = 8;
  int quad_nodes = 161;   // per direction in (s, y), odd
  int window_nodes = 41;  // per direction in the observation window, odd
  Interval window_t{0.5, 1.5};
};

struct HeatCounterexample {
  RatioSeries series;
  double w_at_x0 = 0.0;          // direct positivity integral
  double w_at_x0_duhamel = 0.0;  // Duhamel quadrature at (1, x0)
  double d1 = 0.0;               // sup phi on V1
  double d2 = 0.0;               // inf phi on V2
};

/// C-infinity cutoffs: zeta on [1/8, 7/8], 1 on [1/4, 3/4]; xi on V1, 1 on
/// the middle half of V1.
double time_cutoff(double s);
double space_cutoff(double y, Interval v1);

HeatCounterexample heat_kernel_counterexample(const HeatSetup& setup);

}  // namespace tclab
