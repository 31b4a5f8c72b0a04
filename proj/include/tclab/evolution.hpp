#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tclab/operators.hpp"

namespace tclab {

/// Writes f(t, .) at the interior nodes into `out`.
using Forcing = std::function<void(double t, std::span<Complex> out)>;

/// Crank-Nicolson for w_t + A(t) w = f:
///   (I + dt/2 A) w^{n+1} = (I - dt/2 A) w^n + dt f(t_n + dt/2),
/// with A evaluated at the midpoint when it depends on time (W1).
class CrankNicolson {
 public:
  CrankNicolson(const OperatorKind& kind, const PhysParams& p, const Grid& g,
                double dt);

  double dt() const noexcept { return dt_; }
  /// Advances w from t to t + dt in place.
  void step(double t, std::span<Complex> w, const Forcing& f = {});

 private:
  void prepare(double t_mid);

  OperatorKind kind_;
  PhysParams params_;
  Grid grid_;
  double dt_;
  bool time_dependent_;
  std::optional<TridiagonalOperator> explicit_;
  std::optional<TridiagonalLU> implicit_;
  std::vector<Complex> rhs_, force_;
};

/// Decay rate used for the default time scales: the Couette rate for Couette,
/// otherwise kappa, or nu k^2 when B = 0.
double decay_rate(const PhysParams& p, const OperatorKind& k = kind::TC{});
/// min(0.1 / rate, 0.1, 0.1 / shear), shear = |k B| (TC, W1) or |k| (Couette).
double default_dt(const PhysParams& p, const OperatorKind& k = kind::TC{});
/// 20 / rate.
double default_t_end(const PhysParams& p, const OperatorKind& k = kind::TC{});

struct EvolutionSetup {
  PhysParams params;
  Grid grid;
  double dt;
  double t_end;
  OperatorKind kind;
  Forcing forcing;  // empty: homogeneous
  GridFunction initial;

  /// Default dt and t_end from the physical parameters.
  static EvolutionSetup make(const PhysParams& p, const Grid& g,
                             const OperatorKind& k, GridFunction initial);
};

/// Trapezoid rule in time for integrals; supremum over step values.
class TimeAccumulator {
 public:
  void add(double t, double value);
  double integral() const noexcept { return integral_; }
  double sup() const noexcept { return sup_; }

 private:
  bool started_ = false;
  double t_prev_ = 0.0;
  double v_prev_ = 0.0;
  double integral_ = 0.0;
  double sup_ = 0.0;
};

struct SpaceTimeTrace {
  double sup_l2 = 0.0;       // sup_t ||w||
  double visc_grad = 0.0;    // nu^{1/2} ||d_r w||_{L2_t L2}
  double weighted_l2 = 0.0;  // mu^{1/2} ||w/r||_{L2_t L2}
  std::map<std::string, double> extra;

  double energy() const noexcept { return sup_l2 + visc_grad + weighted_l2; }
};

struct Snapshot {
  double t;
  GridFunction w;
};

using Observer = std::function<void(double t, const GridFunction& w)>;

struct EvolveOptions {
  int snapshot_stride = 0;  // 0: no snapshots
  Observer observer;        // called at t = 0 and after every step
  bool check_accretive = true;
};

struct EvolutionResult {
  GridFunction final;
  SpaceTimeTrace trace;
  std::vector<Snapshot> snapshots;
  std::vector<double> times;
  std::vector<double> norms;
  int steps = 0;
  double dt = 0.0;
  /// max over steps of ||w^{n+1}|| / ||w^n|| (homogeneous runs).
  double max_step_growth = 0.0;
  /// steps with ||w^{n+1}|| > ||w^n|| (1 + 1e-13).
  int growth_violations = 0;
};

/// The step count is rounded up so that steps * dt = t_end exactly.
EvolutionResult evolve(const EvolutionSetup& setup, const EvolveOptions& opt = {});

/// exp(-1/(1-s^2)) on [center - half, center + half], unit peak.
GridFunction bump_data(const Grid& g, double center, double half_width);

struct DecayRow {
  int q = 0;
  SpaceTimeTrace trace;   // of Lambda^q w
  double energy_ratio = 0.0;  // E_k(Lambda^q w) / ||w(0)||
  double theorem_ratio = 0.0; // (sup ||Lambda^q w|| + kappa^{1/2} ||Lambda^q w / r||) / ||w(0)||
};

struct DecayAudit {
  std::vector<DecayRow> rows;
  /// sup_t (1 + kappa t) ||w(t)||_{r^-4} / ||w(0)||
  double weighted_decay = 0.0;
  /// E_q <= C1 + C2 q E_{q-1} in units of ||w(0)||.
  double c1 = 0.0;
  double c2 = 0.0;
  EvolutionResult run;
};

/// Lambda = 1 + kappa t / r^2. Requires nu/|kB| <= (1 + max q)^{-3} / 64.
DecayAudit homogeneous_decay_audit(const EvolutionSetup& setup,
                                   const std::vector<int>& q_list);

struct InhomogeneousAudit {
  double quotient = 0.0;
  double forcing_norm = 0.0;  // ||r f||_{L2_t L2}
  SpaceTimeTrace trace;
};

/// (sup + visc + weighted) / (mu^{-1/2} ||r f||_{L2_t L2}) with zero initial data.
InhomogeneousAudit inhomogeneous_audit(const EvolutionSetup& setup);

struct RegionSplit {
  double i1 = 0.0;     // kappa |w1/r|^2 over r^2 <= kappa t
  double i2 = 0.0;     // kappa |w1/r|^2 over r^2 >= kappa t
  double total = 0.0;  // kappa ||w1/r||^2 over everything
  double bound1 = 0.0; // 2 kappa^3 ||t/r^3 w1||^2
  double bound2 = 0.0; // 36 sum_j sup_t ||chi_j w1||^2
};

/// Space-time integrals from stored snapshots (trapezoid in time over the
/// snapshot times).
RegionSplit region_split_measure(const std::vector<Snapshot>& snapshots,
                                 double kappa, int j_max = 12);

struct DecompositionAudit {
  SpaceTimeTrace w;       // full TC solution
  SpaceTimeTrace w1;      // W1 flow, with extras
  SpaceTimeTrace w2;      // w - e^{-ikBt/r^2} w1
  SpaceTimeTrace wtilde;  // kappa t / r^2 w1
  double norm0 = 0.0;
  double shear_ratio = 0.0;   // nu^{1/2} ||k B t / r^3 w1|| / ||w(0)||
  double lemma_ratio = 0.0;   // kappa^{5/2} ||t^2 / r^5 w1|| / ||w(0)||
  double defect_rel = 0.0;    // decomposition_defect at t = 0 over one step
  double defect_time = 0.0;
  RegionSplit split;
};

/// Evolves w under T and w1 under W1(t) in lockstep from the same data.
DecompositionAudit decomposition_audit(const EvolutionSetup& setup);

/// Discrete residual of (d_t + T)(e^{-ikBt/r^2} w1) against
///   -nu e^{-ikBt/r^2} [(Theta^2 + 1/4)/r^2 w1 + 4ikBt/r^3 w1' - 6ikBt/r^4 w1]
/// over the step [t, t + dt], divided by the norm of the midpoint average of w1.
/// Consistency: O(dt^2 + h^2).
double decomposition_defect(const PhysParams& p, const Grid& g,
                            const GridFunction& w1_start, double t, double dt);

struct SemigroupCheck {
  double psi = 0.0;
  double margin = 0.0;
  double t_max = 0.0;
  std::vector<std::pair<double, double>> samples;  // (t, log ratio)
};

/// min_t (-t Psi + pi/2) - log(||w(t)|| / ||w(0)||) for a Couette run up to
/// t_horizon / Psi.
SemigroupCheck gp_semigroup_check(const EvolutionSetup& couette,
                                  double t_horizon = 3.0);

struct ExponentialWeightProbe {
  double c = 0.0;
  double sup_ratio = 0.0;    // sup_t ||e^{c kappa t / r^2} w|| / ||w(0)||
  double final_ratio = 0.0;  // at t_end
  double late_slope = 0.0;   // d/dt log of the weighted norm over the last quarter
};

/// Exploratory: accumulates ||exp(c kappa t / r^2) w|| for each c.
std::vector<ExponentialWeightProbe> exponential_weight_probe(
    const EvolutionSetup& setup, const std::vector<double>& c_list);

/// Text dump: one line "r re im" per node, preceded by '#' manifest lines.
void write_snapshot(std::ostream& os, const GridFunction& w, const PhysParams& p,
                    double dt, double t);

}  // namespace tclab
