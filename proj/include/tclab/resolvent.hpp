#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tclab/operators.hpp"

namespace tclab {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

struct ResolventProbe {
  PhysParams params;
  double lambda = 0.0;
  OperatorKind kind = kind::TC{};
};

/// A - i k B lambda for TC, A - i k lambda for Couette.
TridiagonalOperator shifted_operator(const ResolventProbe& probe, const Grid& g);

GridFunction solve_resolvent(const ResolventProbe& probe, const GridFunction& F);

struct PseudoBoundResult {
  double psi = 0.0;
  double lambda_star = 0.0;
  std::vector<std::pair<double, double>> scan;  // (lambda, sigma_min)
};

/// [-0.5, 1.5] for TC; [min y - 0.5, max y + 0.5] for Couette.
Interval default_lambda_range(const OperatorKind& k, const Grid& g);

/// Coarse scan of sigma_min(A - shift(lambda)) over the range, then golden
/// section around the best scan point.
PseudoBoundResult pseudo_bound(const OperatorKind& k, const PhysParams& p,
                               const Grid& g, const WeightSpec& w_in,
                               const WeightSpec& w_out, Interval lambda_range,
                               int n_scan);

/// CSV with columns lambda, sigma_min, nu, k, B, R_max, n_interior.
void write_scan_csv(std::ostream& os, const PseudoBoundResult& r,
                    const PhysParams& p, const Grid& g, bool header = true);

/// Smooth bump exp(-1/(1-s^2)), s = (x - center)/half_width, zero outside.
double bump(double x, double center, double half_width);

struct AuditCase {
  double nu = 0.0;
  double lambda = 0.0;
  int trial = 0;
  double center = 0.0;
  double width = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double quotient = 0.0;
};

struct ResolventAuditResult {
  double worst_constant = 0.0;
  std::vector<AuditCase> cases;
};

/// Lemma-type weighted resolvent inequality for TC:
///   nu^{1/2}||w'|| + mu^{1/2}||w/r||  <=  C (mu^{-1/2}||r F1|| + nu^{-1/2}||F2||),
/// with w a random bump and F1 = (T - i k B lambda) w, F2 = 0.
/// Bumps are placed around the critical radius lambda^{-1/2} (when it lies in
/// the domain) and elsewhere, with widths on the scale nu^{1/3}|kB|^{-1/3} r.
ResolventAuditResult resolvent_audit(const ResolventProbe& probe, const Grid& g,
                                     int trials, std::uint64_t seed);

/// Variant with F1 = 0 and F2 a random bump: w solves (T - i k B lambda) w = D F2.
ResolventAuditResult resolvent_audit_f2(const ResolventProbe& probe, const Grid& g,
                                        int trials, std::uint64_t seed);

/// Grid used by the TC audit for the given viscosity.
Grid resolvent_audit_grid(const PhysParams& p);

struct TcWitness {
  double r0 = 0.0;
  double lambda0 = 0.0;
  double quotient = 0.0;
  double norm_w_over_r = 0.0;  // ||w0 / r||
  double norm_residual = 0.0;  // ||r (T - i B lambda0) w0||
};

/// w0(r) = (r - r0)^3 (r0 + 1/r0 - r)^3 with r0 = (|B|/nu)^{1/6}, lambda0 = r0^-2,
/// k = 1, analytic derivatives and composite Simpson quadrature with
/// `panels` panels across the support.
TcWitness sharpness_witness_tc(double nu, double B, int panels = 256);

struct CouetteWitness {
  double lambda0 = 0.0;
  double support = 0.0;  // nu^{1/3}
  double quotient = 0.0;
  double norm_w = 0.0;
  double norm_residual = 0.0;
};

/// w0(y) = y^3 (nu^{1/3} - y)^3 on [0, nu^{1/3}], lambda0 = 0, k = 1.
CouetteWitness sharpness_witness_couette(double nu, int panels = 256);

enum class CouetteDomain { unit_interval, line };

struct CouetteAuditResult {
  double worst_constant = 0.0;
  std::vector<AuditCase> cases;
};

/// (nu k^2)^{1/3} ||w|| / ||F|| with F = (C - i k lambda) w for random bumps on
/// the critical-layer scale nu^{1/3}|k|^{-1/3}.
CouetteAuditResult couette_resolvent_audit(double nu, int k, double lambda,
                                           int trials, std::uint64_t seed,
                                           CouetteDomain domain = CouetteDomain::unit_interval);

}  // namespace tclab
