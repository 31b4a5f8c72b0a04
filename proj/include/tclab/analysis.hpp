#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tclab/grid.hpp"

namespace tclab {

struct ShapeValue {
  double value = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
};

/// The C^2 piecewise polynomial phi: cubic rise on [3/4, 5/6], plateau 1 on
/// [5/6, 11/6], mirrored fall on [11/6, 23/12], zero elsewhere.
ShapeValue dyadic_shape_eval(double r);

/// Junction values of phi at 3/4 and 5/6 checked in exact rational arithmetic
/// (also enforced by static_assert when the library is compiled).
bool dyadic_junction_exact();

/// phi_j(r) = phi(r / 2^j) and chi_j = phi_j / sum_l phi_l.
class DyadicPartition {
 public:
  explicit DyadicPartition(int j_max = 12);

  int j_max() const noexcept { return j_max_; }
  ShapeValue phi(int j, double r) const;
  /// Value and r-derivatives of chi_j by the quotient rule.
  ShapeValue chi(int j, double r) const;
  double sum_chi(double r) const;
  double sum_chi_sq(double r) const;

 private:
  ShapeValue sum_phi(double r) const;
  int j_max_;
};

struct PartitionReport {
  bool ok = true;
  std::vector<std::string> violations;
  bool junction_exact = false;
  double junction_float_gap = 0.0;  // largest one-sided mismatch of value/d1/d2
  double max_phi = 0.0;
  double min_phi = 0.0;
  double max_phi_d1 = 0.0;
  double max_phi_d2 = 0.0;
  double max_sum_error = 0.0;  // |sum chi_j - 1|
  double min_sum_sq = 1.0;
  double max_sum_sq = 0.0;
  double chi0_at_1 = 0.0;
  double max_scaled_d1 = 0.0;  // max_j,r |chi_j'| 2^j
  double max_scaled_d2 = 0.0;  // max_j,r |chi_j''| 4^j
};

/// Checks every partition invariant on a log-spaced sample of [1, 2^{j_max}].
PartitionReport partition_audit(int j_max, int r_samples);

struct HardyResult {
  double lhs = 0.0;  // max_i |f_i|^2 / r_i
  double rhs = 0.0;  // ||f/r|| ||D f|| + ||f/r||^2
  double quotient = 0.0;
};

/// Pointwise Hardy-type bound for f vanishing at the boundary; D is the
/// staggered forward difference.
HardyResult hardy_audit(const GridFunction& f);

struct LogIntegral {
  double value = 0.0;  // integral of dr/r over [r0 - d r0, r0 + d r0]
  double bound = 0.0;  // 2 d / (1 - d)
};

LogIntegral log_integral_audit(double r0, double delta_tilde);

/// Odd C^2 quintic: 1 for z <= -1, -1 for z >= 1, -(15z - 10z^3 + 3z^5)/8 between.
double rho_cutoff(double z);
ShapeValue rho_cutoff_eval(double z);
double rho_delta(double r, double r0, double delta);

}  // namespace tclab
