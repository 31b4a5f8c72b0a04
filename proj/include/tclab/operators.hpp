#pragma once

#include <cstdint>
#include <variant>

#include "tclab/tridiagonal.hpp"

namespace tclab {

/// Viscosity, angular mode and rotation constant, plus the damping constant
/// Theta used by the W1 flow.
class PhysParams {
 public:
  static constexpr double kDefaultTheta = 32.0;

  PhysParams(double nu, int k, double B, double theta_cap = kDefaultTheta);

  double nu() const noexcept { return nu_; }
  int k() const noexcept { return k_; }
  double B() const noexcept { return B_; }
  double theta_cap() const noexcept { return theta_; }

  /// nu^{1/3} |k B|^{2/3}
  double kappa() const noexcept;
  /// max(nu k^2, kappa)
  double mu() const noexcept;
  /// Couette rate nu^{1/3} |k|^{2/3}
  double couette_rate() const noexcept;

 private:
  double nu_;
  int k_;
  double B_;
  double theta_;
};

namespace kind {
/// -nu d_r^2 + nu (k^2 - 1/4)/r^2 + i k B / r^2, on [1, R].
struct TC {};
/// -nu d_y^2 + nu k^2 + i k y.
struct Couette {};
/// -nu d_r^2 + nu (k^2 + Theta^2)/r^2 + nu (2 k B t / r^3)^2.
struct W1 {
  double t = 0.0;
};
}  // namespace kind

using OperatorKind = std::variant<kind::TC, kind::Couette, kind::W1>;

const char* kind_name(const OperatorKind& k) noexcept;

/// Pointwise potential of the given kind at position r.
Complex potential(const OperatorKind& k, const PhysParams& p, double r);

TridiagonalOperator assemble(const OperatorKind& k, const PhysParams& p,
                             const Grid& g);

struct EnergyIdentity {
  double lhs = 0.0;
  double rhs = 0.0;
  double gap = 0.0;
  double imag = 0.0;  // Im<T f, f>
};

/// Re<T f, f> against nu ||D f||^2 + nu (k^2 - 1/4) ||f/r||^2 with the
/// staggered forward difference D.
EnergyIdentity energy_identity_check(const PhysParams& p, const GridFunction& f);

/// Minimum of Re<A f, f> over seeded random unit grid functions.
double accretivity_check(const TridiagonalOperator& A, int samples = 200,
                         std::uint64_t seed = 0xacc7e7ULL);

}  // namespace tclab
