#include "tclab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "tclab/error.hpp"

namespace tclab {

PhysParams::PhysParams(double nu, int k, double B, double theta_cap)
    : nu_(nu), k_(k), B_(B), theta_(theta_cap) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw InvalidArgument("nu must be positive");
  if (k == 0) throw InvalidArgument("angular mode k must be nonzero");
  if (!std::isfinite(B)) throw InvalidArgument("B must be finite");
  if (!(theta_cap >= 0.0) || !std::isfinite(theta_cap)) {
    throw InvalidArgument("theta_cap must be nonnegative");
  }
}

double PhysParams::kappa() const noexcept {
  return std::cbrt(nu_) * std::pow(std::abs(k_ * B_), 2.0 / 3.0);
}

double PhysParams::mu() const noexcept {
  return std::max(nu_ * k_ * k_, kappa());
}

double PhysParams::couette_rate() const noexcept {
  return std::cbrt(nu_) * std::pow(std::abs(static_cast<double>(k_)), 2.0 / 3.0);
}

const char* kind_name(const OperatorKind& k) noexcept {
  switch (k.index()) {
    case 0: return "tc";
    case 1: return "couette";
    default: return "w1";
  }
}

Complex potential(const OperatorKind& kd, const PhysParams& p, double r) {
  const double nu = p.nu();
  const double k = p.k();
  if (std::holds_alternative<kind::TC>(kd)) {
    const double r2 = r * r;
    return {nu * (k * k - 0.25) / r2, k * p.B() / r2};
  }
  if (std::holds_alternative<kind::Couette>(kd)) {
    return {nu * k * k, k * r};
  }
  const double t = std::get<kind::W1>(kd).t;
  const double r2 = r * r;
  const double damp = 2.0 * k * p.B() * t / (r2 * r);
  return {nu * (k * k + p.theta_cap() * p.theta_cap()) / r2 + nu * damp * damp, 0.0};
}

TridiagonalOperator assemble(const OperatorKind& kd, const PhysParams& p,
                             const Grid& g) {
  if (!std::holds_alternative<kind::Couette>(kd) && g.a_end() != 1.0) {
    throw InvalidArgument(std::string(kind_name(kd)) +
                          " operator lives on [1, R]; grid starts at " +
                          std::to_string(g.a_end()));
  }
  if (const auto* w1 = std::get_if<kind::W1>(&kd); w1 && !(w1->t >= 0.0)) {
    throw InvalidArgument("W1 time stamp must be nonnegative");
  }
  const std::size_t n = g.size();
  const double h2 = g.h() * g.h();
  const Complex off = -p.nu() / h2;
  std::vector<Complex> diag(n);
  for (std::size_t i = 0; i < n; ++i) {
    diag[i] = 2.0 * p.nu() / h2 + potential(kd, p, g.node(i));
  }
  return TridiagonalOperator(g, std::vector<Complex>(n - 1, off), std::move(diag),
                             std::vector<Complex>(n - 1, off));
}

EnergyIdentity energy_identity_check(const PhysParams& p, const GridFunction& f) {
  const Grid& g = f.grid();
  const auto T = assemble(kind::TC{}, p, g);
  const GridFunction F = T.apply(f);
  const Complex form = inner_product(F, f, WeightSpec::unit());

  const auto d = staggered_gradient(f);
  const double grad_sq = quad_norm_sq(d, {}, g.h());
  const double k = p.k();
  const double over_r_sq = std::pow(weighted_norm(f, WeightSpec::power(-2.0)), 2);

  EnergyIdentity out;
  out.lhs = form.real();
  out.rhs = p.nu() * grad_sq + p.nu() * (k * k - 0.25) * over_r_sq;
  out.gap = std::abs(out.lhs - out.rhs);
  out.imag = form.imag();
  return out;
}

double accretivity_check(const TridiagonalOperator& A, int samples,
                         std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  const Grid& g = A.grid();
  double best = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    GridFunction f(g);
    for (auto& v : f.values()) v = {normal(rng), normal(rng)};
    f *= 1.0 / weighted_norm(f, WeightSpec::unit());
    best = std::min(best, inner_product(A.apply(f), f, WeightSpec::unit()).real());
  }
  return best;
}

}  // namespace tclab
