#include "tclab/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "tclab/error.hpp"

namespace tclab {
namespace {

// Minimal exact rational for the junction self-test.
struct Fraction {
  std::int64_t num;
  std::int64_t den;

  constexpr Fraction(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  friend constexpr Fraction operator+(Fraction a, Fraction b) {
    return {a.num * b.den + b.num * a.den, a.den * b.den};
  }
  friend constexpr Fraction operator-(Fraction a, Fraction b) {
    return {a.num * b.den - b.num * a.den, a.den * b.den};
  }
  friend constexpr Fraction operator*(Fraction a, Fraction b) {
    return {a.num * b.num, a.den * b.den};
  }
  friend constexpr bool operator==(Fraction a, Fraction b) {
    return a.num == b.num && a.den == b.den;
  }
};

constexpr std::int64_t k12_3 = 12 * 12 * 12;
constexpr std::int64_t k12_4 = k12_3 * 12;
constexpr std::int64_t k12_5 = k12_4 * 12;
constexpr std::int64_t k12_6 = k12_5 * 12;

// Left piece (r - 3/4)^3 Q(r), Q(r) = 6*12^5 r^2 - 123*12^4 r + 631*12^3.
struct ExactJet {
  Fraction v, d1, d2;
};

constexpr ExactJet left_piece_exact(Fraction r) {
  const Fraction p = r - Fraction(3, 4);
  const Fraction q = Fraction(6 * k12_5) * r * r - Fraction(123 * k12_4) * r +
                     Fraction(631 * k12_3);
  const Fraction dq = Fraction(k12_6) * r - Fraction(123 * k12_4);
  const Fraction ddq = Fraction(k12_6);
  return {p * p * p * q,
          Fraction(3) * p * p * q + p * p * p * dq,
          Fraction(6) * p * q + Fraction(6) * p * p * dq + p * p * p * ddq};
}

constexpr bool junction_identity() {
  const ExactJet at_top = left_piece_exact(Fraction(5, 6));
  const ExactJet at_bottom = left_piece_exact(Fraction(3, 4));
  return at_top.v == Fraction(1) && at_top.d1 == Fraction(0) &&
         at_top.d2 == Fraction(0) && at_bottom.v == Fraction(0) &&
         at_bottom.d1 == Fraction(0) && at_bottom.d2 == Fraction(0);
}

static_assert(junction_identity(), "dyadic shape junction identity");

ShapeValue left_piece(double r) {
  const double p = r - 0.75;
  const double q = 6.0 * k12_5 * r * r - 123.0 * k12_4 * r + 631.0 * k12_3;
  const double dq = static_cast<double>(k12_6) * r - 123.0 * k12_4;
  const double ddq = static_cast<double>(k12_6);
  return {p * p * p * q, 3.0 * p * p * q + p * p * p * dq,
          6.0 * p * q + 6.0 * p * p * dq + p * p * p * ddq};
}

void flag(PartitionReport& rep, const std::string& what, double r) {
  rep.ok = false;
  if (rep.violations.size() < 20) {
    std::ostringstream os;
    os.precision(17);
    os << what << " at r = " << r;
    rep.violations.push_back(os.str());
  }
}

}  // namespace

ShapeValue dyadic_shape_eval(double r) {
  if (r < 0.0) throw InvalidArgument("dyadic shape is defined for r >= 0");
  if (r <= 0.75 || r >= 23.0 / 12.0) return {};
  if (r < 5.0 / 6.0) return left_piece(r);
  if (r <= 11.0 / 6.0) return {1.0, 0.0, 0.0};
  const ShapeValue m = left_piece(8.0 / 3.0 - r);
  return {m.value, -m.d1, m.d2};
}

bool dyadic_junction_exact() { return junction_identity(); }

DyadicPartition::DyadicPartition(int j_max) : j_max_(j_max) {
  if (j_max < 0 || j_max > 60) throw InvalidArgument("j_max out of range");
}

ShapeValue DyadicPartition::phi(int j, double r) const {
  const double s = std::ldexp(1.0, -j);
  const ShapeValue v = dyadic_shape_eval(r * s);
  return {v.value, v.d1 * s, v.d2 * s * s};
}

ShapeValue DyadicPartition::sum_phi(double r) const {
  ShapeValue acc;
  for (int j = 0; j <= j_max_ + 1; ++j) {
    const ShapeValue v = phi(j, r);
    acc.value += v.value;
    acc.d1 += v.d1;
    acc.d2 += v.d2;
  }
  return acc;
}

ShapeValue DyadicPartition::chi(int j, double r) const {
  const ShapeValue p = phi(j, r);
  if (p.value == 0.0 && p.d1 == 0.0 && p.d2 == 0.0) return {};
  const ShapeValue S = sum_phi(r);
  const double s = S.value;
  return {p.value / s, p.d1 / s - p.value * S.d1 / (s * s),
          p.d2 / s - 2.0 * p.d1 * S.d1 / (s * s) - p.value * S.d2 / (s * s) +
              2.0 * p.value * S.d1 * S.d1 / (s * s * s)};
}

double DyadicPartition::sum_chi(double r) const {
  double acc = 0.0;
  for (int j = 0; j <= j_max_ + 1; ++j) acc += chi(j, r).value;
  return acc;
}

double DyadicPartition::sum_chi_sq(double r) const {
  double acc = 0.0;
  for (int j = 0; j <= j_max_ + 1; ++j) {
    const double c = chi(j, r).value;
    acc += c * c;
  }
  return acc;
}

PartitionReport partition_audit(int j_max, int r_samples) {
  if (j_max < 4) throw InvalidArgument("partition_audit needs j_max >= 4");
  if (r_samples < 10000) throw InvalidArgument("partition_audit needs >= 1e4 samples");
  PartitionReport rep;
  rep.junction_exact = dyadic_junction_exact();
  if (!rep.junction_exact) flag(rep, "exact junction identity fails", 5.0 / 6.0);

  // One-sided jets at the four junctions.
  const double eps = 0.0;
  auto jet_gap = [&](double r, ShapeValue inner) {
    const ShapeValue v = dyadic_shape_eval(r + eps);
    return std::max({std::abs(v.value - inner.value), std::abs(v.d1 - inner.d1),
                     std::abs(v.d2 - inner.d2) / (162.0 * 144.0)});
  };
  rep.junction_float_gap = std::max(
      {jet_gap(0.75, left_piece(0.75)), jet_gap(5.0 / 6.0, left_piece(5.0 / 6.0)),
       jet_gap(11.0 / 6.0, {left_piece(5.0 / 6.0).value, -left_piece(5.0 / 6.0).d1,
                            left_piece(5.0 / 6.0).d2}),
       jet_gap(23.0 / 12.0, {left_piece(0.75).value, -left_piece(0.75).d1,
                             left_piece(0.75).d2})});
  const ShapeValue top = left_piece(5.0 / 6.0);
  const double top_gap = std::max({std::abs(top.value - 1.0), std::abs(top.d1),
                                   std::abs(top.d2) / (162.0 * 144.0)});
  rep.junction_float_gap = std::max(rep.junction_float_gap, top_gap);
  if (rep.junction_float_gap > 1e-12) flag(rep, "phi junction mismatch", 5.0 / 6.0);

  // Fine scan of phi itself.
  rep.min_phi = 1.0;
  const int phi_samples = std::max(r_samples, 200000);
  for (int i = 0; i <= phi_samples; ++i) {
    const double r = 0.7 + 1.3 * i / phi_samples;
    const ShapeValue v = dyadic_shape_eval(r);
    rep.max_phi = std::max(rep.max_phi, v.value);
    rep.min_phi = std::min(rep.min_phi, v.value);
    rep.max_phi_d1 = std::max(rep.max_phi_d1, std::abs(v.d1));
    rep.max_phi_d2 = std::max(rep.max_phi_d2, std::abs(v.d2));
  }
  if (rep.max_phi > 1.0 + 1e-12 || rep.min_phi < -1e-12) flag(rep, "phi outside [0,1]", 0.0);
  if (rep.max_phi_d1 > 540.0) flag(rep, "|phi'| > 540", 0.0);
  if (rep.max_phi_d2 > 162.0 * 144.0) flag(rep, "|phi''| > 162*12^2", 0.0);

  const DyadicPartition part(j_max);
  rep.chi0_at_1 = part.chi(0, 1.0).value;
  if (rep.chi0_at_1 != 1.0) flag(rep, "chi_0(1) != 1", 1.0);
  for (int j = 1; j <= j_max + 1; ++j) {
    if (part.chi(j, 1.0).value != 0.0) flag(rep, "chi_j(1) != 0 for j >= 1", 1.0);
  }

  const double log_hi = j_max * std::log(2.0);
  std::vector<double> c(j_max + 2);
  for (int i = 0; i < r_samples; ++i) {
    const double r = std::exp(log_hi * i / (r_samples - 1));
    double sum = 0.0, sum_sq = 0.0;
    for (int j = 0; j <= j_max + 1; ++j) {
      const ShapeValue v = part.chi(j, r);
      c[j] = v.value;
      sum += v.value;
      sum_sq += v.value * v.value;
      if (v.value < -1e-15 || v.value > 1.0 + 1e-15) flag(rep, "chi_j outside [0,1]", r);
      if (v.value != 0.0) {
        const double lo = std::ldexp(1.0, j + 1) / 3.0;
        const double hi = std::ldexp(1.0, j + 1);
        if (r < lo || r > hi) flag(rep, "chi_j outside its support", r);
      }
      const double s1 = std::abs(v.d1) * std::ldexp(1.0, j);
      const double s2 = std::abs(v.d2) * std::ldexp(1.0, 2 * j);
      rep.max_scaled_d1 = std::max(rep.max_scaled_d1, s1);
      rep.max_scaled_d2 = std::max(rep.max_scaled_d2, s2);
      if (s1 > 4e6) flag(rep, "|chi_j'| > 4e6 2^-j", r);
      if (s2 > 4e6) flag(rep, "|chi_j''| > 4e6 2^-2j", r);
    }
    for (int j = 0; j <= j_max + 1; ++j) {
      for (int l = j + 2; l <= j_max + 1; ++l) {
        if (c[j] * c[l] != 0.0) flag(rep, "chi_j chi_l != 0 with |j-l| >= 2", r);
      }
    }
    rep.max_sum_error = std::max(rep.max_sum_error, std::abs(sum - 1.0));
    rep.min_sum_sq = std::min(rep.min_sum_sq, sum_sq);
    rep.max_sum_sq = std::max(rep.max_sum_sq, sum_sq);
  }
  if (rep.max_sum_error > 1e-12) flag(rep, "sum chi_j != 1", 0.0);
  if (rep.min_sum_sq < 0.5 - 1e-12) flag(rep, "sum chi_j^2 < 1/2", 0.0);
  if (rep.max_sum_sq > 1.0 + 1e-12) flag(rep, "sum chi_j^2 > 1", 0.0);
  return rep;
}

HardyResult hardy_audit(const GridFunction& f) {
  HardyResult out;
  const Grid& g = f.grid();
  for (std::size_t i = 0; i < f.size(); ++i) {
    out.lhs = std::max(out.lhs, std::norm(f[i]) / g.node(i));
  }
  const double over_r = weighted_norm(f, WeightSpec::power(-2.0));
  const double grad = std::sqrt(quad_norm_sq(staggered_gradient(f), {}, g.h()));
  out.rhs = over_r * grad + over_r * over_r;
  out.quotient = out.rhs > 0.0 ? out.lhs / out.rhs : 0.0;
  return out;
}

LogIntegral log_integral_audit(double r0, double delta_tilde) {
  if (!(r0 > 1.0)) throw InvalidArgument("log integral needs r0 > 1");
  if (!(delta_tilde > 0.0 && delta_tilde <= 0.5)) {
    throw InvalidArgument("log integral needs 0 < delta_tilde <= 1/2");
  }
  const double a = r0 - delta_tilde * r0;
  const double b = r0 + delta_tilde * r0;
  return {std::log(b / a), 2.0 * delta_tilde / (1.0 - delta_tilde)};
}

ShapeValue rho_cutoff_eval(double z) {
  if (z <= -1.0) return {1.0, 0.0, 0.0};
  if (z >= 1.0) return {-1.0, 0.0, 0.0};
  const double z2 = z * z;
  const double one_minus = 1.0 - z2;
  return {-(15.0 * z - 10.0 * z2 * z + 3.0 * z2 * z2 * z) / 8.0,
          -15.0 * one_minus * one_minus / 8.0, 7.5 * z * one_minus};
}

double rho_cutoff(double z) { return rho_cutoff_eval(z).value; }

double rho_delta(double r, double r0, double delta) {
  if (!(delta > 0.0)) throw InvalidArgument("rho_delta needs delta > 0");
  return rho_cutoff((r - r0) / delta);
}

}  // namespace tclab
