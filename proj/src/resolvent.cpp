#include "tclab/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>

#include "tclab/error.hpp"

namespace tclab {
namespace {

constexpr double kGolden = 0.6180339887498949;

double sigma_at(const OperatorKind& kd, const PhysParams& p,
                const TridiagonalOperator& base, const WeightSpec& w_in,
                const WeightSpec& w_out, double lambda) {
  const Complex shift = std::holds_alternative<kind::Couette>(kd)
                            ? Complex(0.0, -p.k() * lambda)
                            : Complex(0.0, -p.k() * p.B() * lambda);
  try {
    return smallest_singular_value(base.shifted(shift), w_in, w_out);
  } catch (const NonConvergence& e) {
    throw NonConvergence(e.iterations(), e.last_gap(),
                         std::string(e.what()) + " at lambda = " +
                             std::to_string(lambda));
  }
}

// Composite Simpson over [a, b] with an even panel count.
template <class F>
double simpson(F&& f, double a, double b, int panels) {
  const double H = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) acc += (i % 2 ? 4.0 : 2.0) * f(a + i * H);
  return acc * H / 3.0;
}

struct SexticBump {
  // w = p^3 q^3 with p = x - x0, q = x1 - x.
  double x0, x1;
  double value(double x) const {
    if (x <= x0 || x >= x1) return 0.0;
    const double p = x - x0, q = x1 - x;
    return p * p * p * q * q * q;
  }
  double second(double x) const {
    if (x <= x0 || x >= x1) return 0.0;
    const double p = x - x0, q = x1 - x;
    return 6.0 * p * q * q * q - 18.0 * p * p * q * q + 6.0 * p * p * p * q;
  }
};

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

GridFunction sample_bump(const Grid& g, double center, double half_width,
                         Complex amplitude) {
  return GridFunction::sample(g, [&](double x) {
    return amplitude * bump(x, center, half_width);
  });
}

Complex random_phase(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * M_PI);
  return std::polar(1.0, u(rng));
}

}  // namespace

TridiagonalOperator shifted_operator(const ResolventProbe& probe, const Grid& g) {
  if (std::holds_alternative<kind::W1>(probe.kind)) {
    throw InvalidArgument("resolvent probes are defined for TC and Couette only");
  }
  if (!std::isfinite(probe.lambda)) throw InvalidArgument("lambda must be finite");
  const auto& p = probe.params;
  const Complex shift = std::holds_alternative<kind::Couette>(probe.kind)
                            ? Complex(0.0, -p.k() * probe.lambda)
                            : Complex(0.0, -p.k() * p.B() * probe.lambda);
  return assemble(probe.kind, p, g).shifted(shift);
}

GridFunction solve_resolvent(const ResolventProbe& probe, const GridFunction& F) {
  return solve_tridiagonal(shifted_operator(probe, F.grid()), F);
}

Interval default_lambda_range(const OperatorKind& k, const Grid& g) {
  if (std::holds_alternative<kind::Couette>(k)) {
    return {g.a_end() - 0.5, g.b_end() + 0.5};
  }
  return {-0.5, 1.5};
}

PseudoBoundResult pseudo_bound(const OperatorKind& kd, const PhysParams& p,
                               const Grid& g, const WeightSpec& w_in,
                               const WeightSpec& w_out, Interval range,
                               int n_scan) {
  if (n_scan < 16) throw InvalidArgument("pseudo_bound needs n_scan >= 16");
  if (!(range.lo < range.hi)) throw InvalidArgument("empty lambda range");
  if (std::holds_alternative<kind::W1>(kd)) {
    throw InvalidArgument("pseudo_bound is defined for TC and Couette only");
  }
  const TridiagonalOperator base = assemble(kd, p, g);
  auto sigma = [&](double lambda) {
    return sigma_at(kd, p, base, w_in, w_out, lambda);
  };

  PseudoBoundResult out;
  out.scan.reserve(n_scan);
  std::size_t best = 0;
  for (int i = 0; i < n_scan; ++i) {
    const double lambda = range.lo + (range.hi - range.lo) * i / (n_scan - 1);
    out.scan.emplace_back(lambda, sigma(lambda));
    if (out.scan.back().second < out.scan[best].second) best = out.scan.size() - 1;
  }

  double a = out.scan[best == 0 ? 0 : best - 1].first;
  double b = out.scan[std::min<std::size_t>(best + 1, out.scan.size() - 1)].first;
  double x1 = b - kGolden * (b - a);
  double x2 = a + kGolden * (b - a);
  double f1 = sigma(x1);
  double f2 = sigma(x2);
  const double floor = 1e-12 * (range.hi - range.lo);
  while (b - a > std::max(1e-4 * 0.5 * (std::abs(a) + std::abs(b)), floor)) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kGolden * (b - a);
      f1 = sigma(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kGolden * (b - a);
      f2 = sigma(x2);
    }
  }
  out.psi = out.scan[best].second;
  out.lambda_star = out.scan[best].first;
  if (f1 < out.psi) {
    out.psi = f1;
    out.lambda_star = x1;
  }
  if (f2 < out.psi) {
    out.psi = f2;
    out.lambda_star = x2;
  }
  return out;
}

void write_scan_csv(std::ostream& os, const PseudoBoundResult& r,
                    const PhysParams& p, const Grid& g, bool header) {
  if (header) os << "lambda,sigma_min,nu,k,B,R_max,n_interior\n";
  const auto flags = os.flags();
  const auto prec = os.precision(17);
  for (const auto& [lambda, s] : r.scan) {
    os << lambda << ',' << s << ',' << p.nu() << ',' << p.k() << ',' << p.B()
       << ',' << g.b_end() << ',' << g.size() << '\n';
  }
  os.precision(prec);
  os.flags(flags);
}

double bump(double x, double center, double half_width) {
  const double s = (x - center) / half_width;
  if (std::abs(s) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - s * s));
}

Grid resolvent_audit_grid(const PhysParams&) { return Grid(1.0, 4.0, 8191); }

ResolventAuditResult resolvent_audit(const ResolventProbe& probe, const Grid& g,
                                     int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("resolvent_audit needs trials >= 1");
  const auto& p = probe.params;
  const auto A = shifted_operator(probe, g);
  const double nu = p.nu();
  const double mu = p.mu();
  const double scale = std::cbrt(nu) * std::pow(std::abs(p.k() * p.B()), -1.0 / 3.0);
  const double r_max = g.b_end();
  const bool critical = probe.lambda > 0.0 && probe.lambda <= 1.0 &&
                        1.0 / std::sqrt(probe.lambda) < r_max - 0.5;
  const double r_c = critical ? 1.0 / std::sqrt(probe.lambda) : 0.0;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ResolventAuditResult out;
  for (int t = 0; t < trials; ++t) {
    double center, half;
    if (critical && unit(rng) < 0.7) {
      const double eps = scale * r_c;
      half = eps * log_uniform(rng, 0.5, 4.0);
      center = r_c + (2.0 * unit(rng) - 1.0) * eps;
    } else {
      center = 1.1 + unit(rng) * (r_max - 1.6);
      half = scale * center * log_uniform(rng, 0.5, 8.0);
    }
    half = std::min(half, 0.5 * (r_max - 1.0));
    center = std::clamp(center, 1.0 + half, r_max - half);
    const GridFunction w = sample_bump(g, center, half, random_phase(rng));
    const GridFunction F = A.apply(w);

    AuditCase c;
    c.nu = nu;
    c.lambda = probe.lambda;
    c.trial = t;
    c.center = center;
    c.width = half;
    c.lhs = std::sqrt(nu) * std::sqrt(quad_norm_sq(staggered_gradient(w), {}, g.h())) +
            std::sqrt(mu) * weighted_norm(w, WeightSpec::power(-2.0));
    c.rhs = weighted_norm(F, WeightSpec::power(2.0)) / std::sqrt(mu);
    c.quotient = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
    out.worst_constant = std::max(out.worst_constant, c.quotient);
    out.cases.push_back(c);
  }
  return out;
}

ResolventAuditResult resolvent_audit_f2(const ResolventProbe& probe, const Grid& g,
                                        int trials, std::uint64_t seed) {
  if (trials < 1) throw InvalidArgument("resolvent_audit needs trials >= 1");
  const auto& p = probe.params;
  TridiagonalLU lu(shifted_operator(probe, g));
  const double nu = p.nu();
  const double mu = p.mu();
  const double scale = std::cbrt(nu) * std::pow(std::abs(p.k() * p.B()), -1.0 / 3.0);
  const double r_max = g.b_end();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ResolventAuditResult out;
  for (int t = 0; t < trials; ++t) {
    double center = 1.1 + unit(rng) * (r_max - 1.6);
    double half = std::min(scale * center * log_uniform(rng, 0.5, 8.0), 0.5 * (r_max - 1.0));
    center = std::clamp(center, 1.0 + half, r_max - half);
    const GridFunction F2 = sample_bump(g, center, half, random_phase(rng));
    const GridFunction w = lu.solve(derivative(F2));

    AuditCase c;
    c.nu = nu;
    c.lambda = probe.lambda;
    c.trial = t;
    c.center = center;
    c.width = half;
    c.lhs = std::sqrt(nu) * std::sqrt(quad_norm_sq(staggered_gradient(w), {}, g.h())) +
            std::sqrt(mu) * weighted_norm(w, WeightSpec::power(-2.0));
    c.rhs = weighted_norm(F2, WeightSpec::unit()) / std::sqrt(nu);
    c.quotient = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
    out.worst_constant = std::max(out.worst_constant, c.quotient);
    out.cases.push_back(c);
  }
  return out;
}

TcWitness sharpness_witness_tc(double nu, double B, int panels) {
  if (!(nu > 0.0)) throw InvalidArgument("nu must be positive");
  if (!(std::abs(B) > nu)) throw InvalidArgument("witness requires |B| > nu");
  if (panels < 64 || panels % 2) {
    throw InvalidArgument("witness quadrature needs an even panel count >= 64");
  }
  TcWitness out;
  out.r0 = std::pow(std::abs(B) / nu, 1.0 / 6.0);
  out.lambda0 = 1.0 / (out.r0 * out.r0);
  const double r0 = out.r0;
  const SexticBump w{r0, r0 + 1.0 / r0};
  const double lambda0 = out.lambda0;

  auto residual_sq = [&](double r) {
    const double v = w.value(r);
    const double re = -nu * w.second(r) + nu * 0.75 * v / (r * r);
    const double im = B * (1.0 / (r * r) - lambda0) * v;
    return r * r * (re * re + im * im);
  };
  auto over_r_sq = [&](double r) {
    const double v = w.value(r) / r;
    return v * v;
  };
  // Local grid [r0 - 1/r0, r0 + 2/r0]; the kinks of w0'' sit on panel nodes.
  const double a = r0 - 1.0 / r0;
  const double b = r0 + 2.0 / r0;
  out.norm_residual = std::sqrt(simpson(residual_sq, a, b, 3 * panels));
  out.norm_w_over_r = std::sqrt(simpson(over_r_sq, a, b, 3 * panels));
  out.quotient = out.norm_residual /
                 (std::cbrt(nu) * std::pow(std::abs(B), 2.0 / 3.0) * out.norm_w_over_r);
  return out;
}

CouetteWitness sharpness_witness_couette(double nu, int panels) {
  if (!(nu > 0.0 && nu < 1.0)) throw InvalidArgument("witness requires 0 < nu < 1");
  if (panels < 64 || panels % 2) {
    throw InvalidArgument("witness quadrature needs an even panel count >= 64");
  }
  CouetteWitness out;
  out.lambda0 = 0.0;
  out.support = std::cbrt(nu);
  const SexticBump w{0.0, out.support};
  auto residual_sq = [&](double y) {
    const double v = w.value(y);
    const double re = -nu * w.second(y) + nu * v;
    const double im = (y - out.lambda0) * v;
    return re * re + im * im;
  };
  auto sq = [&](double y) {
    const double v = w.value(y);
    return v * v;
  };
  out.norm_residual = std::sqrt(simpson(residual_sq, 0.0, out.support, panels));
  out.norm_w = std::sqrt(simpson(sq, 0.0, out.support, panels));
  out.quotient = out.norm_residual / (std::cbrt(nu) * out.norm_w);
  return out;
}

CouetteAuditResult couette_resolvent_audit(double nu, int k, double lambda,
                                           int trials, std::uint64_t seed,
                                           CouetteDomain domain) {
  if (trials < 1) throw InvalidArgument("couette audit needs trials >= 1");
  const PhysParams p(nu, k, 0.0);
  const Grid g = domain == CouetteDomain::unit_interval
                     ? Grid(0.0, 1.0, 4095)
                     : Grid(lambda - 4.0, lambda + 4.0, 8191);
  const ResolventProbe probe{p, lambda, kind::Couette{}};
  const auto A = shifted_operator(probe, g);
  const double rate = std::cbrt(nu * k * k);
  const double delta = std::cbrt(nu) * std::pow(std::abs(static_cast<double>(k)), -1.0 / 3.0);
  const double lo = g.a_end();
  const double hi = g.b_end();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CouetteAuditResult out;
  for (int t = 0; t < trials; ++t) {
    double half = delta * log_uniform(rng, 0.5, 4.0);
    double center;
    if (unit(rng) < 0.7) {
      center = lambda + (2.0 * unit(rng) - 1.0) * delta;
    } else {
      center = lo + unit(rng) * (hi - lo);
    }
    half = std::min(half, 0.5 * (hi - lo));
    center = std::clamp(center, lo + half, hi - half);
    const GridFunction w = sample_bump(g, center, half, random_phase(rng));
    const GridFunction F = A.apply(w);
    AuditCase c;
    c.nu = nu;
    c.lambda = lambda;
    c.trial = t;
    c.center = center;
    c.width = half;
    c.lhs = rate * weighted_norm(w, WeightSpec::unit());
    c.rhs = weighted_norm(F, WeightSpec::unit());
    c.quotient = c.rhs > 0.0 ? c.lhs / c.rhs : 0.0;
    out.worst_constant = std::max(out.worst_constant, c.quotient);
    out.cases.push_back(c);
  }
  return out;
}

}  // namespace tclab
