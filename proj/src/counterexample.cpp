#include "tclab/counterexample.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include <Eigen/Dense>

#include "tclab/error.hpp"

namespace tclab {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double psi_d3(double s) { return 60.0 - 360.0 * s + 360.0 * s * s; }
double psi_d4(double s) { return -360.0 + 720.0 * s; }

// Composite Simpson weights for `n` (odd) equally spaced nodes on [a, b].
std::vector<double> simpson_weights(int n, double a, double b) {
  if (n < 3 || n % 2 == 0) throw InvalidArgument("Simpson rule needs an odd node count >= 3");
  const double h = (b - a) / (n - 1);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    w[i] = (i == 0 || i == n - 1) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    w[i] *= h / 3.0;
  }
  return w;
}

std::vector<double> linspace(int n, double a, double b) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) x[i] = a + (b - a) * i / (n - 1);
  return x;
}

// Smooth step: 0 for x <= 0, 1 for x >= 1, C-infinity in between.
double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = std::exp(-1.0 / x);
  const double b = std::exp(-1.0 / (1.0 - x));
  return a / (a + b);
}

double sup_on(const RadialProfile& f, double lo, double hi) {
  double m = -std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) m = std::max(m, f(lo + (hi - lo) * i / 1000.0));
  return m;
}

double inf_on(const RadialProfile& f, double lo, double hi) {
  double m = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 1000; ++i) m = std::min(m, f(lo + (hi - lo) * i / 1000.0));
  return m;
}

void finish_series(RatioSeries& s) {
  const auto n = s.entries.size();
  if (n < 2) return;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& e : s.entries) {
    const double x = e.n, y = std::log(e.ratio);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double m = static_cast<double>(n);
  s.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  s.eventually_increasing = true;
  for (std::size_t i = n / 2; i + 1 < n; ++i) {
    if (!(s.entries[i + 1].ratio > s.entries[i].ratio)) s.eventually_increasing = false;
  }
  const std::size_t first = n >= 5 ? n - 5 : 0;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, mean = 0.0;
  int cnt = 0;
  for (std::size_t i = first; i + 1 < n; ++i) {
    const double q = s.entries[i + 1].ratio / s.entries[i].ratio;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    mean += q;
    ++cnt;
  }
  mean /= cnt;
  s.successive_spread = (hi - lo) / mean;
}

}  // namespace

void validate_weights(const WeightTriple& w, double lo, double hi, bool strict_decreasing) {
  if (!w.a1 || !w.a2 || !w.phi) throw InvalidArgument("weights: a1, a2 and phi are required");
  const int n = 2000;
  double prev = 0.0, mx = -std::numeric_limits<double>::infinity(),
         mn = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const double r = lo + (hi - lo) * i / n;
    const double a1 = w.a1(r), a2 = w.a2(r), ph = w.phi(r);
    if (!(a1 > 0.0) || !(a2 > 0.0) || !std::isfinite(a1) || !std::isfinite(a2)) {
      throw InvalidArgument("weights: a1 and a2 must be positive on the working domain");
    }
    if (!std::isfinite(ph)) throw InvalidArgument("weights: phi must be finite");
    if (strict_decreasing && i > 0 && !(ph < prev)) {
      throw InvalidArgument("weights: phi must be strictly decreasing");
    }
    prev = ph;
    mx = std::max(mx, ph);
    mn = std::min(mn, ph);
  }
  if (!(mx - mn > 1e-14 * (1.0 + std::abs(mx)))) {
    throw InvalidArgument("weights: phi must be non-constant");
  }
}

double boundary_signal(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  return std::exp(4.0 - 1.0 / ((t - 1.0) * (2.0 - t)));
}

double boundary_signal_dt(double t) {
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double q = (t - 1.0) * (2.0 - t);
  return boundary_signal(t) * (3.0 - 2.0 * t) / (q * q);
}

ShapeValue lift_profile(double s) {
  if (s <= 0.0) return {};
  if (s >= 1.0) return {1.0, 0.0, 0.0};
  const double s2 = s * s;
  return {s2 * s * (10.0 - 15.0 * s + 6.0 * s2), 30.0 * s2 * (1.0 - 2.0 * s + s2),
          60.0 * s - 180.0 * s2 + 120.0 * s2 * s};
}

LocalSolve local_boundary_solve(const PhysParams& p, const LocalProblem& lp, double t_end) {
  if (!(lp.delta > 0.0 && lp.delta <= 0.25)) throw InvalidArgument("delta must lie in (0, 1/4]");
  if (lp.n_interior < 64) throw InvalidArgument("local grid needs >= 64 interior nodes");
  if (!(lp.dt > 0.0) || !(t_end > lp.dt)) throw InvalidArgument("local solve needs 0 < dt < t_end");

  const std::size_t n = static_cast<std::size_t>(lp.n_interior);
  const Grid g(1.0, 1.0 + lp.delta, n);
  const double h = g.h();
  const double dt = lp.dt;
  const double nu = p.nu();
  const TridiagonalOperator A = assemble(kind::TC{}, p, g);
  const Complex couple = A.upper()[0];  // -nu / h^2, coupling to the boundary node

  std::vector<double> psi(n);
  for (std::size_t i = 0; i < n; ++i) psi[i] = lift_profile((g.node(i) - 1.0) / lp.delta).value;
  auto signal = [&](double t) { return lp.amplitude * boundary_signal(t); };

  // G_h at the midpoint of [t, t + dt]: discrete d_t f + A f + boundary coupling.
  std::vector<Complex> f_mid(n), Af(n);
  auto discrete_lift = [&](double t, std::span<Complex> out) {
    const double g0 = signal(t), g1 = signal(t + dt);
    for (std::size_t i = 0; i < n; ++i) f_mid[i] = 0.5 * (g0 + g1) * psi[i];
    A.apply(f_mid, Af);
    for (std::size_t i = 0; i < n; ++i) out[i] = (g1 - g0) / dt * psi[i] + Af[i];
    out[n - 1] += couple * 0.5 * (g0 + g1);
  };

  LocalSolve out{p, lp, h};
  const int steps = static_cast<int>(std::ceil(t_end / dt - 1e-9));
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.eta_tilde.reserve(static_cast<std::size_t>(steps) + 1);

  std::vector<Complex> eta(n, Complex(0.0));
  auto push_state = [&](double t) {
    std::vector<Complex> full(n + 2);
    const double gt = signal(t);
    full[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) full[i + 1] = eta[i] + gt * psi[i];
    full[n + 1] = gt;
    out.boundary_error = std::max(out.boundary_error, std::abs(full[0]) + std::abs(full[n + 1] - gt));
    double acc = 0.0;
    for (const Complex& v : eta) acc += std::norm(v);
    out.times.push_back(t);
    out.eta_norm.push_back(std::sqrt(acc * h));
    out.eta_tilde.push_back(std::move(full));
  };

  CrankNicolson cn(kind::TC{}, p, g, dt);
  const Forcing forcing = [&](double t_mid, std::span<Complex> o) {
    discrete_lift(t_mid - 0.5 * dt, o);
    for (Complex& v : o) v = -v;
  };

  std::vector<Complex> gh(n);
  push_state(0.0);
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    cn.step(t, eta, forcing);
    push_state((k + 1) * dt);
    if (t <= 1.5 && 1.5 < t + dt) {
      // Consistency of the discrete lift against the analytic G at the midpoint.
      const double tm = t + 0.5 * dt;
      discrete_lift(t, gh);
      const double e = 1e-4;
      const double g_1 = lp.amplitude * boundary_signal_dt(tm);
      const double g_2 = lp.amplitude * (boundary_signal_dt(tm + e) - boundary_signal_dt(tm - e)) / (2 * e);
      const double g_3 = lp.amplitude *
                         (boundary_signal_dt(tm + e) - 2 * boundary_signal_dt(tm) + boundary_signal_dt(tm - e)) / (e * e);
      const double gm = signal(tm);
      double scale = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g.node(i);
        const double s = (r - 1.0) / lp.delta;
        const ShapeValue ps = lift_profile(s);
        const Complex V = (nu * (p.k() * p.k() - 0.25) + Complex(0.0, p.k() * p.B())) / (r * r);
        const Complex G = g_1 * ps.value + gm * (-nu * ps.d2 / (lp.delta * lp.delta) + V * ps.value);
        out.residual_error = std::max(out.residual_error, std::abs(gh[i] - G));
        const double d2 = lp.delta * lp.delta;
        scale = std::max(scale, std::abs(g_3) * ps.value + std::abs(V) * std::abs(g_2) * ps.value +
                                    nu * std::abs(g_2 * ps.d2) / d2 +
                                    nu * std::abs(gm * psi_d4(s)) / (d2 * d2) +
                                    nu * std::abs(gm * psi_d3(s)) / (d2 * lp.delta));
      }
      out.residual_tolerance = 10.0 * (dt * dt + h * h) * scale;
    }
  }

  const double lambda1 = (4.0 / (h * h)) * std::pow(std::sin(std::numbers::pi * h / (2.0 * lp.delta)), 2);
  out.poincare_constant = 1.0 / (lp.delta * std::sqrt(lambda1));
  out.decay_bound = nu / (4.0 * out.poincare_constant * out.poincare_constant * lp.delta * lp.delta);

  // Least squares slope of log ||eta|| on [2 + 0.5/l, 2 + 5/l], l = nu pi^2 / delta^2.
  const double l_est = nu * std::numbers::pi * std::numbers::pi / (lp.delta * lp.delta);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (std::size_t i = 0; i < out.times.size(); ++i) {
    const double t = out.times[i];
    if (t < 2.0 + 0.5 / l_est || t > 2.0 + 5.0 / l_est || !(out.eta_norm[i] > 0.0)) continue;
    const double y = std::log(out.eta_norm[i]);
    sx += t;
    sy += y;
    sxx += t * t;
    sxy += t * y;
    ++cnt;
  }
  if (cnt >= 3) {
    out.decay_rate = -(cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
    if (!(out.decay_rate > 0.0)) throw NumericalFailure("local problem does not decay after t = 2");
  }
  return out;
}

Extension smooth_extension(std::span<const Complex> local, double delta, double h) {
  if (local.size() < 13) throw InvalidArgument("extension needs at least 12 local intervals");
  if (!(delta > 0.0 && delta < 1.0) || !(h > 0.0)) throw InvalidArgument("bad extension geometry");
  Extension out;
  out.h = h;
  out.seam = local.size() - 1;
  const double sigma = std::min(delta / 3.0, 1.0 - delta);
  const auto total = static_cast<std::size_t>(std::ceil((1.0 + delta) / h - 1e-9));
  out.values.assign(total + 1, Complex(0.0));
  std::copy(local.begin(), local.end(), out.values.begin());
  for (std::size_t j = 1; out.seam + j <= total; ++j) {
    const double s = static_cast<double>(j) * h;
    if (s >= sigma) break;
    if (3 * j > out.seam) throw InvalidArgument("extension reaches past r = 1");
    double cut = 1.0;
    if (s > 0.5 * sigma) cut = 1.0 - lift_profile((s - 0.5 * sigma) / (0.5 * sigma)).value;
    Complex v = 0.0;
    for (int m = 1; m <= 3; ++m) v += kReflection[m - 1] * local[out.seam - m * j];
    out.values[out.seam + j] = cut * v;
  }

  // One-sided jets at the seam from a quintic through the last six local
  // nodes (index units); the right jet follows from the reflection formula.
  Eigen::Matrix<double, 6, 6> V;
  Eigen::Matrix<Complex, 6, 1> b;
  for (int i = 0; i < 6; ++i) {
    const double x = -i;
    for (int k = 0; k < 6; ++k) V(i, k) = std::pow(x, k);
    b(i) = local[out.seam - i];
  }
  const Eigen::Matrix<Complex, 6, 1> c = V.cast<Complex>().partialPivLu().solve(b);
  const Complex left[3] = {c(0), c(1), 2.0 * c(2)};
  double jump = 0.0, scale = 0.0;
  for (int k = 0; k < 3; ++k) {
    double factor = 0.0;
    for (int m = 1; m <= 3; ++m) factor += kReflection[m - 1] * std::pow(-m, k);
    jump = std::max(jump, std::abs(factor * left[k] - left[k]));
    scale = std::max(scale, std::abs(left[k]));
  }
  out.seam_jump = scale > 0.0 ? jump / scale : 0.0;
  return out;
}

void write_ratio_csv(std::ostream& os, const RatioSeries& s, bool header) {
  if (header) os << "n,numerator,denominator,R_n,log_R_n\n";
  const auto prec = os.precision(17);
  for (const auto& e : s.entries) {
    os << e.n << ',' << e.numerator << ',' << e.denominator << ',' << e.ratio << ','
       << std::log(e.ratio) << '\n';
  }
  os.precision(prec);
}

TcCounterexample build_tc_sequence(const PhysParams& p, const WeightTriple& w,
                                   LocalProblem lp, int n_max) {
  if (n_max < 4) throw InvalidArgument("n_max must be >= 4");
  validate_weights(w, 1.0, 2.0 + lp.delta, true);
  const double phi_max = sup_on(w.phi, 1.0, 2.0 + lp.delta);

  TcCounterexample out{.local = LocalSolve{p, lp}};
  // Finiteness of the weighted norms needs the decay rate to beat sup phi.
  const double nu = p.nu();
  for (;; ++out.halvings) {
    const double l_est = nu * std::numbers::pi * std::numbers::pi / (lp.delta * lp.delta);
    const LocalSolve probe = local_boundary_solve(p, lp, 2.0 + 5.0 / l_est);
    if (probe.decay_bound > phi_max && probe.decay_rate > phi_max) break;
    if (out.halvings == 6) throw NumericalFailure("decay rate stays below sup phi after 6 halvings");
    lp.delta *= 0.5;
  }
  out.delta = lp.delta;

  double t_extra = std::log(1e8) / 2.0;
  for (int attempt = 0;; ++attempt) {
    const double l_est = nu * std::numbers::pi * std::numbers::pi / (lp.delta * lp.delta);
    LocalSolve local = local_boundary_solve(p, lp, 2.0 + 5.0 / l_est);
    const double rate = local.decay_rate;
    out.t_eff = 2.0 + t_extra / (rate - phi_max);
    local = local_boundary_solve(p, lp, out.t_eff);
    out.local = std::move(local);
    const LocalSolve& L = out.local;

    const double h = L.h;
    const double dt = lp.dt;
    const std::size_t steps = L.times.size();
    Extension e0 = smooth_extension(L.eta_tilde[0], lp.delta, h);
    const std::size_t total = e0.values.size() - 1;
    const std::size_t seam = e0.seam;
    const Grid ge(1.0, 1.0 + static_cast<double>(total) * h, total - 1);
    const TridiagonalOperator A = assemble(kind::TC{}, p, ge);

    std::vector<double> r(total - 1), phi(total - 1), a1sq(total - 1), a2sq(total - 1);
    for (std::size_t i = 0; i + 1 < total; ++i) {
      r[i] = ge.node(i);
      phi[i] = w.phi(r[i]);
      a1sq[i] = std::pow(w.a1(r[i]), 2);
      a2sq[i] = std::pow(w.a2(r[i]), 2);
    }
    const std::size_t m = r.size();
    std::vector<double> mass_num(m, 0.0), mass_den(m, 0.0);
    std::vector<double> num_direct(n_max + 1, 0.0), den_direct(n_max + 1, 0.0);
    double f_left = 0.0, f_all = 0.0;
    out.seam_jump = 0.0;

    std::vector<Complex> prev(m), cur(m), mid(m), Amid(m);
    auto interior = [&](const Extension& e, std::vector<Complex>& dst) {
      std::copy(e.values.begin() + 1, e.values.begin() + 1 + static_cast<long>(m), dst.begin());
    };
    interior(e0, prev);

    auto add_num = [&](double t, double weight, const std::vector<Complex>& v) {
      for (std::size_t i = 0; i < m; ++i) {
        const double d = a1sq[i] * std::norm(v[i]);
        if (d == 0.0) continue;
        mass_num[i] += weight * h * d * std::exp(2.0 * t * phi[i]);
        for (int n = 0; n <= n_max; ++n) {
          num_direct[n] += weight * h * d * std::exp(2.0 * (t + n) * phi[i]);
        }
      }
    };

    for (std::size_t k = 0; k < steps; ++k) {
      const double t = L.times[k];
      const double wt = (k == 0 || k + 1 == steps) ? 0.5 * dt : dt;
      if (k > 0) {
        const Extension ek = smooth_extension(L.eta_tilde[k], lp.delta, h);
        out.seam_jump = std::max(out.seam_jump, ek.seam_jump);
        interior(ek, cur);
        for (std::size_t i = 0; i < m; ++i) mid[i] = 0.5 * (prev[i] + cur[i]);
        A.apply(mid, Amid);
        const double tm = t - 0.5 * dt;
        for (std::size_t i = 0; i < m; ++i) {
          const Complex F = (cur[i] - prev[i]) / dt + Amid[i];
          const double d = std::norm(F);
          f_all += d;
          if (i + 1 < seam) f_left += d;
          const double dd = a2sq[i] * d;
          if (dd == 0.0) continue;
          mass_den[i] += dt * h * dd * std::exp(2.0 * tm * phi[i]);
          for (int n = 0; n <= n_max; ++n) {
            den_direct[n] += dt * h * dd * std::exp(2.0 * (tm + n) * phi[i]);
          }
        }
        std::swap(prev, cur);
      }
      add_num(t, wt, prev);
    }
    if (!(f_all > 0.0)) throw NumericalFailure("extension residual F vanishes");
    out.left_residual = std::sqrt(f_left / f_all);
    if (out.left_residual > 1e-6) {
      throw NumericalFailure("residual left of the seam exceeds 1e-6 of ||F||; run rejected");
    }

    // Weighted tail beyond t_eff from the decay rate and the final state.
    const double T = L.times.back();
    double last_sq = 0.0, a_max = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      last_sq += std::norm(prev[i]) * h;
      a_max = std::max({a_max, a1sq[i], a2sq[i]});
    }
    double tail = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      const double extra = a_max * last_sq * std::exp(2.0 * (T + n) * phi_max) /
                           (2.0 * (rate - phi_max));
      tail = std::max(tail, extra / num_direct[n]);
    }
    out.tail_bound = tail;
    if (tail > 1e-6 && attempt < 3) {
      t_extra *= 2.0;
      continue;
    }

    double centroid = 0.0, mass = 0.0;
    for (std::size_t i = 0; i + 1 < seam; ++i) {
      centroid += r[i] * mass_num[i];
      mass += mass_num[i];
    }
    centroid /= mass;
    out.eps_star = 1.0 + lp.delta - centroid;
    out.series.predicted = w.phi(centroid) - w.phi(1.0 + lp.delta);

    out.translation_gap = 0.0;
    for (int n = 0; n <= n_max; ++n) {
      double num_rw = 0.0, den_rw = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        num_rw += std::exp(2.0 * n * phi[i]) * mass_num[i];
        den_rw += std::exp(2.0 * n * phi[i]) * mass_den[i];
      }
      RatioEntry e{n, std::sqrt(num_direct[n]), std::sqrt(den_direct[n]), 0.0};
      e.ratio = e.numerator / e.denominator;
      const double rw = std::sqrt(num_rw / den_rw);
      out.translation_gap = std::max(out.translation_gap, std::abs(rw - e.ratio) / e.ratio);
      out.series.entries.push_back(e);
    }
    out.finite_num = out.series.entries.front().numerator;
    out.finite_den = out.series.entries.front().denominator;
    finish_series(out.series);
    return out;
  }
}

HeatDomain parse_heat_domain(const std::string& name) {
  if (name == "line") return HeatDomain::line;
  if (name == "half-line-dirichlet") return HeatDomain::half_line_dirichlet;
  if (name == "interval-dirichlet") return HeatDomain::interval_dirichlet;
  throw InvalidArgument("unknown heat domain '" + name + "'");
}

const char* heat_domain_name(HeatDomain d) noexcept {
  switch (d) {
    case HeatDomain::line: return "line";
    case HeatDomain::half_line_dirichlet: return "half-line-dirichlet";
    case HeatDomain::interval_dirichlet: return "interval-dirichlet";
  }
  return "?";
}

double log_heat_kernel(HeatDomain d, double length, double t, double x, double y) {
  if (!(t > 0.0)) return kNegInf;
  const double base = -0.5 * std::log(4.0 * std::numbers::pi * t);
  const double free = base - (x - y) * (x - y) / (4.0 * t);
  switch (d) {
    case HeatDomain::line:
      return free;
    case HeatDomain::half_line_dirichlet: {
      if (x <= 0.0 || y <= 0.0) return kNegInf;
      return free + std::log1p(-std::exp(-x * y / t));
    }
    case HeatDomain::interval_dirichlet: {
      if (x <= 0.0 || y <= 0.0 || x >= length || y >= length) return kNegInf;
      // Images: sum_m H(x - y + 2mL) - H(x + y + 2mL), scaled by the largest term.
      double e_max = -std::numeric_limits<double>::infinity();
      const int M = 8 + static_cast<int>(std::ceil(std::sqrt(t) / length));
      for (int mm = -M; mm <= M; ++mm) {
        const double z = x - y + 2.0 * mm * length;
        e_max = std::max(e_max, -z * z / (4.0 * t));
      }
      double sum = 0.0;
      for (int mm = -M; mm <= M; ++mm) {
        const double zp = x - y + 2.0 * mm * length;
        const double zm = x + y + 2.0 * mm * length;
        sum += std::exp(-zp * zp / (4.0 * t) - e_max) - std::exp(-zm * zm / (4.0 * t) - e_max);
      }
      if (!(sum > 0.0)) return kNegInf;
      return base + e_max + std::log(sum);
    }
  }
  return kNegInf;
}

double heat_kernel(HeatDomain d, double length, double t, double x, double y) {
  return std::exp(log_heat_kernel(d, length, t, x, y));
}

double time_cutoff(double s) {
  return smooth_step((s - 0.125) / 0.125) * smooth_step((0.875 - s) / 0.125);
}

double space_cutoff(double y, Interval v1) {
  const double q = 0.25 * (v1.hi - v1.lo);
  return smooth_step((y - v1.lo) / q) * smooth_step((v1.hi - y) / q);
}

HeatCounterexample heat_kernel_counterexample(const HeatSetup& s) {
  if (!(s.v1.lo < s.v1.hi) || !(s.v2.lo < s.v2.hi)) throw InvalidArgument("regions must be nonempty intervals");
  if (!(s.x0 > s.v2.lo && s.x0 < s.v2.hi)) throw InvalidArgument("x0 must lie in V2");
  if (s.domain != HeatDomain::line && (s.v1.lo < 0.0 || s.v2.lo < 0.0)) {
    throw InvalidArgument("regions must lie in the domain");
  }
  if (s.domain == HeatDomain::interval_dirichlet && (s.v1.hi > s.length || s.v2.hi > s.length)) {
    throw InvalidArgument("regions must lie in the interval");
  }
  if (s.n_max < 2) throw InvalidArgument("n_max must be >= 2");
  const WeightTriple& w = s.weights;
  validate_weights(w, std::min(s.v1.lo, s.v2.lo), std::max(s.v1.hi, s.v2.hi), false);

  HeatCounterexample out;
  out.d1 = sup_on(w.phi, s.v1.lo, s.v1.hi);
  out.d2 = inf_on(w.phi, s.v2.lo, s.v2.hi);
  if (!(out.d1 < out.d2)) throw InvalidArgument("need sup phi on V1 < inf phi on V2");
  out.series.predicted = out.d2 - out.d1;

  const double L = s.length;
  const int nq = s.quad_nodes;
  const std::vector<double> ys = linspace(nq, s.v1.lo, s.v1.hi);
  const std::vector<double> wy = simpson_weights(nq, s.v1.lo, s.v1.hi);
  std::vector<double> xi(ys.size());
  for (std::size_t j = 0; j < ys.size(); ++j) xi[j] = space_cutoff(ys[j], s.v1);

  // w(t, x) by Duhamel quadrature over s in [1/8, min(t, 7/8)], y in V1.
  auto duhamel = [&](double t, double x) {
    const double s_hi = std::min(t, 0.875);
    if (s_hi <= 0.125) return 0.0;
    const std::vector<double> ss = linspace(nq, 0.125, s_hi);
    const std::vector<double> ws = simpson_weights(nq, 0.125, s_hi);
    double acc = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      const double z = time_cutoff(ss[i]);
      if (z == 0.0 || t - ss[i] <= 0.0) continue;
      for (std::size_t j = 0; j < ys.size(); ++j) {
        if (xi[j] == 0.0) continue;
        const double e = log_heat_kernel(s.domain, L, t - ss[i], x, ys[j]) +
                         log_heat_kernel(s.domain, L, 1.0 - ss[i], s.x0, ys[j]);
        acc += ws[i] * wy[j] * z * xi[j] * std::exp(e);
      }
    }
    return acc;
  };

  {
    const std::vector<double> ss = linspace(nq, 0.125, 0.875);
    const std::vector<double> ws = simpson_weights(nq, 0.125, 0.875);
    double acc = 0.0;
    for (std::size_t i = 0; i < ss.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        acc += ws[i] * wy[j] * time_cutoff(ss[i]) * xi[j] *
               std::exp(2.0 * log_heat_kernel(s.domain, L, 1.0 - ss[i], s.x0, ys[j]));
      }
    }
    out.w_at_x0 = acc;
  }
  out.w_at_x0_duhamel = duhamel(1.0, s.x0);

  const int nw = s.window_nodes;
  const std::vector<double> ts = linspace(nw, s.window_t.lo, s.window_t.hi);
  const std::vector<double> wt = simpson_weights(nw, s.window_t.lo, s.window_t.hi);
  const std::vector<double> xs = linspace(nw, s.v2.lo, s.v2.hi);
  const std::vector<double> wx = simpson_weights(nw, s.v2.lo, s.v2.hi);
  std::vector<double> num(s.n_max + 1, 0.0), den(s.n_max + 1, 0.0);
  for (std::size_t a = 0; a < ts.size(); ++a) {
    for (std::size_t b = 0; b < xs.size(); ++b) {
      const double v = duhamel(ts[a], xs[b]);
      const double base = wt[a] * wx[b] * std::pow(w.a1(xs[b]) * v, 2);
      for (int n = 0; n <= s.n_max; ++n) {
        num[n] += base * std::exp(2.0 * (ts[a] + n) * w.phi(xs[b]));
      }
    }
  }
  {
    const std::vector<double> ss = linspace(nq, 0.125, 0.875);
    const std::vector<double> ws = simpson_weights(nq, 0.125, 0.875);
    for (std::size_t i = 0; i < ss.size(); ++i) {
      for (std::size_t j = 0; j < ys.size(); ++j) {
        const double f = time_cutoff(ss[i]) * xi[j] *
                         heat_kernel(s.domain, L, 1.0 - ss[i], s.x0, ys[j]);
        const double base = ws[i] * wy[j] * std::pow(w.a2(ys[j]) * f, 2);
        for (int n = 0; n <= s.n_max; ++n) {
          den[n] += base * std::exp(2.0 * (ss[i] + n) * w.phi(ys[j]));
        }
      }
    }
  }
  for (int n = 0; n <= s.n_max; ++n) {
    RatioEntry e{n, std::sqrt(num[n]), std::sqrt(den[n]), 0.0};
    if (!(e.denominator > 0.0)) throw NumericalFailure("forcing norm underflowed");
    e.ratio = e.numerator / e.denominator;
    out.series.entries.push_back(e);
  }
  finish_series(out.series);
  return out;
}

}  // namespace tclab
