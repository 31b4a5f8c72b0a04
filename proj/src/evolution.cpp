#include "tclab/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <string>

#include "tclab/analysis.hpp"
#include "tclab/error.hpp"
#include "tclab/resolvent.hpp"

namespace tclab {
namespace {

constexpr Complex kI{0.0, 1.0};

OperatorKind at_time(const OperatorKind& k, double t) {
  if (std::holds_alternative<kind::W1>(k)) return kind::W1{t};
  return k;
}

// h * sum |f|^2, and the same with f_i scaled by m_i.
double norm_sq(std::span<const Complex> f, double h) {
  double acc = 0.0;
  for (const Complex& v : f) acc += std::norm(v);
  return acc * h;
}

double scaled_norm_sq(std::span<const Complex> f, std::span<const double> m,
                      double h) {
  double acc = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) acc += std::norm(f[i] * m[i]);
  return acc * h;
}

// ||D f||^2 with the staggered forward difference of f_i * m_i (zero ends).
double grad_norm_sq(std::span<const Complex> f, std::span<const double> m,
                    double h) {
  double acc = 0.0;
  Complex prev = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const Complex cur = m.empty() ? f[i] : f[i] * m[i];
    acc += std::norm(cur - prev);
    prev = cur;
  }
  acc += std::norm(prev);
  return acc / h;
}

// Accumulates the three E-type norms of eta = m * w over a run.
class TraceAccumulator {
 public:
  TraceAccumulator(double nu, double mu) : nu_(nu), mu_(mu) {}

  void add(double t, std::span<const Complex> w, std::span<const double> m,
           std::span<const double> inv_r, double h) {
    const double l2 = std::sqrt(m.empty() ? norm_sq(w, h) : scaled_norm_sq(w, m, h));
    sup_.add(t, l2);
    grad_.add(t, grad_norm_sq(w, m, h));
    double acc = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      const double s = m.empty() ? inv_r[i] : inv_r[i] * m[i];
      acc += std::norm(w[i]) * s * s;
    }
    over_r_.add(t, acc * h);
  }

  SpaceTimeTrace trace() const {
    SpaceTimeTrace out;
    out.sup_l2 = sup_.sup();
    out.visc_grad = std::sqrt(nu_ * grad_.integral());
    out.weighted_l2 = std::sqrt(mu_ * over_r_.integral());
    return out;
  }

  double over_r_integral() const { return over_r_.integral(); }

 private:
  double nu_, mu_;
  TimeAccumulator sup_, grad_, over_r_;
};

std::vector<double> nodes_pow(const Grid& g, double p) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) out[i] = std::pow(g.node(i), p);
  return out;
}

int step_count(double t_end, double dt) {
  const double n = std::ceil(t_end / dt - 1e-9);
  if (!(n >= 1.0) || n > 1e8) throw InvalidArgument("unreasonable step count");
  return static_cast<int>(n);
}

// Region integrals of the W1 flow and their two bounds, accumulated per step.
class RegionAccumulator {
 public:
  RegionAccumulator(const Grid& g, double kappa, int j_max)
      : g_(g), kappa_(kappa), sup_chi_(static_cast<std::size_t>(j_max) + 2, 0.0) {
    const DyadicPartition part(j_max);
    chi_sq_.resize(sup_chi_.size());
    for (std::size_t j = 0; j < sup_chi_.size(); ++j) {
      chi_sq_[j].resize(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) {
        const double c = part.chi(static_cast<int>(j), g.node(i)).value;
        chi_sq_[j][i] = c * c;
      }
    }
  }

  void add(double t, std::span<const Complex> w1) {
    const double h = g_.h();
    double d1 = 0.0, d2 = 0.0, b1 = 0.0;
    for (std::size_t i = 0; i < w1.size(); ++i) {
      const double r = g_.node(i);
      const double a = std::norm(w1[i]);
      const double v = kappa_ * a / (r * r);
      if (r * r <= kappa_ * t) {
        d1 += v;
      } else {
        d2 += v;
      }
      const double s = t / (r * r * r);
      b1 += kappa_ * kappa_ * kappa_ * s * s * a;
    }
    i1_.add(t, d1 * h);
    i2_.add(t, d2 * h);
    bound1_.add(t, b1 * h);
    for (std::size_t j = 0; j < chi_sq_.size(); ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < w1.size(); ++i) acc += chi_sq_[j][i] * std::norm(w1[i]);
      sup_chi_[j] = std::max(sup_chi_[j], acc * h);
    }
  }

  RegionSplit result() const {
    RegionSplit out;
    out.i1 = i1_.integral();
    out.i2 = i2_.integral();
    out.total = out.i1 + out.i2;
    out.bound1 = 2.0 * bound1_.integral();
    double s = 0.0;
    for (double v : sup_chi_) s += v;
    out.bound2 = 36.0 * s;
    return out;
  }

 private:
  Grid g_;
  double kappa_;
  std::vector<std::vector<double>> chi_sq_;
  std::vector<double> sup_chi_;
  TimeAccumulator i1_, i2_, bound1_;
};

}  // namespace

CrankNicolson::CrankNicolson(const OperatorKind& kind, const PhysParams& p,
                             const Grid& g, double dt)
    : kind_(kind),
      params_(p),
      grid_(g),
      dt_(dt),
      time_dependent_(std::holds_alternative<kind::W1>(kind)),
      rhs_(g.size()),
      force_(g.size()) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be positive");
  if (!time_dependent_) prepare(0.0);
}

void CrankNicolson::prepare(double t_mid) {
  const TridiagonalOperator A = assemble(at_time(kind_, t_mid), params_, grid_);
  explicit_.emplace(A.scaled(-0.5 * dt_).shifted(1.0));
  implicit_.emplace(A.scaled(0.5 * dt_).shifted(1.0));
}

void CrankNicolson::step(double t, std::span<Complex> w, const Forcing& f) {
  if (w.size() != grid_.size()) throw GridMismatch("state size does not match grid");
  if (time_dependent_) prepare(t + 0.5 * dt_);
  explicit_->apply(w, rhs_);
  if (f) {
    f(t + 0.5 * dt_, force_);
    for (std::size_t i = 0; i < rhs_.size(); ++i) rhs_[i] += dt_ * force_[i];
  }
  implicit_->solve_in_place(rhs_);
  for (const Complex& v : rhs_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
      throw NumericalFailure("Crank-Nicolson produced a non-finite value");
    }
  }
  std::copy(rhs_.begin(), rhs_.end(), w.begin());
}

double decay_rate(const PhysParams& p, const OperatorKind& k) {
  if (std::holds_alternative<kind::Couette>(k)) return p.couette_rate();
  if (p.B() == 0.0 || p.k() == 0) return std::max(p.nu() * p.k() * p.k(), p.nu());
  return p.kappa();
}

double default_dt(const PhysParams& p, const OperatorKind& k) {
  const double shear = std::holds_alternative<kind::Couette>(k)
                           ? std::abs(static_cast<double>(p.k()))
                           : std::abs(p.k() * p.B());
  double dt = std::min(0.1 / decay_rate(p, k), 0.1);
  if (shear > 0.0) dt = std::min(dt, 0.1 / shear);
  return dt;
}

double default_t_end(const PhysParams& p, const OperatorKind& k) {
  return 20.0 / decay_rate(p, k);
}

EvolutionSetup EvolutionSetup::make(const PhysParams& p, const Grid& g,
                                    const OperatorKind& k, GridFunction initial) {
  require_same_grid(g, initial.grid());
  return {p, g, default_dt(p, k), default_t_end(p, k), k, {}, std::move(initial)};
}

void TimeAccumulator::add(double t, double value) {
  if (started_) integral_ += 0.5 * (t - t_prev_) * (value + v_prev_);
  started_ = true;
  t_prev_ = t;
  v_prev_ = value;
  sup_ = std::max(sup_, value);
}

EvolutionResult evolve(const EvolutionSetup& setup, const EvolveOptions& opt) {
  const Grid& g = setup.grid;
  require_same_grid(g, setup.initial.grid());
  if (!(setup.dt > 0.0) || !(setup.t_end >= setup.dt)) {
    throw InvalidArgument("evolve needs 0 < dt <= t_end");
  }
  if (!setup.initial.all_finite()) throw InvalidArgument("initial data not finite");
  const int steps = step_count(setup.t_end, setup.dt);
  const double dt = setup.t_end / steps;

  if (opt.check_accretive) {
    const TridiagonalOperator A = assemble(at_time(setup.kind, 0.0), setup.params, g);
    const double m = accretivity_check(A, 200);
    if (m < -1e-12 * A.norm_inf()) throw InvalidArgument("assembled operator is not accretive");
  }

  const PhysParams& p = setup.params;
  const std::vector<double> inv_r = nodes_pow(g, -1.0);
  TraceAccumulator acc(p.nu(), p.mu());
  CrankNicolson cn(setup.kind, p, g, dt);

  EvolutionResult out{setup.initial, {}, {}, {}, {}, steps, dt, 0.0, 0};
  out.times.reserve(static_cast<std::size_t>(steps) + 1);
  out.norms.reserve(static_cast<std::size_t>(steps) + 1);
  std::span<Complex> w = out.final.values();
  const double h = g.h();

  auto record = [&](int n, double t) {
    acc.add(t, w, {}, inv_r, h);
    out.times.push_back(t);
    out.norms.push_back(std::sqrt(norm_sq(w, h)));
    if (opt.snapshot_stride > 0 && n % opt.snapshot_stride == 0) {
      out.snapshots.push_back({t, out.final});
    }
    if (opt.observer) opt.observer(t, out.final);
  };

  record(0, 0.0);
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    try {
      cn.step(t, w, setup.forcing);
    } catch (const Error& e) {
      throw NumericalFailure("step " + std::to_string(n) + ": " + e.what());
    }
    const double t_next = (n + 1 == steps) ? setup.t_end : (n + 1) * dt;
    const double prev = out.norms.back();
    record(n + 1, t_next);
    if (!setup.forcing) {
      const double cur = out.norms.back();
      if (prev > 0.0) out.max_step_growth = std::max(out.max_step_growth, cur / prev);
      if (cur > prev * (1.0 + 1e-13)) ++out.growth_violations;
    }
  }
  out.trace = acc.trace();
  return out;
}

GridFunction bump_data(const Grid& g, double center, double half_width) {
  return GridFunction::sample(g, [&](double r) { return Complex(bump(r, center, half_width)); });
}

DecayAudit homogeneous_decay_audit(const EvolutionSetup& setup,
                                   const std::vector<int>& q_list) {
  if (q_list.empty()) throw InvalidArgument("q_list is empty");
  if (setup.forcing) throw InvalidArgument("decay audit needs forcing = none");
  const PhysParams& p = setup.params;
  const int q_max = *std::max_element(q_list.begin(), q_list.end());
  if (*std::min_element(q_list.begin(), q_list.end()) < 0) {
    throw InvalidArgument("q must be nonnegative");
  }
  const double kb = std::abs(p.k() * p.B());
  if (kb == 0.0 || p.nu() / kb > std::pow(1.0 + q_max, -3.0) / 64.0) {
    throw InvalidArgument("decay audit hypothesis nu/|kB| <= (1+q)^-3/64 violated");
  }
  const Grid& g = setup.grid;
  const double h = g.h();
  const double kappa = p.kappa();
  const std::vector<double> inv_r = nodes_pow(g, -1.0);
  const std::vector<double> inv_r2 = nodes_pow(g, -2.0);

  // q = 0 is always tracked for the recurrence fit.
  std::vector<int> qs = q_list;
  for (int q = 0; q <= q_max; ++q) {
    if (std::find(qs.begin(), qs.end(), q) == qs.end()) qs.push_back(q);
  }
  std::sort(qs.begin(), qs.end());

  std::vector<TraceAccumulator> accs(qs.size(), TraceAccumulator(p.nu(), p.mu()));
  std::vector<double> m(g.size());
  double weighted_decay = 0.0;

  EvolveOptions opt;
  opt.observer = [&](double t, const GridFunction& w) {
    std::fill(m.begin(), m.end(), 1.0);
    int power = 0;
    for (std::size_t a = 0; a < qs.size(); ++a) {
      for (; power < qs[a]; ++power) {
        for (std::size_t i = 0; i < g.size(); ++i) m[i] *= 1.0 + kappa * t * inv_r2[i];
      }
      accs[a].add(t, w.values(), m, inv_r, h);
    }
    const double r4 = std::sqrt(scaled_norm_sq(w.values(), inv_r2, h));
    weighted_decay = std::max(weighted_decay, (1.0 + kappa * t) * r4);
  };

  DecayAudit out{{}, 0.0, 0.0, 0.0, evolve(setup, opt)};
  const double n0 = out.run.norms.front();
  if (n0 == 0.0) {
    for (int q : q_list) out.rows.push_back({q, {}, 0.0, 0.0});
    return out;
  }
  out.weighted_decay = weighted_decay / n0;

  std::vector<double> energy(qs.size());
  for (std::size_t a = 0; a < qs.size(); ++a) {
    const SpaceTimeTrace tr = accs[a].trace();
    energy[a] = tr.energy() / n0;
  }
  for (int q : q_list) {
    const auto a = static_cast<std::size_t>(std::find(qs.begin(), qs.end(), q) - qs.begin());
    DecayRow row;
    row.q = q;
    row.trace = accs[a].trace();
    row.trace.extra["kappa_over_r"] = std::sqrt(kappa * accs[a].over_r_integral());
    row.energy_ratio = energy[a];
    row.theorem_ratio = (row.trace.sup_l2 + row.trace.extra["kappa_over_r"]) / n0;
    out.rows.push_back(std::move(row));
  }
  out.c1 = energy[0];
  for (std::size_t a = 1; a < qs.size(); ++a) {
    const double c = std::max(0.0, energy[a] - out.c1) / (qs[a] * energy[a - 1]);
    out.c2 = std::max(out.c2, c);
  }
  return out;
}

InhomogeneousAudit inhomogeneous_audit(const EvolutionSetup& setup) {
  const Grid& g = setup.grid;
  const double h = g.h();
  for (const Complex& v : setup.initial.values()) {
    if (v != Complex(0.0)) throw InvalidArgument("inhomogeneous audit needs zero initial data");
  }
  InhomogeneousAudit out;
  if (!setup.forcing) return out;

  const std::vector<double> r = nodes_pow(g, 1.0);
  std::vector<Complex> f(g.size());
  const EvolutionResult run = evolve(setup);
  // ||r f||_{L2_T L2} by the midpoint rule at the times the scheme samples f.
  double acc = 0.0;
  for (int n = 0; n < run.steps; ++n) {
    setup.forcing((n + 0.5) * run.dt, f);
    acc += scaled_norm_sq(f, r, h) * run.dt;
  }
  out.forcing_norm = std::sqrt(acc);
  out.trace = run.trace;
  if (out.forcing_norm == 0.0) return out;
  out.quotient = out.trace.energy() / (out.forcing_norm / std::sqrt(setup.params.mu()));
  return out;
}

RegionSplit region_split_measure(const std::vector<Snapshot>& snapshots,
                                 double kappa, int j_max) {
  if (snapshots.empty()) return {};
  RegionAccumulator acc(snapshots.front().w.grid(), kappa, j_max);
  for (const Snapshot& s : snapshots) {
    require_same_grid(snapshots.front().w.grid(), s.w.grid());
    acc.add(s.t, s.w.values());
  }
  return acc.result();
}

double decomposition_defect(const PhysParams& p, const Grid& g,
                            const GridFunction& w1_start, double t, double dt) {
  require_same_grid(g, w1_start.grid());
  GridFunction w1_end = w1_start;
  CrankNicolson cn(kind::W1{t}, p, g, dt);
  cn.step(t, w1_end.values());

  const double kb = p.k() * p.B();
  const double tm = t + 0.5 * dt;
  auto conj_factor = [&](double s, double r) { return std::exp(-kI * kb * s / (r * r)); };
  GridFunction v0(g), v1(g), vm(g), u(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    v0[i] = conj_factor(t, r) * w1_start[i];
    v1[i] = conj_factor(t + dt, r) * w1_end[i];
    vm[i] = 0.5 * (v0[i] + v1[i]);
    u[i] = 0.5 * (w1_start[i] + w1_end[i]);
  }
  const TridiagonalOperator T = assemble(kind::TC{}, p, g);
  const GridFunction Tv = T.apply(vm);
  const GridFunction du = derivative(u);
  const double th2 = p.theta_cap() * p.theta_cap();
  GridFunction diff(g), rhs(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    const Complex lhs = (v1[i] - v0[i]) / dt + Tv[i];
    rhs[i] = -p.nu() * conj_factor(tm, r) *
             ((th2 + 0.25) / (r * r) * u[i] + 4.0 * kI * kb * tm / (r * r * r) * du[i] -
              6.0 * kI * kb * tm / (r * r * r * r) * u[i]);
    diff[i] = lhs - rhs[i];
  }
  const double scale = std::sqrt(norm_sq(u.values(), g.h()));
  if (scale == 0.0) return 0.0;
  return std::sqrt(norm_sq(diff.values(), g.h())) / scale;
}

DecompositionAudit decomposition_audit(const EvolutionSetup& setup) {
  if (setup.forcing) throw InvalidArgument("decomposition audit needs forcing = none");
  if (!std::holds_alternative<kind::TC>(setup.kind)) {
    throw InvalidArgument("decomposition audit evolves the TC operator");
  }
  const Grid& g = setup.grid;
  require_same_grid(g, setup.initial.grid());
  const PhysParams& p = setup.params;
  const int steps = step_count(setup.t_end, setup.dt);
  const double dt = setup.t_end / steps;
  const double h = g.h();
  const double kappa = p.kappa();
  const double kb = p.k() * p.B();

  DecompositionAudit out;
  out.norm0 = std::sqrt(norm_sq(setup.initial.values(), h));
  out.defect_time = dt;
  out.defect_rel = decomposition_defect(p, g, setup.initial, 0.0, dt);

  const std::vector<double> inv_r = nodes_pow(g, -1.0);
  const std::vector<double> inv_r2 = nodes_pow(g, -2.0);
  const std::vector<double> inv_r3 = nodes_pow(g, -3.0);
  const std::vector<double> inv_r5 = nodes_pow(g, -5.0);

  TraceAccumulator acc_w(p.nu(), p.mu()), acc_w1(p.nu(), p.mu()),
      acc_w2(p.nu(), p.mu()), acc_wt(p.nu(), p.mu());
  TimeAccumulator shear, lemma;
  RegionAccumulator region(g, kappa, 12);

  GridFunction w = setup.initial, w1 = setup.initial;
  std::vector<Complex> w2(g.size());
  std::vector<double> m(g.size());
  CrankNicolson cn_tc(kind::TC{}, p, g, dt);
  CrankNicolson cn_w1(kind::W1{0.0}, p, g, dt);

  auto record = [&](double t) {
    acc_w.add(t, w.values(), {}, inv_r, h);
    acc_w1.add(t, w1.values(), {}, inv_r, h);
    for (std::size_t i = 0; i < g.size(); ++i) {
      w2[i] = w[i] - std::exp(-kI * kb * t * inv_r2[i]) * w1[i];
      m[i] = kappa * t * inv_r2[i];
    }
    acc_w2.add(t, w2, {}, inv_r, h);
    acc_wt.add(t, w1.values(), m, inv_r, h);
    for (std::size_t i = 0; i < g.size(); ++i) m[i] = kb * t * inv_r3[i];
    shear.add(t, scaled_norm_sq(w1.values(), m, h));
    for (std::size_t i = 0; i < g.size(); ++i) m[i] = t * t * inv_r5[i];
    lemma.add(t, scaled_norm_sq(w1.values(), m, h));
    region.add(t, w1.values());
  };

  record(0.0);
  for (int n = 0; n < steps; ++n) {
    const double t = n * dt;
    try {
      cn_tc.step(t, w.values());
      cn_w1.step(t, w1.values());
    } catch (const Error& e) {
      throw NumericalFailure("step " + std::to_string(n) + ": " + e.what());
    }
    record((n + 1 == steps) ? setup.t_end : (n + 1) * dt);
  }

  out.w = acc_w.trace();
  out.w1 = acc_w1.trace();
  out.w2 = acc_w2.trace();
  out.wtilde = acc_wt.trace();
  const double shear_norm = std::sqrt(p.nu() * shear.integral());
  const double lemma_norm = std::pow(kappa, 2.5) * std::sqrt(lemma.integral());
  out.w1.extra["shear"] = shear_norm;
  out.w1.extra["lemma"] = lemma_norm;
  out.split = region.result();
  if (out.norm0 > 0.0) {
    out.shear_ratio = shear_norm / out.norm0;
    out.lemma_ratio = lemma_norm / out.norm0;
  }
  return out;
}

SemigroupCheck gp_semigroup_check(const EvolutionSetup& couette, double t_horizon) {
  if (!std::holds_alternative<kind::Couette>(couette.kind)) {
    throw InvalidArgument("semigroup check needs the Couette operator");
  }
  if (couette.forcing) throw InvalidArgument("semigroup check needs forcing = none");
  const Grid& g = couette.grid;
  SemigroupCheck out;
  const PseudoBoundResult pb =
      pseudo_bound(couette.kind, couette.params, g, WeightSpec::unit(), WeightSpec::unit(),
                   default_lambda_range(couette.kind, g), 64);
  out.psi = pb.psi;
  if (!(out.psi > 0.0)) throw NumericalFailure("pseudo bound is not positive");
  out.t_max = t_horizon / out.psi;

  EvolutionSetup s = couette;
  s.t_end = out.t_max;
  s.dt = std::min(couette.dt, out.t_max / 50.0);
  const EvolutionResult run = evolve(s);
  const double n0 = run.norms.front();
  out.margin = std::numeric_limits<double>::infinity();
  if (n0 == 0.0) {
    out.margin = std::numbers::pi / 2.0;
    return out;
  }
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const double t = run.times[i];
    const double lr = std::log(run.norms[i] / n0);
    out.samples.emplace_back(t, lr);
    out.margin = std::min(out.margin, -t * out.psi + std::numbers::pi / 2.0 - lr);
  }
  return out;
}

std::vector<ExponentialWeightProbe> exponential_weight_probe(
    const EvolutionSetup& setup, const std::vector<double>& c_list) {
  if (c_list.empty()) throw InvalidArgument("c_list is empty");
  const Grid& g = setup.grid;
  const double h = g.h();
  const double kappa = setup.params.kappa();
  const std::vector<double> inv_r2 = nodes_pow(g, -2.0);
  std::vector<std::vector<std::pair<double, double>>> series(c_list.size());
  std::vector<double> m(g.size());

  EvolveOptions opt;
  opt.observer = [&](double t, const GridFunction& w) {
    for (std::size_t a = 0; a < c_list.size(); ++a) {
      for (std::size_t i = 0; i < g.size(); ++i) m[i] = std::exp(c_list[a] * kappa * t * inv_r2[i]);
      series[a].emplace_back(t, std::sqrt(scaled_norm_sq(w.values(), m, h)));
    }
  };
  const EvolutionResult run = evolve(setup, opt);
  const double n0 = run.norms.front();

  std::vector<ExponentialWeightProbe> out;
  for (std::size_t a = 0; a < c_list.size(); ++a) {
    ExponentialWeightProbe e;
    e.c = c_list[a];
    const auto& s = series[a];
    for (const auto& [t, v] : s) e.sup_ratio = std::max(e.sup_ratio, n0 > 0 ? v / n0 : 0.0);
    e.final_ratio = n0 > 0 ? s.back().second / n0 : 0.0;
    const std::size_t i0 = s.size() * 3 / 4;
    if (s[i0].second > 0.0 && s.back().second > 0.0 && s.back().first > s[i0].first) {
      e.late_slope = (std::log(s.back().second) - std::log(s[i0].second)) /
                     (s.back().first - s[i0].first);
    }
    out.push_back(e);
  }
  return out;
}

void write_snapshot(std::ostream& os, const GridFunction& w, const PhysParams& p,
                    double dt, double t) {
  const Grid& g = w.grid();
  const auto prec = os.precision(17);
  os << "# nu=" << p.nu() << "\n# k=" << p.k() << "\n# B=" << p.B()
     << "\n# Theta=" << p.theta_cap() << "\n# dt=" << dt << "\n# t=" << t
     << "\n# R_max=" << g.b_end() << "\n# n_interior=" << g.size() << "\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    os << g.node(i) << ' ' << w[i].real() << ' ' << w[i].imag() << '\n';
  }
  os.precision(prec);
}

}  // namespace tclab
