#include "tclab/experiments.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <thread>

#include "tclab/analysis.hpp"
#include "tclab/counterexample.hpp"
#include "tclab/evolution.hpp"
#include "tclab/resolvent.hpp"

#ifndef TCLAB_VERSION
#define TCLAB_VERSION "unknown"
#endif

namespace tclab {
namespace {

using EC = ExperimentConfig;
using Row = std::vector<std::string>;

struct Tuple {
  std::size_t index = 0;
  double nu = 0.0;
  int k = 1;
  double B = 0.0;
};

std::string cell(double x) { return format_number(x); }
std::string cell(int x) { return std::to_string(x); }
std::string cell(unsigned long x) { return std::to_string(x); }
std::string cell(bool x) { return x ? "1" : "0"; }
std::string cell(const std::string& s) { return s; }
std::string cell(const char* s) { return s; }

template <class... A>
Row row(const Tuple& t, const A&... a) {
  return Row{cell(t.index), cell(t.nu), cell(t.k), cell(t.B), cell(a)...};
}

std::vector<std::string> header(std::initializer_list<const char*> rest) {
  std::vector<std::string> h{"tuple", "nu", "k", "B"};
  h.insert(h.end(), rest.begin(), rest.end());
  return h;
}

std::vector<Tuple> make_tuples(const EC& c) {
  std::vector<Tuple> out;
  for (double nu : c.nu) {
    for (int k : c.k) {
      for (double B : c.B) out.push_back({out.size(), nu, k, B});
    }
  }
  return out;
}

std::string describe(const Tuple& t) {
  return "tuple " + std::to_string(t.index) + " (nu=" + cell(t.nu) + ", k=" + cell(t.k) +
         ", B=" + cell(t.B) + ")";
}

/// Runs fn on every tuple with up to `jobs` threads; results keep tuple order.
template <class R, class F>
std::vector<std::optional<R>> sweep(const std::vector<Tuple>& ts, int jobs, F fn,
                                    std::vector<std::string>& failures) {
  std::vector<std::optional<R>> results(ts.size());
  std::vector<std::string> errors(ts.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < ts.size(); i = next++) {
      try {
        results[i].emplace(fn(ts[i]));
      } catch (const std::exception& e) {
        errors[i] = describe(ts[i]) + ": " + e.what();
      }
    }
  };
  const auto n = static_cast<std::size_t>(std::max(1, jobs));
  if (n == 1 || ts.size() <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t j = 0; j < std::min(n, ts.size()); ++j) pool.emplace_back(worker);
  }
  for (auto& e : errors) {
    if (!e.empty()) failures.push_back(std::move(e));
  }
  return results;
}

PhysParams params_of(const Tuple& t, const EC& c) { return PhysParams(t.nu, t.k, t.B, c.theta); }

OperatorKind kind_of(const EC& c) {
  if (c.op == "couette") return kind::Couette{};
  return kind::TC{};
}

std::size_t config_nodes(const EC& c) {
  if (c.n_interior > 0) return static_cast<std::size_t>(c.n_interior);
  return static_cast<std::size_t>(std::llround(c.points_per_unit * (c.r_max - c.r_min)));
}

Grid config_grid(const EC& c) { return Grid(c.r_min, c.r_max, config_nodes(c)); }

/// Same spacing on [a, 2 b].
Grid doubled_grid(const Grid& g) {
  const double b2 = 2.0 * g.b_end();
  const auto cells = std::llround((b2 - g.a_end()) / g.h());
  return Grid(g.a_end(), b2, static_cast<std::size_t>(cells) - 1);
}

Grid refined_grid(const Grid& g) { return Grid(g.a_end(), g.b_end(), 2 * g.size() + 1); }

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Series {
  std::vector<double> nu;
  std::vector<double> value;
};

/// Groups (nu, value) pairs by (k, B).
std::map<std::pair<int, double>, Series> by_mode(const std::vector<Tuple>& ts,
                                                 const std::vector<std::optional<double>>& v) {
  std::map<std::pair<int, double>, Series> out;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!v[i]) continue;
    auto& s = out[{ts[i].k, ts[i].B}];
    s.nu.push_back(ts[i].nu);
    s.value.push_back(*v[i]);
  }
  return out;
}

std::string mode_label(const std::pair<int, double>& m) {
  return "k=" + cell(m.first) + " B=" + cell(m.second);
}

/// max/min of a positive finite quantity across nu, per (k, B); needs >= 2 nu.
Verdict spread_verdict(std::string id, const std::vector<Tuple>& ts,
                       const std::vector<std::optional<double>>& v, double limit) {
  Verdict out{std::move(id), true, ""};
  const auto groups = by_mode(ts, v);
  if (groups.empty()) {
    out.passed = false;
    out.detail = "no completed tuples";
    return out;
  }
  for (const auto& [mode, s] : groups) {
    bool finite = true;
    for (double x : s.value) finite = finite && std::isfinite(x) && x > 0.0;
    const auto [lo, hi] = std::minmax_element(s.value.begin(), s.value.end());
    const double ratio = *hi / *lo;
    const bool ok = finite && s.value.size() >= 2 && ratio < limit;
    out.passed = out.passed && ok;
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += mode_label(mode) + " max/min=" + cell(ratio) + " over " +
                  cell(static_cast<int>(s.value.size())) + " nu";
    if (!finite) out.detail += " (non-finite or nonpositive value)";
    if (s.value.size() < 2) out.detail += " (needs >= 2 nu)";
  }
  out.detail += " (limit " + cell(limit) + ")";
  return out;
}

/// Least-squares slope of log value against log nu, per (k, B).
Verdict slope_verdict(std::string id, const std::vector<Tuple>& ts,
                      const std::vector<std::optional<double>>& v, double target, double tol) {
  Verdict out{std::move(id), true, ""};
  const auto groups = by_mode(ts, v);
  if (groups.empty()) {
    out.passed = false;
    out.detail = "no completed tuples";
    return out;
  }
  for (const auto& [mode, s] : groups) {
    if (!out.detail.empty()) out.detail += "; ";
    if (s.nu.size() < 2) {
      out.passed = false;
      out.detail += mode_label(mode) + " needs >= 2 nu";
      continue;
    }
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < s.nu.size(); ++i) {
      lx.push_back(std::log(s.nu[i]));
      ly.push_back(std::log(s.value[i]));
    }
    const double slope = ls_slope(lx, ly);
    const bool ok = std::isfinite(slope) && std::abs(slope - target) <= tol;
    out.passed = out.passed && ok;
    out.detail += mode_label(mode) + " slope=" + cell(slope);
  }
  out.detail += " (target " + cell(target) + " +- " + cell(tol) + ")";
  return out;
}

Verdict all_of(std::string id, bool ok, std::string detail) {
  return Verdict{std::move(id), ok, std::move(detail)};
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::uint64_t tuple_seed(const EC& c, const Tuple& t) {
  return static_cast<std::uint64_t>(c.seed) * 0x9e3779b97f4a7c15ULL + t.index;
}

double time_step(const EC& c, const PhysParams& p, const OperatorKind& k) {
  return c.dt > 0.0 ? c.dt : default_dt(p, k);
}

double end_time(const EC& c, const PhysParams& p, const OperatorKind& k) {
  return c.t_end > 0.0 ? c.t_end : default_t_end(p, k);
}

// evolve: energy identity, accretivity, contraction, inhomogeneous bound

struct EvolveOut {
  double gap_max = 0.0;
  double accretivity_min = 0.0;
  double accretivity_scale = 0.0;
  EvolutionResult run;
  std::optional<InhomogeneousAudit> inhom;
};

void run_evolve(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  const OperatorKind kind = kind_of(c);
  const bool tc = c.op == "tc";
  auto res = sweep<EvolveOut>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    double gap_max = 0.0;
    if (tc) {
      std::mt19937_64 rng(tuple_seed(c, t));
      std::normal_distribution<double> normal;
      for (int s = 0; s < 100; ++s) {
        GridFunction f(g);
        for (auto& v : f.values()) v = {normal(rng), normal(rng)};
        const auto e = energy_identity_check(p, f);
        gap_max = std::max(gap_max, e.gap / std::max(std::abs(e.lhs), std::abs(e.rhs)));
      }
    }
    const auto A = assemble(kind, p, g);
    const double acc = accretivity_check(A, 200, tuple_seed(c, t));
    EvolutionSetup setup{p, g, time_step(c, p, kind), end_time(c, p, kind), kind, {},
                         bump_data(g, c.bump_center, c.bump_half_width)};
    EvolveOut out{gap_max, acc, A.norm_inf(), evolve(setup), std::nullopt};
    if (tc) {
      const GridFunction f0 = bump_data(g, c.bump_center, c.bump_half_width);
      EvolutionSetup inh = setup;
      inh.initial = GridFunction(g);
      const double until = c.forcing_until;
      inh.forcing = [f0, until](double time, std::span<Complex> o) {
        for (std::size_t i = 0; i < o.size(); ++i) o[i] = time < until ? f0[i] : Complex{};
      };
      out.inhom = inhomogeneous_audit(inh);
    }
    return out;
  }, b.tuple_failures);

  Table tab{"evolve",
            header({"operator", "n_interior", "dt", "t_end", "steps", "energy_gap_rel",
                    "accretivity_min", "growth_violations", "max_step_growth", "sup_l2",
                    "visc_grad", "weighted_l2", "inhom_quotient", "inhom_forcing_norm"}),
            {}};
  double gap = 0.0, acc = std::numeric_limits<double>::infinity();
  int violations = 0;
  std::vector<std::optional<double>> quotient(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    const auto& r = *res[i];
    gap = std::max(gap, r.gap_max);
    acc = std::min(acc, r.accretivity_min);
    violations += r.run.growth_violations;
    if (r.inhom) quotient[i] = r.inhom->quotient;
    tab.rows.push_back(row(ts[i], c.op, static_cast<int>(config_nodes(c)), r.run.dt,
                           r.run.dt * r.run.steps, r.run.steps, r.gap_max, r.accretivity_min,
                           r.run.growth_violations, r.run.max_step_growth, r.run.trace.sup_l2,
                           r.run.trace.visc_grad, r.run.trace.weighted_l2,
                           r.inhom ? r.inhom->quotient : std::nan(""),
                           r.inhom ? r.inhom->forcing_norm : std::nan("")));
  }
  b.tables.push_back(std::move(tab));
  if (tc) {
    b.verdicts.push_back(all_of("AC1.energy-identity", gap <= 1e-12,
                                "max relative gap " + cell(gap) + " over 100 inputs per tuple"));
  }
  b.verdicts.push_back(all_of("AC2.accretivity", acc >= -1e-12,
                              "min Re<Af,f> over unit inputs " + cell(acc)));
  b.verdicts.push_back(all_of("AC2.contraction", violations == 0,
                              cell(violations) + " growing steps across all homogeneous runs"));
  if (tc) b.verdicts.push_back(spread_verdict("AC6.inhomogeneous", ts, quotient, 3.0));
}

// pseudo-bound

struct PseudoOut {
  Grid grid;
  PseudoBoundResult base;
  std::optional<PseudoBoundResult> doubled;
};

void run_pseudo_bound(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  const OperatorKind kind = kind_of(c);
  const bool tc = c.op == "tc";
  const WeightSpec w_in = WeightSpec::parse(c.w_in);
  const WeightSpec w_out = WeightSpec::parse(c.w_out);
  auto res = sweep<PseudoOut>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    PseudoOut out{g, pseudo_bound(kind, p, g, w_in, w_out, default_lambda_range(kind, g), c.n_scan),
                  std::nullopt};
    if (tc) {
      const Grid g2 = doubled_grid(g);
      out.doubled = pseudo_bound(kind, p, g2, w_in, w_out, default_lambda_range(kind, g2), c.n_scan);
    }
    return out;
  }, b.tuple_failures);

  Table tab{"pseudo_bound",
            header({"operator", "w_in", "w_out", "R_max", "n_interior", "psi", "lambda_star",
                    "psi_over_nu13", "psi_2R", "truncation_change"}),
            {}};
  Table scan{"pseudo_scan", header({"R_max", "n_interior", "lambda", "sigma_min"}), {}};
  std::vector<std::optional<double>> psi(ts.size());
  double worst_change = 0.0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    const auto& r = *res[i];
    psi[i] = r.base.psi;
    double change = std::nan("");
    double psi2 = std::nan("");
    if (r.doubled) {
      psi2 = r.doubled->psi;
      change = std::abs(psi2 - r.base.psi) / r.base.psi;
      worst_change = std::max(worst_change, change);
    }
    tab.rows.push_back(row(ts[i], c.op, c.w_in, c.w_out, r.grid.b_end(),
                           static_cast<int>(r.grid.size()), r.base.psi, r.base.lambda_star,
                           r.base.psi / std::cbrt(ts[i].nu), psi2, change));
    for (const auto& [lam, s] : r.base.scan) {
      scan.rows.push_back(row(ts[i], r.grid.b_end(), static_cast<int>(r.grid.size()), lam, s));
    }
  }
  b.tables.push_back(std::move(tab));
  b.tables.push_back(std::move(scan));
  b.verdicts.push_back(slope_verdict("AC3.slope", ts, psi, 1.0 / 3.0, 0.05));
  if (tc) {
    b.verdicts.push_back(all_of("AC3.truncation",
                                b.tuple_failures.empty() && worst_change <= 0.02,
                                "max |psi(2R) - psi(R)| / psi(R) = " + cell(worst_change) +
                                    " (limit 0.02)"));
  }
}

// resolvent-audit

struct AuditOut {
  std::vector<double> worst_f1;
  std::vector<double> worst_f2;
};

void run_resolvent_audit(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  const bool tc = c.op == "tc";
  const auto seed = static_cast<std::uint64_t>(c.seed);
  auto res = sweep<AuditOut>(ts, c.jobs, [&](const Tuple& t) {
    AuditOut out;
    const PhysParams p = params_of(t, c);
    for (double lam : c.lambda) {
      if (tc) {
        const Grid g = resolvent_audit_grid(p);
        const ResolventProbe probe{p, lam, kind::TC{}};
        out.worst_f1.push_back(resolvent_audit(probe, g, c.trials, seed).worst_constant);
        out.worst_f2.push_back(resolvent_audit_f2(probe, g, c.trials, seed + 1).worst_constant);
      } else {
        out.worst_f1.push_back(couette_resolvent_audit(t.nu, t.k, lam, c.trials, seed).worst_constant);
        out.worst_f2.push_back(std::nan(""));
      }
    }
    return out;
  }, b.tuple_failures);

  Table tab{"resolvent_audit", header({"operator", "lambda", "trials", "worst_f1", "worst_f2"}), {}};
  std::vector<std::optional<double>> worst(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    double w = 0.0;
    for (std::size_t l = 0; l < c.lambda.size(); ++l) {
      w = std::max(w, res[i]->worst_f1[l]);
      tab.rows.push_back(row(ts[i], c.op, c.lambda[l], c.trials, res[i]->worst_f1[l],
                             res[i]->worst_f2[l]));
    }
    worst[i] = w;
  }
  b.tables.push_back(std::move(tab));
  b.verdicts.push_back(spread_verdict("AC5.nu-uniform", ts, worst, 3.0));
}

// sharpness

struct SharpOut {
  std::optional<TcWitness> tc;
  std::optional<CouetteWitness> couette;
};

void run_sharpness(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  const bool do_tc = c.op != "couette";
  const bool do_couette = c.op != "tc";
  auto res = sweep<SharpOut>(ts, c.jobs, [&](const Tuple& t) {
    SharpOut out;
    if (do_tc) out.tc = sharpness_witness_tc(t.nu, t.B, c.panels);
    if (do_couette) out.couette = sharpness_witness_couette(t.nu, c.panels);
    return out;
  }, b.tuple_failures);

  Table tab{"sharpness",
            header({"witness", "r0", "lambda0", "support", "quotient", "norm", "norm_residual"}),
            {}};
  std::vector<std::optional<double>> tq(ts.size()), cq(ts.size()), cn(ts.size());
  // Per (k, B): log ||w0/r|| against log r0.
  std::map<std::pair<int, double>, std::pair<std::vector<double>, std::vector<double>>> tc_fit;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    if (const auto& w = res[i]->tc) {
      tq[i] = w->quotient;
      auto& fit = tc_fit[{ts[i].k, ts[i].B}];
      fit.first.push_back(std::log(w->r0));
      fit.second.push_back(std::log(w->norm_w_over_r));
      tab.rows.push_back(row(ts[i], "tc", w->r0, w->lambda0, 1.0 / w->r0, w->quotient,
                             w->norm_w_over_r, w->norm_residual));
    }
    if (const auto& w = res[i]->couette) {
      cq[i] = w->quotient;
      cn[i] = w->norm_w;
      tab.rows.push_back(row(ts[i], "couette", std::nan(""), w->lambda0, w->support, w->quotient,
                             w->norm_w, w->norm_residual));
    }
  }
  b.tables.push_back(std::move(tab));
  if (do_tc) {
    b.verdicts.push_back(spread_verdict("AC4.tc-quotient", ts, tq, 3.0));
    Verdict v{"AC4.tc-slope", !tc_fit.empty(), ""};
    for (const auto& [mode, fit] : tc_fit) {
      const double s = fit.first.size() >= 2 ? ls_slope(fit.first, fit.second) : std::nan("");
      v.passed = v.passed && std::abs(s + 7.5) <= 0.1;
      if (!v.detail.empty()) v.detail += "; ";
      v.detail += mode_label(mode) + " slope of ||w0/r|| vs r0 = " + cell(s);
    }
    v.detail += " (target -7.5 +- 0.1)";
    b.verdicts.push_back(std::move(v));
  }
  if (do_couette) {
    b.verdicts.push_back(spread_verdict("AC4.couette-quotient", ts, cq, 3.0));
    b.verdicts.push_back(slope_verdict("AC4.couette-slope", ts, cn, 13.0 / 6.0, 0.05));
  }
}

// thm1-weights

void run_thm1(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  auto res = sweep<DecayAudit>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    EvolutionSetup setup{p, g, time_step(c, p, kind::TC{}), end_time(c, p, kind::TC{}),
                         kind::TC{}, {}, bump_data(g, c.bump_center, c.bump_half_width)};
    return homogeneous_decay_audit(setup, c.q);
  }, b.tuple_failures);

  Table rows{"thm1_rows",
             header({"q", "sup_l2", "visc_grad", "weighted_l2", "energy_ratio", "theorem_ratio"}),
             {}};
  Table summary{"thm1_summary",
                header({"steps", "dt", "weighted_decay", "c1", "c2", "growth_violations"}), {}};
  std::map<int, std::vector<std::optional<double>>> per_q;
  for (int q : c.q) per_q[q].resize(ts.size());
  std::vector<std::optional<double>> decay(ts.size());
  int violations = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    const auto& a = *res[i];
    for (const auto& r : a.rows) {
      per_q[r.q][i] = r.energy_ratio;
      rows.rows.push_back(row(ts[i], r.q, r.trace.sup_l2, r.trace.visc_grad, r.trace.weighted_l2,
                              r.energy_ratio, r.theorem_ratio));
    }
    decay[i] = a.weighted_decay;
    violations += a.run.growth_violations;
    summary.rows.push_back(row(ts[i], a.run.steps, a.run.dt, a.weighted_decay, a.c1, a.c2,
                               a.run.growth_violations));
  }
  b.tables.push_back(std::move(rows));
  b.tables.push_back(std::move(summary));
  for (const auto& [q, v] : per_q) {
    b.verdicts.push_back(spread_verdict("AC7.energy-q" + std::to_string(q), ts, v, 3.0));
  }
  b.verdicts.push_back(spread_verdict("AC7.weighted-decay", ts, decay, 3.0));
  b.verdicts.push_back(all_of("AC2.contraction", violations == 0,
                              cell(violations) + " growing steps across the decay runs"));
}

// decomposition

void run_decomposition(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  auto res = sweep<DecompositionAudit>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    EvolutionSetup setup{p, g, time_step(c, p, kind::TC{}), end_time(c, p, kind::TC{}),
                         kind::TC{}, {}, bump_data(g, c.bump_center, c.bump_half_width)};
    return decomposition_audit(setup);
  }, b.tuple_failures);

  Table tab{"decomposition",
            header({"shear_ratio", "lemma_ratio", "defect_rel", "w_energy", "w1_energy",
                    "w2_energy", "wtilde_energy", "i1", "bound1", "i2", "bound2", "total"}),
            {}};
  std::vector<std::optional<double>> shear(ts.size()), lemma(ts.size());
  bool regions = true;
  std::string region_detail;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    const auto& a = *res[i];
    shear[i] = a.shear_ratio;
    lemma[i] = a.lemma_ratio;
    const auto& s = a.split;
    const bool ok = s.bound1 - s.i1 >= 0.0 && s.bound2 - s.i2 >= 0.0 &&
                    std::abs(s.i1 + s.i2 - s.total) <= 1e-10 * std::max(s.total, 1e-300);
    regions = regions && ok;
    if (!region_detail.empty()) region_detail += "; ";
    region_detail += "nu=" + cell(ts[i].nu) + " slack1=" + cell(s.bound1 - s.i1) +
                     " slack2=" + cell(s.bound2 - s.i2);
    const double n0 = a.norm0;
    tab.rows.push_back(row(ts[i], a.shear_ratio, a.lemma_ratio, a.defect_rel, a.w.energy() / n0,
                           a.w1.energy() / n0, a.w2.energy() / n0, a.wtilde.energy() / n0, s.i1,
                           s.bound1, s.i2, s.bound2, s.total));
  }
  b.tables.push_back(std::move(tab));
  b.verdicts.push_back(spread_verdict("AC8.shear", ts, shear, 3.0));
  b.verdicts.push_back(spread_verdict("AC8.lemma", ts, lemma, 3.0));
  b.verdicts.push_back(all_of("AC8.regions", regions && !region_detail.empty(), region_detail));
}

// gp-check

void run_gp_check(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  auto res = sweep<SemigroupCheck>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    EvolutionSetup setup{p, g, time_step(c, p, kind::Couette{}), end_time(c, p, kind::Couette{}),
                         kind::Couette{}, {}, bump_data(g, c.bump_center, c.bump_half_width)};
    return gp_semigroup_check(setup);
  }, b.tuple_failures);

  Table tab{"gp_check", header({"psi", "t_max", "margin"}), {}};
  Table samples{"gp_samples", header({"t", "log_ratio", "bound"}), {}};
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) continue;
    const auto& s = *res[i];
    worst = std::min(worst, s.margin);
    tab.rows.push_back(row(ts[i], s.psi, s.t_max, s.margin));
    for (const auto& [t, lr] : s.samples) {
      samples.rows.push_back(row(ts[i], t, lr, -t * s.psi + std::numbers::pi / 2.0));
    }
  }
  b.tables.push_back(std::move(tab));
  b.tables.push_back(std::move(samples));
  b.verdicts.push_back(all_of("AC11.semigroup-margin",
                              b.tuple_failures.empty() && worst >= -0.05,
                              "min margin " + cell(worst) + " (limit -0.05)"));
}

// dyadic-check

void run_dyadic(const EC& c, ReportBundle& b) {
  const PartitionReport r = partition_audit(c.j_max, c.samples);
  Table tab{"dyadic", {"j_max", "samples", "metric", "value"}, {}};
  auto add = [&](const char* name, double v) {
    tab.rows.push_back({cell(c.j_max), cell(c.samples), name, cell(v)});
  };
  add("junction_exact", r.junction_exact ? 1.0 : 0.0);
  add("junction_float_gap", r.junction_float_gap);
  add("max_phi", r.max_phi);
  add("min_phi", r.min_phi);
  add("max_phi_d1", r.max_phi_d1);
  add("max_phi_d2", r.max_phi_d2);
  add("max_sum_error", r.max_sum_error);
  add("min_sum_sq", r.min_sum_sq);
  add("max_sum_sq", r.max_sum_sq);
  add("chi0_at_1", r.chi0_at_1);
  add("max_scaled_d1", r.max_scaled_d1);
  add("max_scaled_d2", r.max_scaled_d2);
  b.tables.push_back(std::move(tab));
  Table viol{"dyadic_violations", {"j_max", "samples", "violation"}, {}};
  for (const auto& v : r.violations) viol.rows.push_back({cell(c.j_max), cell(c.samples), v});
  b.tables.push_back(std::move(viol));

  const bool bounds = r.max_sum_error <= 1e-12 && r.min_sum_sq >= 0.5 - 1e-12 && r.max_sum_sq <= 1.0 + 1e-12 &&
                      r.chi0_at_1 == 1.0 && r.max_phi_d1 <= 540.0 &&
                      r.max_phi_d2 <= 162.0 * 144.0 && r.max_scaled_d1 <= 4e6 &&
                      r.max_scaled_d2 <= 4e6 && r.junction_float_gap <= 1e-12;
  std::ostringstream d;
  d << "violations=" << r.violations.size() << " sum_error=" << cell(r.max_sum_error)
    << " sum_sq=[" << cell(r.min_sum_sq) << ", " << cell(r.max_sum_sq) << "] chi0(1)="
    << cell(r.chi0_at_1) << " |phi'|=" << cell(r.max_phi_d1) << " |phi''|=" << cell(r.max_phi_d2)
    << " exact_junction=" << (r.junction_exact ? "yes" : "no");
  b.verdicts.push_back(all_of("AC9.partition", r.ok && r.junction_exact && bounds, d.str()));
}

// hardy

void run_hardy(const EC& c, ReportBundle& b) {
  const Grid g = config_grid(c);
  Table tab{"hardy", {"r_min", "r_max", "n_interior", "case", "center", "width", "lhs", "rhs", "quotient"}, {}};
  double worst = 0.0;
  auto record = [&](const std::string& name, double center, double width, const GridFunction& f) {
    const HardyResult h = hardy_audit(f);
    worst = std::max(worst, h.quotient);
    tab.rows.push_back({cell(g.a_end()), cell(g.b_end()), cell(static_cast<int>(g.size())), name,
                        cell(center), cell(width), cell(h.lhs), cell(h.rhs), cell(h.quotient)});
  };
  const double a = g.a_end();
  record("exp-profile", std::nan(""), std::nan(""), GridFunction::sample(g, [a](double r) {
           return Complex((r - a) * std::exp(-(r - a)));
         }));
  std::mt19937_64 rng(static_cast<std::uint64_t>(c.seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double span = g.b_end() - g.a_end();
  for (int trial = 0; trial < c.trials; ++trial) {
    const double center = g.a_end() + span * (0.02 + 0.96 * unit(rng));
    double width = std::exp(std::log(0.05) + unit(rng) * (std::log(3.0) - std::log(0.05)));
    width = std::min({width, 0.999 * (center - g.a_end()), 0.999 * (g.b_end() - center)});
    width = std::max(width, 8.0 * g.h());
    const Complex phase = std::polar(1.0, 2.0 * std::numbers::pi * unit(rng));
    record("bump-" + std::to_string(trial), center, width, GridFunction::sample(g, [&](double r) {
             return phase * bump(r, center, width);
           }));
  }
  b.tables.push_back(std::move(tab));
  b.verdicts.push_back(all_of("AC10.hardy", worst <= 2.5,
                              "max quotient " + cell(worst) + " over " +
                                  cell(c.trials + 1) + " inputs (limit 2.5)"));

  Table logs{"log_integral", {"r0", "delta_tilde", "value", "bound", "slack"}, {}};
  bool ok = true;
  for (double d : c.delta_tilde) {
    const LogIntegral l = log_integral_audit(c.r0, d);
    ok = ok && l.value <= l.bound;
    logs.rows.push_back({cell(c.r0), cell(d), cell(l.value), cell(l.bound), cell(l.bound - l.value)});
  }
  b.tables.push_back(std::move(logs));
  b.verdicts.push_back(all_of("AC10.log-integral", ok,
                              "value <= 2d/(1-d) for " + cell(static_cast<int>(c.delta_tilde.size())) +
                                  " values of delta_tilde"));
}

// counterexample-tc

WeightTriple weights_of(const EC& c, double kappa) {
  return WeightTriple{parse_profile(c.a1, kappa), parse_profile(c.a2, kappa),
                      parse_profile(c.phi, kappa), c.a1, c.a2, c.phi};
}

Table ratio_table(const char* name, std::initializer_list<const char*> key) {
  Table t{name, header(key), {}};
  for (const char* h : {"n", "numerator", "denominator", "R_n", "log_R_n"}) t.header.push_back(h);
  return t;
}

void add_ratio_rows(Table& t, Row prefix, const RatioSeries& s) {
  for (const auto& e : s.entries) {
    Row r = prefix;
    for (auto v : {cell(e.n), cell(e.numerator), cell(e.denominator), cell(e.ratio),
                   cell(std::log(e.ratio))}) {
      r.push_back(v);
    }
    t.rows.push_back(std::move(r));
  }
}

void run_counterexample_tc(const EC& c, ReportBundle& b) {
  const auto ts = make_tuples(c);
  auto res = sweep<TcCounterexample>(ts, c.jobs, [&](const Tuple& t) {
    const PhysParams p = params_of(t, c);
    LocalProblem lp{c.delta, c.local_nodes, c.local_dt, 1.0};
    return build_tc_sequence(p, weights_of(c, p.kappa()), lp, c.n_max);
  }, b.tuple_failures);

  Table ratios = ratio_table("tc_ratios", {"a1", "a2", "phi"});
  Table summary{"tc_summary",
                header({"a1", "a2", "phi", "delta", "halvings", "t_eff", "eps_star", "slope",
                        "predicted", "eventually_increasing", "successive_spread", "finite_num",
                        "finite_den", "tail_bound", "left_residual", "seam_jump",
                        "translation_gap", "decay_rate", "decay_bound"}),
                {}};
  bool slope_ok = !ts.empty(), finite_ok = !ts.empty(), inc_ok = !ts.empty();
  std::string slope_d, finite_d;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!res[i]) {
      slope_ok = finite_ok = inc_ok = false;
      continue;
    }
    const auto& r = *res[i];
    const auto& s = r.series;
    add_ratio_rows(ratios, row(ts[i], c.a1, c.a2, c.phi), s);
    summary.rows.push_back(row(ts[i], c.a1, c.a2, c.phi, r.delta, r.halvings, r.t_eff, r.eps_star,
                               s.slope, s.predicted, s.eventually_increasing, s.successive_spread,
                               r.finite_num, r.finite_den, r.tail_bound, r.left_residual,
                               r.seam_jump, r.translation_gap, r.local.decay_rate,
                               r.local.decay_bound));
    slope_ok = slope_ok && s.slope > 0.0 && s.slope >= 0.9 * s.predicted;
    const bool fin = std::isfinite(r.finite_num) && std::isfinite(r.finite_den) &&
                     r.finite_num > 0.0 && r.finite_den > 0.0 && r.tail_bound <= 1e-6;
    finite_ok = finite_ok && fin;
    inc_ok = inc_ok && s.eventually_increasing;
    slope_d += (slope_d.empty() ? "" : "; ") + std::string("nu=") + cell(ts[i].nu) +
               " slope=" + cell(s.slope) + " predicted=" + cell(s.predicted);
    finite_d += (finite_d.empty() ? "" : "; ") + std::string("nu=") + cell(ts[i].nu) +
                " delta=" + cell(r.delta) + " num=" + cell(r.finite_num) +
                " den=" + cell(r.finite_den) + " tail=" + cell(r.tail_bound);
  }
  b.tables.push_back(std::move(ratios));
  b.tables.push_back(std::move(summary));
  b.verdicts.push_back(all_of("AC12.slope", slope_ok, slope_d + " (need > 0 and >= 0.9 predicted)"));
  b.verdicts.push_back(all_of("AC12.finite-norms", finite_ok, finite_d));
  b.verdicts.push_back(all_of("AC12.increasing", inc_ok, "R_n eventually increasing"));
}

// counterexample-heat

void run_counterexample_heat(const EC& c, ReportBundle& b) {
  HeatSetup s;
  s.domain = parse_heat_domain(c.domain);
  s.length = c.length;
  s.v1 = {c.v1[0], c.v1[1]};
  s.v2 = {c.v2[0], c.v2[1]};
  s.x0 = c.x0;
  s.weights = weights_of(c, 1.0);
  s.n_max = c.n_max;
  s.quad_nodes = c.quad_nodes;
  const HeatCounterexample r = heat_kernel_counterexample(s);

  auto key = [&] {
    return Row{c.domain, cell(c.length), cell(c.v1[0]), cell(c.v1[1]), cell(c.v2[0]),
               cell(c.v2[1]), cell(c.x0), c.a1, c.a2, c.phi};
  };
  const std::vector<std::string> key_header{"domain", "length", "v1_lo", "v1_hi", "v2_lo",
                                            "v2_hi", "x0", "a1", "a2", "phi"};
  Table ratios{"heat_ratios", key_header, {}};
  for (const char* h : {"n", "numerator", "denominator", "R_n", "log_R_n"}) ratios.header.push_back(h);
  add_ratio_rows(ratios, key(), r.series);
  Table summary{"heat_summary", key_header, {}};
  for (const char* h : {"w_at_x0", "w_at_x0_duhamel", "d1", "d2", "slope", "predicted",
                        "successive_spread"}) {
    summary.header.push_back(h);
  }
  Row sr = key();
  for (double v : {r.w_at_x0, r.w_at_x0_duhamel, r.d1, r.d2, r.series.slope, r.series.predicted,
                   r.series.successive_spread}) {
    sr.push_back(cell(v));
  }
  summary.rows.push_back(std::move(sr));
  b.tables.push_back(std::move(ratios));
  b.tables.push_back(std::move(summary));
  b.verdicts.push_back(all_of("AC13.positivity", r.w_at_x0 > 0.0,
                              "w(1, x0) = " + cell(r.w_at_x0) + ", Duhamel quadrature " +
                                  cell(r.w_at_x0_duhamel)));
  b.verdicts.push_back(all_of("AC13.slope", r.series.slope >= 0.9 * (r.d2 - r.d1),
                              "slope " + cell(r.series.slope) + " vs 0.9 (d2 - d1) = " +
                                  cell(0.9 * (r.d2 - r.d1))));
}

// convergence

double order_of(double e0, double e1, double e2) {
  return std::log2(std::abs(e0 - e1) / std::abs(e1 - e2));
}

void converge_evolve(const EC& c, ReportBundle& b) {
  const Tuple t{0, c.nu.front(), c.k.front(), c.B.front()};
  const OperatorKind kind = kind_of(c);

  // Time: Richardson ratios of trace entries at dt, dt/2, dt/4.
  {
    const PhysParams p = params_of(t, c);
    const Grid g = config_grid(c);
    const double dt0 = time_step(c, p, kind);
    const double t_end = end_time(c, p, kind);
    std::vector<std::array<double, 3>> entries;
    for (int level = 0; level < 3; ++level) {
      EvolutionSetup setup{p, g, dt0 / double(1 << level), t_end, kind, {},
                           bump_data(g, c.bump_center, c.bump_half_width)};
      const EvolutionResult r = evolve(setup);
      entries.push_back({r.trace.visc_grad, r.trace.weighted_l2, r.norms.back()});
    }
    Table tab{"time_order", header({"dt", "t_end", "entry", "v_dt", "v_dt2", "v_dt4", "order"}), {}};
    const char* names[3] = {"visc_grad", "weighted_l2", "final_norm"};
    double worst = std::numeric_limits<double>::infinity();
    int measured = 0;
    for (int e = 0; e < 3; ++e) {
      const double a = entries[0][e], m = entries[1][e], f = entries[2][e];
      const bool exact = std::abs(a - m) <= 1e-13 * std::abs(a);
      const double ord = exact ? std::nan("") : order_of(a, m, f);
      if (!exact) {
        worst = std::min(worst, ord);
        ++measured;
      }
      tab.rows.push_back(row(t, dt0, t_end, names[e], a, m, f, ord));
    }
    b.tables.push_back(std::move(tab));
    b.verdicts.push_back(all_of("AC14.time-order", measured > 0 && worst >= 1.8,
                                "min observed order " + cell(worst) + " over " + cell(measured) +
                                    " trace entries (limit 1.8)"));
  }

  // Space: manufactured solution u = e^{-t} sin(pi (r-1)/2) (1 + i r/2) on [1, 3].
  {
    const double nu_m = 0.5;
    const PhysParams p(nu_m, t.k, t.B == 0.0 ? 1.0 : t.B, c.theta);
    const double kk = p.k(), B = p.B();
    const double pi = std::numbers::pi;
    auto s = [pi](double r) {
      return std::sin(pi * (r - 1.0) / 2.0) * Complex(1.0, 0.5 * r);
    };
    auto s_dd = [pi](double r) {
      const double x = pi * (r - 1.0) / 2.0;
      return -(pi / 2) * (pi / 2) * std::sin(x) * Complex(1.0, 0.5 * r) +
             Complex(0.0, 1.0) * (pi / 2) * std::cos(x);
    };
    auto Ts = [&](double r) {
      return -nu_m * s_dd(r) + (nu_m * (kk * kk - 0.25) + Complex(0.0, kk * B)) / (r * r) * s(r);
    };
    const double t_end = 0.5, dt = 1e-3;
    std::vector<double> errors;
    std::vector<std::size_t> sizes = {31, 63, 127, 255};
    Table tab{"space_order", header({"nu_manufactured", "n_interior", "h", "dt", "error", "order"}), {}};
    for (std::size_t n : sizes) {
      const Grid g(1.0, 3.0, n);
      const auto nodes = g.nodes();
      Forcing f = [&, nodes](double time, std::span<Complex> o) {
        for (std::size_t i = 0; i < o.size(); ++i) {
          o[i] = std::exp(-time) * (Ts(nodes[i]) - s(nodes[i]));
        }
      };
      EvolutionSetup setup{p, g, dt, t_end, kind::TC{}, f, GridFunction::sample(g, s)};
      const EvolutionResult r = evolve(setup);
      GridFunction err = r.final;
      for (std::size_t i = 0; i < n; ++i) err[i] -= std::exp(-t_end) * s(nodes[i]);
      errors.push_back(weighted_norm(err, WeightSpec::unit()));
    }
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      const double ord = i == 0 ? std::nan("") : std::log2(errors[i - 1] / errors[i]);
      if (i > 0) worst = std::min(worst, ord);
      tab.rows.push_back(row(Tuple{0, nu_m, p.k(), p.B()}, nu_m, static_cast<int>(sizes[i]),
                             2.0 / double(sizes[i] + 1), dt, errors[i], ord));
    }
    b.tables.push_back(std::move(tab));
    b.verdicts.push_back(all_of("AC14.space-order", worst >= 1.8,
                                "min observed order " + cell(worst) + " (limit 1.8)"));
  }

  // Dense SVD oracle for n <= 256.
  {
    Table tab{"svd_oracle", header({"operator", "n_interior", "lambda", "lanczos", "dense", "rel_gap"}), {}};
    double worst = 0.0;
    const PhysParams p(t.nu, t.k, t.B == 0.0 ? 1.0 : t.B, c.theta);
    struct Case {
      const char* name;
      Grid g;
      OperatorKind kind;
      WeightSpec w_in, w_out;
    };
    const std::vector<Case> cases = {
        {"tc", Grid(1.0, 3.0, 200), kind::TC{}, WeightSpec::parse(c.w_in), WeightSpec::parse(c.w_out)},
        {"tc", Grid(1.0, 3.0, 256), kind::TC{}, WeightSpec::unit(), WeightSpec::unit()},
        {"couette", Grid(0.0, 1.0, 255), kind::Couette{}, WeightSpec::unit(), WeightSpec::unit()},
        {"couette", Grid(0.0, 1.0, 64), kind::Couette{}, WeightSpec::unit(), WeightSpec::unit()},
    };
    for (const auto& cs : cases) {
      for (double lam : {0.25, 0.5}) {
        const auto A = shifted_operator({p, lam, cs.kind}, cs.g);
        const double lz = smallest_singular_value(A, cs.w_in, cs.w_out);
        const double dn = dense_sigma_min(A, cs.w_in, cs.w_out);
        const double gap = std::abs(lz - dn) / dn;
        worst = std::max(worst, gap);
        tab.rows.push_back(row(t, cs.name, static_cast<int>(cs.g.size()), lam, lz, dn, gap));
      }
    }
    b.tables.push_back(std::move(tab));
    b.verdicts.push_back(all_of("AC14.svd-oracle", worst <= 1e-6,
                                "max relative gap " + cell(worst) + " (limit 1e-6)"));
  }
}

void converge_pseudo_bound(const EC& c, ReportBundle& b) {
  const Tuple t{0, c.nu.front(), c.k.front(), c.B.front()};
  const PhysParams p = params_of(t, c);
  const OperatorKind kind = kind_of(c);
  const WeightSpec w_in = WeightSpec::parse(c.w_in);
  const WeightSpec w_out = WeightSpec::parse(c.w_out);
  const Grid g = config_grid(c);
  auto psi = [&](const Grid& grid) {
    return pseudo_bound(kind, p, grid, w_in, w_out, default_lambda_range(kind, grid), c.n_scan).psi;
  };
  const double base = psi(g);
  const double fine = psi(refined_grid(g));
  Table tab{"pseudo_refinement", header({"variant", "R_max", "n_interior", "psi", "rel_change"}), {}};
  tab.rows.push_back(row(t, "base", g.b_end(), static_cast<int>(g.size()), base, 0.0));
  const Grid gf = refined_grid(g);
  const double mesh = std::abs(fine - base) / base;
  tab.rows.push_back(row(t, "h/2", gf.b_end(), static_cast<int>(gf.size()), fine, mesh));
  b.verdicts.push_back(all_of("AC3.mesh", mesh <= 0.02,
                              "|psi(h/2) - psi(h)| / psi = " + cell(mesh) + " (limit 0.02)"));
  if (c.op == "tc") {
    const Grid g2 = doubled_grid(g);
    const double wide = psi(g2);
    const double trunc = std::abs(wide - base) / base;
    tab.rows.push_back(row(t, "2R", g2.b_end(), static_cast<int>(g2.size()), wide, trunc));
    b.verdicts.push_back(all_of("AC3.truncation", trunc <= 0.02,
                                "|psi(2R) - psi(R)| / psi = " + cell(trunc) + " (limit 0.02)"));
  }
  b.tables.push_back(std::move(tab));
}

void converge_sharpness(const EC& c, ReportBundle& b) {
  const Tuple t{0, c.nu.front(), c.k.front(), c.B.front()};
  const int p0 = std::max(64, (c.panels / 4) & ~1);
  Table tab{"quadrature_order", header({"witness", "panels", "quotient", "order"}), {}};
  double worst = std::numeric_limits<double>::infinity();
  for (const char* w : {"tc", "couette"}) {
    std::vector<double> q;
    for (int level = 0; level < 3; ++level) {
      const int panels = p0 << level;
      q.push_back(std::string(w) == "tc" ? sharpness_witness_tc(t.nu, t.B, panels).quotient
                                         : sharpness_witness_couette(t.nu, panels).quotient);
    }
    const double ord = order_of(q[0], q[1], q[2]);
    worst = std::min(worst, ord);
    for (int level = 0; level < 3; ++level) {
      tab.rows.push_back(row(t, w, p0 << level, q[level], level == 2 ? ord : std::nan("")));
    }
  }
  b.tables.push_back(std::move(tab));
  b.verdicts.push_back(all_of("AC4.quadrature-order", worst >= 3.0,
                              "min observed order " + cell(worst) + " (limit 3)"));
}

}  // namespace

std::string Table::csv() const {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_escape(cells[i]);
    }
    out += '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return out;
}

bool ReportBundle::all_passed() const {
  if (!tuple_failures.empty() || verdicts.empty()) return false;
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.passed; });
}

std::string ReportBundle::manifest() const {
  std::ostringstream os;
  const auto passed = std::count_if(verdicts.begin(), verdicts.end(),
                                    [](const Verdict& v) { return v.passed; });
  os << "experiment: " << config.experiment << '\n'
     << "version: " << version << '\n'
     << "wall_seconds: " << format_number(wall_seconds) << '\n'
     << "verdicts_passed: " << passed << '/' << verdicts.size() << '\n'
     << "tuple_failures: " << tuple_failures.size() << '\n';
  for (const auto& v : verdicts) {
    os << (v.passed ? "PASS " : "FAIL ") << v.id << ": " << v.detail << '\n';
  }
  for (const auto& f : tuple_failures) os << "ERROR " << f << '\n';
  for (const auto& t : tables) os << "table: " << t.name << ".csv (" << t.rows.size() << " rows)\n";
  os << "\n[config]\n" << emit_config(config);
  return os.str();
}

void ReportBundle::write(const std::filesystem::path& dir) const {
  ensure_output_dir(dir);
  auto put = [&dir](const std::string& name, const std::string& text) {
    std::ofstream f(dir / name, std::ios::binary);
    f << text;
    if (!f) throw Error("cannot write " + (dir / name).string());
  };
  put("manifest.txt", manifest());
  Table v{"verdicts", {"id", "passed", "detail"}, {}};
  for (const auto& x : verdicts) v.rows.push_back({x.id, x.passed ? "1" : "0", x.detail});
  for (const auto& f : tuple_failures) v.rows.push_back({"tuple-failure", "0", f});
  put("verdicts.csv", v.csv());
  for (const auto& t : tables) put(t.name + ".csv", t.csv());
}

std::string code_version() { return TCLAB_VERSION; }

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void ensure_output_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("out", "cannot create '" + dir.string() + "': " + ec.message());
  const auto probe = dir / ".tclab-write-test";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("out", "directory '" + dir.string() + "' is not writable");
  }
  std::filesystem::remove(probe, ec);
}

ReportBundle run(const ExperimentConfig& config) {
  validate(config);
  if (config.experiment == "convergence") return convergence_study(config);
  const auto start = std::chrono::steady_clock::now();
  ReportBundle b;
  b.config = config;
  b.version = code_version();
  const std::string& e = config.experiment;
  if (e == "evolve") run_evolve(config, b);
  else if (e == "pseudo-bound") run_pseudo_bound(config, b);
  else if (e == "resolvent-audit") run_resolvent_audit(config, b);
  else if (e == "sharpness") run_sharpness(config, b);
  else if (e == "thm1-weights") run_thm1(config, b);
  else if (e == "decomposition") run_decomposition(config, b);
  else if (e == "gp-check") run_gp_check(config, b);
  else if (e == "dyadic-check") run_dyadic(config, b);
  else if (e == "hardy") run_hardy(config, b);
  else if (e == "counterexample-tc") run_counterexample_tc(config, b);
  else if (e == "counterexample-heat") run_counterexample_heat(config, b);
  b.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return b;
}

ReportBundle convergence_study(const ExperimentConfig& config) {
  validate(config);
  const std::string target =
      config.experiment == "convergence" ? config.target : config.experiment;
  const auto start = std::chrono::steady_clock::now();
  ReportBundle b;
  b.config = config;
  b.version = code_version();
  if (target == "evolve") converge_evolve(config, b);
  else if (target == "pseudo-bound") converge_pseudo_bound(config, b);
  else if (target == "sharpness") converge_sharpness(config, b);
  else throw ConfigError("convergence.target", "'" + target + "' does not support refinement");
  b.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return b;
}

double dense_sigma_min(const TridiagonalOperator& A, const WeightSpec& w_in,
                       const WeightSpec& w_out) {
  const std::size_t n = A.size();
  if (n > 1024) throw InvalidArgument("dense_sigma_min is limited to n <= 1024");
  const auto wi = w_in.sample(A.grid());
  const auto wo = w_out.sample(A.grid());
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(n),
                                              static_cast<Eigen::Index>(n));
  auto s_in = [&](std::size_t j) { return wi.empty() ? 1.0 : std::sqrt(wi[j]); };
  auto s_out = [&](std::size_t i) { return wo.empty() ? 1.0 : std::sqrt(wo[i]); };
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    M(ii, ii) = s_out(i) * A.diag()[i] / s_in(i);
    if (i > 0) M(ii, ii - 1) = s_out(i) * A.lower()[i - 1] / s_in(i - 1);
    if (i + 1 < n) M(ii, ii + 1) = s_out(i) * A.upper()[i] / s_in(i + 1);
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
  return svd.singularValues().minCoeff();
}

}  // namespace tclab
