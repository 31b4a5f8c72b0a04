#include <doctest.h>

#include <cmath>
#include <numbers>

#include "tclab/counterexample.hpp"
#include "tclab/error.hpp"

using namespace tclab;

TEST_CASE("boundary signal") {
  CHECK(boundary_signal(1.5) == doctest::Approx(1.0));
  CHECK(boundary_signal(1.0) == 0.0);
  CHECK(boundary_signal(2.0) == 0.0);
  CHECK(boundary_signal(0.3) == 0.0);
  for (double t : {1.2, 1.5, 1.8}) {
    const double e = 1e-6;
    const double fd = (boundary_signal(t + e) - boundary_signal(t - e)) / (2 * e);
    CHECK(boundary_signal_dt(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}

TEST_CASE("lift profile endpoints") {
  const auto a = lift_profile(0.0), b = lift_profile(1.0);
  CHECK(a.value == 0.0);
  CHECK(b.value == 1.0);
  CHECK(a.d1 == 0.0);
  CHECK(b.d1 == 0.0);
  CHECK(a.d2 == 0.0);
  CHECK(b.d2 == 0.0);
}

TEST_CASE("reflection coefficients match derivatives up to order two") {
  double m0 = 0, m1 = 0, m2 = 0;
  for (int m = 1; m <= 3; ++m) {
    m0 += kReflection[m - 1];
    m1 += kReflection[m - 1] * -m;
    m2 += kReflection[m - 1] * m * m;
  }
  CHECK(m0 == 1.0);
  CHECK(m1 == 1.0);
  CHECK(m2 == 1.0);
}

TEST_CASE("extension is exact on quadratics") {
  const double delta = 0.1;
  const std::size_t seam = 64;
  const double h = delta / static_cast<double>(seam);
  auto u = [](double r) { return Complex(0.3 - 1.2 * r + 0.7 * r * r, 0.2 * r); };
  std::vector<Complex> local(seam + 1);
  for (std::size_t i = 0; i <= seam; ++i) local[i] = u(1.0 + h * static_cast<double>(i));
  const Extension e = smooth_extension(local, delta, h);
  CHECK(e.seam == seam);
  const double sigma = std::min(delta / 3.0, 1.0 - delta);
  for (std::size_t i = 0; i < e.values.size(); ++i) {
    const double r = 1.0 + h * static_cast<double>(i);
    if (r <= 1.0 + delta + 0.5 * sigma) {
      CHECK(std::abs(e.values[i] - u(r)) <= 1e-12);
    }
    if (r >= 1.0 + delta + sigma) CHECK(e.values[i] == Complex{});
  }
  CHECK(1.0 + h * static_cast<double>(e.values.size() - 1) >= 2.0 + delta - 1e-12);
  CHECK(e.seam_jump <= 1e-8);
}

TEST_CASE("heat kernel mass and ordering") {
  const double t = 0.7, x = 2.0;
  double mass = 0.0;
  const int n = 4000;
  const double lo = x - 12.0, hi = x + 12.0, step = (hi - lo) / n;
  for (int i = 0; i <= n; ++i) {
    const double y = lo + i * step;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    mass += w * heat_kernel(HeatDomain::line, 0.0, t, x, y);
  }
  CHECK(mass * step / 3.0 == doctest::Approx(1.0).epsilon(1e-10));

  for (double y : {0.1, 0.5, 1.0, 2.0, 3.5}) {
    const double free = heat_kernel(HeatDomain::line, 5.0, t, x, y);
    const double half = heat_kernel(HeatDomain::half_line_dirichlet, 5.0, t, x, y);
    const double intv = heat_kernel(HeatDomain::interval_dirichlet, 5.0, t, x, y);
    CHECK(half <= free);
    CHECK(half >= 0.0);
    CHECK(intv <= half * (1 + 1e-12));
    CHECK(intv >= 0.0);
    const auto g = [t](double z) { return std::exp(-z * z / (4 * t)) / std::sqrt(4 * std::numbers::pi * t); };
    CHECK(half == doctest::Approx(g(x - y) - g(x + y)).epsilon(1e-12));
  }
  CHECK(heat_kernel(HeatDomain::half_line_dirichlet, 5.0, t, 0.0, 1.0) == 0.0);
  CHECK(std::isfinite(log_heat_kernel(HeatDomain::line, 5.0, 1e-3, 0.0, 3.0)));
}

TEST_CASE("cutoffs") {
  CHECK(time_cutoff(0.5) == 1.0);
  CHECK(time_cutoff(0.25) == 1.0);
  CHECK(time_cutoff(0.1) == 0.0);
  CHECK(time_cutoff(0.9) == 0.0);
  const Interval v1{0.0, 1.0};
  CHECK(space_cutoff(0.5, v1) == 1.0);
  CHECK(space_cutoff(-0.1, v1) == 0.0);
  CHECK(space_cutoff(1.1, v1) == 0.0);
}

TEST_CASE("weights are validated") {
  WeightTriple w{[](double) { return 1.0; }, [](double r) { return r - 1.5; },
                 [](double r) { return 1.0 / r; }};
  CHECK_THROWS_AS(validate_weights(w, 1.0, 2.0, true), InvalidArgument);
  WeightTriple flat{[](double) { return 1.0; }, [](double) { return 1.0; },
                    [](double) { return 1.0; }};
  CHECK_THROWS_AS(validate_weights(flat, 1.0, 2.0, false), InvalidArgument);
}

TEST_CASE("local boundary solve meets its boundary data") {
  const PhysParams p(1e-2, 1, 1.0);
  const LocalSolve s = local_boundary_solve(p, LocalProblem{}, 3.0);
  CHECK(s.boundary_error <= 1e-12);
  CHECK(s.residual_error <= s.residual_tolerance);
  CHECK(s.decay_rate > s.decay_bound);
  CHECK(s.poincare_constant == doctest::Approx(1.0 / std::numbers::pi).epsilon(1e-3));
}

TEST_CASE("heat counterexample on the line") {
  HeatSetup s;
  s.weights = WeightTriple{[](double) { return 1.0; }, [](double) { return 1.0; },
                           [](double x) { return x; }};
  s.quad_nodes = 81;
  s.window_nodes = 21;
  s.n_max = 6;
  const auto r = heat_kernel_counterexample(s);
  CHECK(r.w_at_x0 > 0.0);
  CHECK(r.d1 == doctest::Approx(1.0));
  CHECK(r.d2 == doctest::Approx(3.0));
  CHECK(r.series.slope >= 0.9 * (r.d2 - r.d1));
}
