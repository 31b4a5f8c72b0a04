#include <doctest.h>

#include <cmath>
#include <random>

#include "tclab/analysis.hpp"
#include "tclab/error.hpp"

using namespace tclab;

TEST_CASE("dyadic shape junctions") {
  const auto a = dyadic_shape_eval(5.0 / 6.0);
  CHECK(a.value == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::abs(a.d1) <= 1e-9);
  const auto b = dyadic_shape_eval(0.75);
  CHECK(b.value == 0.0);
  CHECK(b.d1 == 0.0);
  CHECK(b.d2 == 0.0);
  CHECK(dyadic_shape_eval(1.2).value == 1.0);
  CHECK(dyadic_shape_eval(23.0 / 12.0).value == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(dyadic_shape_eval(2.0).value == 0.0);
  CHECK(dyadic_junction_exact());
}

TEST_CASE("dyadic shape is C2 at every junction") {
  for (double r : {0.75, 5.0 / 6.0, 11.0 / 6.0, 23.0 / 12.0}) {
    const double e = 1e-9;
    const auto lo = dyadic_shape_eval(r - e), hi = dyadic_shape_eval(r + e);
    CHECK(std::abs(lo.value - hi.value) <= 1e-6);
    CHECK(std::abs(lo.d1 - hi.d1) <= 1e-5);
    CHECK(std::abs(lo.d2 - hi.d2) <= 1e-3);
  }
}

TEST_CASE("dyadic shape derivative bounds on a fine grid") {
  double d1 = 0.0, d2 = 0.0;
  for (int i = 0; i <= 200000; ++i) {
    const auto s = dyadic_shape_eval(0.7 + 1.3 * i / 200000.0);
    CHECK(s.value >= 0.0);
    CHECK(s.value <= 1.0 + 1e-15);
    d1 = std::max(d1, std::abs(s.d1));
    d2 = std::max(d2, std::abs(s.d2));
  }
  CHECK(d1 <= 540.0);
  CHECK(d2 <= 162.0 * 144.0);
}

TEST_CASE("partition of unity") {
  const DyadicPartition P(12);
  CHECK(P.chi(0, 1.0).value == 1.0);
  for (int j = 1; j <= 13; ++j) CHECK(P.chi(j, 1.0).value == 0.0);
  CHECK(P.sum_chi(7.3) == doctest::Approx(1.0).epsilon(1e-12));
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 12.0);
  for (int i = 0; i < 1000; ++i) {
    const double r = std::exp2(u(rng));
    CHECK(std::abs(P.sum_chi(r) - 1.0) <= 1e-12);
    const double sq = P.sum_chi_sq(r);
    CHECK(sq >= 0.5 - 1e-12);
    CHECK(sq <= 1.0 + 1e-12);
    for (int j = 0; j <= 13; ++j) {
      const double c = P.chi(j, r).value;
      if (c != 0.0) {
        CHECK(r >= std::exp2(j + 1) / 3.0 * (1 - 1e-12));
        CHECK(r <= std::exp2(j + 1) * (1 + 1e-12));
      }
      for (int l = j + 2; l <= 13; ++l) CHECK(c * P.chi(l, r).value == 0.0);
    }
  }
}

TEST_CASE("chi derivatives match finite differences") {
  const DyadicPartition P(12);
  for (double r : {3.1, 7.3, 40.0}) {
    for (int j = 0; j < 6; ++j) {
      const double e = 1e-6 * r;
      const double fd = (P.chi(j, r + e).value - P.chi(j, r - e).value) / (2 * e);
      CHECK(P.chi(j, r).d1 == doctest::Approx(fd).epsilon(1e-5).scale(1.0));
    }
  }
}

TEST_CASE("partition audit passes") {
  const auto rep = partition_audit(12, 20000);
  CHECK(rep.ok);
  CHECK(rep.violations.empty());
  CHECK(rep.junction_exact);
  CHECK(rep.chi0_at_1 == 1.0);
  CHECK_THROWS_AS(partition_audit(3, 20000), InvalidArgument);
  CHECK_THROWS_AS(partition_audit(12, 100), InvalidArgument);
}

TEST_CASE("rho cutoff") {
  CHECK(rho_cutoff(-2.0) == 1.0);
  CHECK(rho_cutoff(2.0) == -1.0);
  CHECK(rho_cutoff(0.0) == 0.0);
  double prev = rho_cutoff(-1.0);
  double max_d1 = 0.0;
  for (int i = 1; i <= 10000; ++i) {
    const double z = -1.0 + 2.0 * i / 10000.0;
    const double v = rho_cutoff(z);
    if (i < 10000) CHECK(v < prev);
    prev = v;
    max_d1 = std::max(max_d1, std::abs(rho_cutoff_eval(z).d1));
    CHECK(rho_cutoff(-z) == doctest::Approx(-v));
  }
  CHECK(max_d1 <= 2.0);
  CHECK(rho_cutoff_eval(1.0).d1 == 0.0);
  CHECK(rho_cutoff_eval(1.0).d2 == 0.0);
  CHECK(rho_delta(3.0, 3.0, 0.5) == 0.0);
  CHECK(rho_delta(2.0, 3.0, 0.5) == 1.0);
}

TEST_CASE("log integral closed forms") {
  const auto a = log_integral_audit(10.0, 0.1);
  CHECK(a.value == doctest::Approx(std::log(1.1 / 0.9)));
  CHECK(a.value == doctest::Approx(0.2007).epsilon(1e-3));
  CHECK(a.bound == doctest::Approx(0.2 / 0.9));
  const auto b = log_integral_audit(10.0, 0.5);
  CHECK(b.value == doctest::Approx(std::log(3.0)));
  CHECK(b.value <= b.bound);
  const auto c = log_integral_audit(5.0, 1e-6);
  CHECK(c.value / 1e-6 == doctest::Approx(2.0).epsilon(1e-6));
  CHECK_THROWS_AS(log_integral_audit(1.0, 0.1), InvalidArgument);
  CHECK_THROWS_AS(log_integral_audit(10.0, 0.6), InvalidArgument);
}

TEST_CASE("Hardy quotient") {
  const Grid g(1.0, 40.0, 8191);
  CHECK(hardy_audit(GridFunction(g)).quotient == 0.0);
  const auto f = GridFunction::sample(g, [](double r) { return Complex((r - 1) * std::exp(-(r - 1))); });
  CHECK(hardy_audit(f).quotient <= 2.5);
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double c = 1.5 + 30.0 * u(rng);
    const double w = std::min(0.05 + 3.0 * u(rng), 0.99 * (c - 1.0));
    const auto b = GridFunction::sample(g, [&](double r) {
      const double s = (r - c) / w;
      return Complex(std::abs(s) < 1 ? std::exp(-1.0 / (1 - s * s)) : 0.0);
    });
    CHECK(hardy_audit(b).quotient <= 2.5);
  }
}
