#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tclab/error.hpp"
#include "tclab/kernels.hpp"
#include "tclab/operators.hpp"
#include "tclab/resolvent.hpp"
#include "tclab/tridiagonal.hpp"

using namespace tclab;

TEST_CASE("grid nodes and spacing") {
  const Grid g(1.0, 3.0, 9);
  CHECK(g.h() == doctest::Approx(0.2));
  CHECK(g.node(0) == doctest::Approx(1.2));
  CHECK(g.node(8) == doctest::Approx(2.8));
  CHECK_THROWS_AS(Grid(1.0, 1.0, 16), InvalidArgument);
  CHECK_THROWS_AS(Grid(1.0, 2.0, 3), InvalidArgument);
}

TEST_CASE("weight parsing and sampling") {
  const Grid g(1.0, 2.0, 15);
  const auto w = WeightSpec::parse("2*r^-2").sample(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(w[i] == doctest::Approx(2.0 / (g.node(i) * g.node(i))));
  }
  CHECK(WeightSpec::parse("unit").is_unit());
  CHECK_THROWS_AS(WeightSpec::parse("r^x"), InvalidArgument);
  CHECK_THROWS_AS(WeightSpec::parse("-1*r^2"), InvalidArgument);
}

TEST_CASE("quadrature norm of sin on [0, pi]") {
  const Grid g(0.0, std::numbers::pi, 999);
  const auto f = GridFunction::sample(g, [](double x) { return Complex(std::sin(x)); });
  CHECK(weighted_norm(f, WeightSpec::unit()) ==
        doctest::Approx(std::sqrt(std::numbers::pi / 2)).epsilon(1e-10));
}

TEST_CASE("grid mismatch is reported") {
  GridFunction a(Grid(0.0, 1.0, 15));
  GridFunction b(Grid(0.0, 1.0, 31));
  CHECK_THROWS_AS(a += b, GridMismatch);
}

TEST_CASE("SIMD kernels agree with the scalar reference") {
  const auto& s = kernels::table(kernels::Isa::scalar);
  const auto& v = kernels::table(kernels::Isa::avx2);
  for (std::size_t n : {1u, 2u, 3u, 7u, 64u, 1001u}) {
    const Grid g(0.0, 1.0, std::max<std::size_t>(n, 8));
    const auto x = oracle::random_function(g, 11 + n);
    const auto y0 = oracle::random_function(g, 17 + n);
    const auto lo = oracle::random_function(g, 23 + n);
    const auto di = oracle::random_function(g, 29 + n);
    const auto up = oracle::random_function(g, 31 + n);
    std::vector<double> w(n);
    for (std::size_t i = 0; i < n; ++i) w[i] = 0.5 + std::abs(x[i].real());

    CHECK(v.weighted_sum_sq(x.values().data(), w.data(), n) ==
          doctest::Approx(s.weighted_sum_sq(x.values().data(), w.data(), n)).epsilon(1e-13));
    const Complex ds = s.weighted_dot(x.values().data(), y0.values().data(), nullptr, n);
    const Complex dv = v.weighted_dot(x.values().data(), y0.values().data(), nullptr, n);
    CHECK(std::abs(ds - dv) <= 1e-12 * (1.0 + std::abs(ds)));

    std::vector<Complex> ys(n), yv(n);
    s.tridiag_apply(lo.values().data(), di.values().data(), up.values().data(),
                    x.values().data(), ys.data(), n);
    v.tridiag_apply(lo.values().data(), di.values().data(), up.values().data(),
                    x.values().data(), yv.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(ys[i] - yv[i]) <= 1e-13 * (1.0 + std::abs(ys[i])));

    std::vector<Complex> as(y0.values().begin(), y0.values().begin() + n), av = as;
    s.axpby(0.3, x.values().data(), -1.7, as.data(), n);
    v.axpby(0.3, x.values().data(), -1.7, av.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(as[i] - av[i]) <= 1e-14 * (1.0 + std::abs(as[i])));

    s.scale_by(w.data(), x.values().data(), as.data(), n);
    v.scale_by(w.data(), x.values().data(), av.data(), n);
    for (std::size_t i = 0; i < n; ++i) CHECK(as[i] == av[i]);
  }
}

TEST_CASE("tridiagonal LU matches a dense solve") {
  const Grid g(1.0, 3.0, 120);
  const PhysParams p(1e-3, 2, 1.5);
  const auto A = shifted_operator({p, 0.4, kind::TC{}}, g);
  const auto rhs = oracle::random_function(g, 5);
  TridiagonalLU lu(A);
  const GridFunction x = lu.solve(rhs);
  Eigen::VectorXcd b(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) b(static_cast<Eigen::Index>(i)) = rhs[i];
  const Eigen::VectorXcd ref = oracle::dense(A).partialPivLu().solve(b);
  double err = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    err = std::max(err, std::abs(x[i] - ref(static_cast<Eigen::Index>(i))));
    scale = std::max(scale, std::abs(ref(static_cast<Eigen::Index>(i))));
  }
  CHECK(err <= 1e-10 * scale);
}

TEST_CASE("LU pivots when the leading entry vanishes") {
  const Grid g(0.0, 1.0, 8);
  std::vector<Complex> lo(7, 1.0), di(8, 0.0), up(7, 1.0);
  di[3] = 2.0;
  const TridiagonalOperator A(g, lo, di, up);
  TridiagonalLU lu(A);
  const auto rhs = oracle::random_function(g, 9);
  const GridFunction x = lu.solve(rhs);
  const GridFunction r = A.apply(x) - rhs;
  CHECK(oracle::l2(r) <= 1e-12 * oracle::l2(rhs));
  CHECK(lu.pivoted());
}

TEST_CASE("singular tridiagonal system raises SingularMatrix") {
  const Grid g(0.0, 1.0, 8);
  const TridiagonalOperator Z(g, std::vector<Complex>(7), std::vector<Complex>(8),
                              std::vector<Complex>(7));
  CHECK_THROWS_AS(TridiagonalLU{Z}, SingularMatrix);
}

TEST_CASE("smallest weighted singular value matches dense SVD") {
  const PhysParams p(1e-3, 1, 1.0);
  const Grid tc(1.0, 3.0, 180);
  for (double lam : {-0.5, 0.0, 0.3, 0.9}) {
    const auto A = shifted_operator({p, lam, kind::TC{}}, tc);
    const auto w_in = WeightSpec::power(-2.0), w_out = WeightSpec::power(2.0);
    const double ref = oracle::weighted_sigma_min(A, w_in.sample(tc), w_out.sample(tc));
    CHECK(smallest_singular_value(A, w_in, w_out) == doctest::Approx(ref).epsilon(1e-7));
  }
  const Grid ch(0.0, 1.0, 200);
  const auto C = shifted_operator({p, 0.5, kind::Couette{}}, ch);
  CHECK(smallest_singular_value(C, WeightSpec::unit(), WeightSpec::unit()) ==
        doctest::Approx(oracle::weighted_sigma_min(C, {}, {})).epsilon(1e-7));
}

TEST_CASE("operator assembly matches the stencil") {
  const PhysParams p(2e-3, 3, 1.5);
  const Grid g(1.0, 2.0, 15);
  const auto T = assemble(kind::TC{}, p, g);
  const double h = g.h(), nu = p.nu(), k = 3.0, B = 1.5;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    const Complex d = 2 * nu / (h * h) + (nu * (k * k - 0.25) + Complex(0, k * B)) / (r * r);
    CHECK(std::abs(T.diag()[i] - d) <= 1e-12 * std::abs(d));
  }
  CHECK(T.upper()[0] == Complex(-nu / (h * h)));

  const auto W = assemble(kind::W1{2.0}, p, g);
  const double r0 = g.node(0);
  const double v = nu * (k * k + 32.0 * 32.0) / (r0 * r0) + nu * std::pow(2 * k * B * 2.0 / std::pow(r0, 3), 2);
  CHECK(W.diag()[0].real() == doctest::Approx(2 * nu / (h * h) + v));
  CHECK(W.diag()[0].imag() == 0.0);

  const Grid c(0.0, 1.0, 15);
  const auto C = assemble(kind::Couette{}, p, c);
  CHECK(C.diag()[4].imag() == doctest::Approx(k * c.node(4)));
}

TEST_CASE("kappa and mu") {
  const PhysParams p(1e-6, 2, 4.0);
  CHECK(p.kappa() == doctest::Approx(std::cbrt(1e-6) * std::pow(8.0, 2.0 / 3.0)));
  CHECK(p.mu() == doctest::Approx(std::max(4e-6, p.kappa())));
  CHECK_THROWS_AS(PhysParams(0.0, 1, 1.0), InvalidArgument);
  CHECK_THROWS_AS(PhysParams(1e-3, 0, 1.0), InvalidArgument);
}

TEST_CASE("energy identity against a hand-written quadrature") {
  const PhysParams p(1e-3, 2, 1.0);
  const Grid g(1.0, 4.0, 300);
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto f = oracle::random_function(g, s);
    const auto e = energy_identity_check(p, f);
    double grad = 0.0, over_r = 0.0;
    const double h = g.h();
    for (std::size_t i = 0; i <= g.size(); ++i) {
      const Complex right = i < g.size() ? f[i] : Complex{};
      const Complex left = i > 0 ? f[i - 1] : Complex{};
      grad += std::norm((right - left) / h) * h;
    }
    for (std::size_t i = 0; i < g.size(); ++i) over_r += std::norm(f[i]) / std::pow(g.node(i), 2) * h;
    const double rhs = p.nu() * grad + p.nu() * (4.0 - 0.25) * over_r;
    CHECK(e.lhs == doctest::Approx(rhs).epsilon(1e-12));
    CHECK(e.gap <= 1e-12 * rhs);
  }
}

TEST_CASE("operators are accretive") {
  const PhysParams p(1e-4, 1, 1.0);
  const Grid g(1.0, 4.0, 500);
  CHECK(accretivity_check(assemble(kind::TC{}, p, g), 50, 3) >= -1e-12);
  CHECK(accretivity_check(assemble(kind::W1{5.0}, p, g), 50, 3) >= -1e-12);
  const Grid c(0.0, 1.0, 500);
  CHECK(accretivity_check(assemble(kind::Couette{}, p, c), 50, 3) >= -1e-12);
}

TEST_CASE("resolvent solve has small residual") {
  const PhysParams p(1e-4, 1, 1.0);
  const Grid g(1.0, 4.0, 999);
  const ResolventProbe probe{p, 0.5, kind::TC{}};
  const auto F = GridFunction::sample(g, [](double r) { return Complex(bump(r, 1.5, 0.3)); });
  const GridFunction w = solve_resolvent(probe, F);
  const GridFunction r = shifted_operator(probe, g).apply(w) - F;
  CHECK(oracle::l2(r) <= 1e-10 * oracle::l2(F));
}

TEST_CASE("bump profile") {
  CHECK(bump(2.0, 2.0, 0.5) == doctest::Approx(std::exp(-1.0)));
  CHECK(bump(2.5, 2.0, 0.5) == 0.0);
  CHECK(bump(1.0, 2.0, 0.5) == 0.0);
}

TEST_CASE("pseudo bound on a small grid agrees with a dense scan") {
  const PhysParams p(1e-2, 1, 1.0);
  const Grid g(0.0, 1.0, 127);
  const auto res = pseudo_bound(kind::Couette{}, p, g, WeightSpec::unit(), WeightSpec::unit(),
                                default_lambda_range(kind::Couette{}, g), 21);
  double best = 1e300;
  for (int i = 0; i <= 400; ++i) {
    const double lam = -0.5 + 2.0 * i / 400.0;
    best = std::min(best, oracle::weighted_sigma_min(
                              shifted_operator({p, lam, kind::Couette{}}, g), {}, {}));
  }
  CHECK(res.psi <= best * (1 + 1e-6));
  CHECK(res.psi >= best * (1 - 1e-3));
}

TEST_CASE("Couette witness norm matches the Beta integral") {
  // int_0^a y^6 (a - y)^6 dy = a^13 6! 6! / 13!
  for (double nu : {1e-3, 1e-6}) {
    const double a = std::cbrt(nu);
    const double exact = std::sqrt(std::pow(a, 13) * 518400.0 / 6227020800.0);
    CHECK(sharpness_witness_couette(nu).norm_w == doctest::Approx(exact).epsilon(1e-9));
  }
}

TEST_CASE("TC witness sits at the critical radius") {
  const auto w = sharpness_witness_tc(1e-6, 1.0);
  CHECK(w.r0 == doctest::Approx(10.0));
  CHECK(w.lambda0 == doctest::Approx(0.01));
  CHECK(std::isfinite(w.quotient));
  CHECK(w.quotient > 0.0);
}
