#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/constants/constants.hpp>
#include <cmath>
#include <random>
#include <vector>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"
#include "groundstate/grid.hpp"

using namespace groundstate;

namespace {

constexpr double kPi = boost::math::constants::pi<double>();

std::vector<double> random_profile(std::mt19937_64& rng, int m) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> v(m);
    for (double& x : v) x = dist(rng);
    return v;
}

}  // namespace

TEST_SUITE("grid") {

TEST_CASE("mesh width and boundary node") {
    const auto g = build_grid(15.0, 1499, 2);
    CHECK(g.h() == doctest::Approx(30.0 / 2999.0).epsilon(1e-15));
    CHECK(g.h() == doctest::Approx(0.0100033).epsilon(1e-6));

    const auto g2 = build_grid(10.0, 9, 3);
    CHECK((9 + 0.5) * g2.h() == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(g2.node(8) < 10.0);
    CHECK(g2.node(8) > 0.0);
}

TEST_CASE("invalid grids are rejected") {
    CHECK_THROWS_AS(build_grid(0.0, 100, 1), InvalidConfiguration);
    CHECK_THROWS_AS(build_grid(-1.0, 100, 1), InvalidConfiguration);
    CHECK_THROWS_AS(build_grid(1.0, 3, 1), InvalidConfiguration);
    CHECK_THROWS_AS(build_grid(1.0, 10, 0), InvalidConfiguration);
}

TEST_CASE("surface constants") {
    CHECK(surface_area(1) == 2.0);
    CHECK(surface_area(2) == doctest::Approx(2 * kPi).epsilon(1e-15));
    CHECK(surface_area(3) == doctest::Approx(4 * kPi).epsilon(1e-15));
    CHECK(surface_area(4) == doctest::Approx(2 * kPi * kPi).epsilon(1e-15));
    CHECK(surface_area(5) == doctest::Approx(8 * kPi * kPi / 3).epsilon(1e-15));
    // Beyond the table: the volume recursion C(d+2) = 2 pi C(d) / d.
    for (int d = 5; d <= 10; ++d) {
        CHECK(surface_area(d + 2) == doctest::Approx(2 * kPi * surface_area(d) / d).epsilon(1e-12));
    }
}

TEST_CASE("laplacian in one dimension is the plain second difference") {
    const auto g = build_grid(3.0, 200, 1);
    const auto v = RadialProfile::sample(g, [](double r) { return std::sin(r); });
    const auto lap = apply_laplacian(v);
    const double h2 = g.h() * g.h();
    for (int j = 1; j < g.size() - 1; ++j) {
        CHECK(lap[j] == doctest::Approx((v[j + 1] - 2 * v[j] + v[j - 1]) / h2).epsilon(1e-12));
    }
}

TEST_CASE("laplacian annihilates constants away from the boundary row") {
    for (int d : {1, 2, 3, 5}) {
        const auto g = build_grid(5.0, 100, d);
        const auto v = RadialProfile::sample(g, [](double) { return 3.5; });
        const auto lap = apply_laplacian(v);
        for (int j = 0; j <= g.size() - 2; ++j) CHECK(std::abs(lap[j]) <= 1e-9);
        CHECK(lap[g.size() - 1] < 0.0);
    }
}

TEST_CASE("laplacian of r^2 in three dimensions") {
    const auto g = build_grid(4.0, 80, 3);
    const auto v = RadialProfile::sample(g, [](double r) { return r * r; });
    const auto lap = apply_laplacian(v);
    const double h = g.h();
    for (int j = 1; j < g.size() - 1; ++j) {
        const double r = g.node(j);
        CHECK(lap[j] == doctest::Approx(6.0 + h * h / (2 * r * r)).epsilon(1e-10));
    }
}

TEST_CASE("operator assembly reproduces shift - laplacian + potential") {
    const auto g = build_grid(6.0, 150, 3);
    const auto v = RadialProfile::sample(g, [](double r) { return std::exp(-r * r) * (1 + r); });
    const auto lap = apply_laplacian(v);

    const auto a = assemble_operator(g, 1.0, 0.0);
    const auto av = a.apply(v);
    for (int j = 0; j < g.size(); ++j) CHECK(av[j] == doctest::Approx(v[j] - lap[j]).epsilon(1e-12));

    const auto pure = assemble_operator(g, 0.0, 0.0);
    const auto c = pure.apply(RadialProfile::sample(g, [](double) { return 1.0; }));
    for (int j = 0; j < g.size() - 1; ++j) CHECK(std::abs(c[j]) <= 1e-9);

    // Matrix of the Nehari step with tau = 0.1.
    const double sigma = 0.5;
    const auto pot = RadialProfile::sample(g, [&](double r) {
        return (1.0 - std::pow(std::exp(-r * r), 2 * sigma)) / sigma;
    });
    const auto step = assemble_operator(g, 10.0, pot);
    const auto sv = step.apply(v);
    for (int j = 0; j < g.size(); ++j) {
        CHECK(sv[j] == doctest::Approx(10.0 * v[j] - lap[j] + pot[j] * v[j]).epsilon(1e-12));
    }
}

TEST_CASE("tridiagonal solves") {
    const auto g = build_grid(1.0, 30, 1);
    const int m = g.size();
    std::mt19937_64 rng(7);
    const auto rhs = RadialProfile(g, random_profile(rng, m));

    TridiagonalOperator id{std::vector<double>(m - 1, 0.0), std::vector<double>(m, 1.0), std::vector<double>(m - 1, 0.0)};
    const auto x = solve_tridiagonal(id, rhs);
    for (int j = 0; j < m; ++j) CHECK(x[j] == rhs[j]);

    TridiagonalOperator two{std::vector<double>(m - 1, 0.0), std::vector<double>(m, 2.0), std::vector<double>(m - 1, 0.0)};
    const auto half = solve_tridiagonal(two, RadialProfile::sample(g, [](double) { return 1.0; }));
    for (int j = 0; j < m; ++j) CHECK(half[j] == 0.5);

    // Random diagonally dominant matrix, solution known.
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    TridiagonalOperator a;
    a.sub.resize(m - 1);
    a.super.resize(m - 1);
    a.diag.resize(m);
    for (auto& s : a.sub) s = u(rng);
    for (auto& s : a.super) s = u(rng);
    for (auto& s : a.diag) s = 2.5 + u(rng);
    const auto truth = random_profile(rng, m);
    const auto b = RadialProfile(g, a.apply(truth));
    const auto got = solve_tridiagonal(a, b);
    for (int j = 0; j < m; ++j) CHECK(got[j] == doctest::Approx(truth[j]).epsilon(1e-12));

    TridiagonalOperator singular{std::vector<double>(m - 1, 0.0), std::vector<double>(m, 1.0), std::vector<double>(m - 1, 0.0)};
    singular.diag[3] = 0.0;
    CHECK_THROWS_AS(solve_tridiagonal(singular, rhs), SingularSystem);
}

TEST_CASE("lp norms") {
    const auto g1 = build_grid(15.0, 1499, 1);
    CHECK(lp_norm(RadialProfile::zeros(g1), 2.0) == 0.0);
    const auto u0 = RadialProfile::sample(g1, [](double r) { return gausson(1, r); });
    // 2 int_0^inf e^{1 - x^2} dx = e sqrt(pi).
    CHECK(lp_norm(u0, 2.0) == doctest::Approx(std::sqrt(std::exp(1.0) * std::sqrt(kPi))).epsilon(1e-10));
    CHECK(lp_norm(u0, 2.0) == doctest::Approx(2.1950).epsilon(1e-4));

    const auto g5 = build_grid(60.0, 3000, 5);
    const auto ws = RadialProfile::sample(g5, [](double r) { return aubin_talenti(5, r); });
    CHECK(lp_norm(ws, kInfinity) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("inner product") {
    const auto g = build_grid(15.0, 1499, 2);
    std::mt19937_64 rng(11);
    const auto u = RadialProfile(g, random_profile(rng, g.size()));
    const auto v = RadialProfile(g, random_profile(rng, g.size()));
    CHECK(inner_product(u, v) == doctest::Approx(inner_product(v, u)).epsilon(1e-14));
    CHECK(inner_product(v, v) == doctest::Approx(std::pow(lp_norm(v, 2.0), 2)).epsilon(1e-12));

    // <u0, mu0> in 1D against an independent Gauss-Kronrod quadrature.
    const auto g1 = build_grid(15.0, 6000, 1);
    const auto a = RadialProfile::sample(g1, [](double r) { return gausson(1, r); });
    const auto b = RadialProfile::sample(g1, [](double r) { return corrector_mu0(1, r); });
    const auto integrand = [](double x) {
        const double u = std::exp((1.0 - x * x) / 2.0);
        return u * u * (x * x * x * x - 3.0) / 12.0;
    };
    const double oracle =
        2.0 * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, 15.0, 15, 1e-14);
    CHECK(inner_product(a, b) == doctest::Approx(oracle).epsilon(1e-8));

    const auto other = build_grid(14.0, 1499, 2);
    CHECK_THROWS_AS(inner_product(u, RadialProfile::zeros(other)), DimensionMismatch);
}

TEST_CASE("center value extrapolation") {
    const auto g = build_grid(5.0, 500, 2);
    CHECK(center_value(RadialProfile::sample(g, [](double) { return 4.25; })) == doctest::Approx(4.25).epsilon(1e-15));
    CHECK(center_value(RadialProfile::sample(g, [](double r) { return 1.0 - r * r; })) ==
          doctest::Approx(1.0).epsilon(1e-14));
    const auto fine = build_grid(15.0, 1500, 2);
    REQUIRE(fine.h() == doctest::Approx(0.01).epsilon(1e-3));
    const double c = center_value(RadialProfile::sample(fine, [](double r) { return gausson(2, r); }));
    CHECK(std::abs(c - std::exp(1.0)) <= 1e-4);
}

TEST_CASE("first sign change") {
    const auto g = build_grid(5.0, 400, 1);
    const auto u = RadialProfile::sample(g, [](double r) { return std::exp(-r); });
    CHECK_FALSE(first_sign_change(u, u).has_value());
    const auto lin = RadialProfile::sample(g, [](double r) { return 1.0 - r; });
    const auto zero = RadialProfile::zeros(g);
    const auto x = first_sign_change(lin, zero);
    REQUIRE(x.has_value());
    CHECK(std::abs(*x - 1.0) <= g.h());
}

TEST_CASE("property: the discrete laplacian is self-adjoint and non-positive") {
    std::mt19937_64 rng(2024);
    for (int d : {1, 2, 3, 4, 5, 7}) {
        const auto g = build_grid(8.0, 257, d);
        for (int trial = 0; trial < 20; ++trial) {
            const auto u = RadialProfile(g, random_profile(rng, g.size()));
            const auto v = RadialProfile(g, random_profile(rng, g.size()));
            const double uv = inner_product(apply_laplacian(u), v);
            const double vu = inner_product(u, apply_laplacian(v));
            CHECK(std::abs(uv - vu) <= 1e-10 * std::max(std::abs(uv), 1.0));
            CHECK(inner_product(apply_laplacian(u), u) <= 0.0);
            CHECK(-inner_product(apply_laplacian(u), u) == doctest::Approx(dirichlet_form(u)).epsilon(1e-10));
        }
    }
}

TEST_CASE("property: second-order consistency of the stencil") {
    // Delta e^{-r^2} = (4 r^2 - 2d) e^{-r^2}. The first cells carry an O(1)
    // pointwise error for d >= 2 (see the r^2 case), so measure away from 0.
    for (int d : {1, 2, 3, 5}) {
        double prev = 0.0;
        for (int m : {400, 800, 1600, 3200}) {
            const auto g = build_grid(10.0, m, d);
            const auto v = RadialProfile::sample(g, [](double r) { return std::exp(-r * r); });
            const auto lap = apply_laplacian(v);
            double err = 0.0;
            for (int j = 0; j < g.size(); ++j) {
                const double r = g.node(j);
                if (r < 1.0) continue;
                if (r > 8.0) break;
                err = std::max(err, std::abs(lap[j] - (4 * r * r - 2 * d) * std::exp(-r * r)));
            }
            if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.9);
            prev = err;
        }
    }
}

TEST_CASE("property: solve after assemble is the identity") {
    std::mt19937_64 rng(5);
    for (int d : {1, 3, 5}) {
        const auto g = build_grid(12.0, 500, d);
        const auto pot = RadialProfile::sample(g, [](double r) { return r * r; });
        const auto a = assemble_operator(g, 10.0, pot);
        const auto x = RadialProfile(g, random_profile(rng, g.size()));
        const auto back = solve_tridiagonal(a, a.apply(x));
        double err = 0.0, scale = 0.0;
        for (int j = 0; j < g.size(); ++j) {
            err = std::max(err, std::abs(back[j] - x[j]));
            scale = std::max(scale, std::abs(x[j]));
        }
        CHECK(err <= 1e-10 * scale);
    }
}

TEST_CASE("interpolant reproduces samples and vanishes past the boundary") {
    const auto g = build_grid(6.0, 120, 2);
    const auto v = RadialProfile::sample(g, [](double r) { return std::exp(-r * r / 4); });
    const ProfileInterpolant f(v);
    for (int j = 0; j < g.size(); j += 7) CHECK(f(g.node(j)) == doctest::Approx(v[j]).epsilon(1e-14));
    CHECK(f(6.5) == 0.0);
    CHECK(f(0.0) == doctest::Approx(1.0).epsilon(1e-4));
}

}  // TEST_SUITE
