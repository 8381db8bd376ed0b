#include <doctest.h>

#include <boost/math/differentiation/finite_difference.hpp>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"
#include "groundstate/grid.hpp"

using namespace groundstate;
using boost::math::differentiation::finite_difference_derivative;

TEST_SUITE("closed_forms") {

TEST_CASE("catalog constants") {
    for (int d = 3; d <= 9; ++d) {
        const auto c = ClosedFormCatalog::for_dimension(d);
        const double s = *c.sigma_star;
        CHECK(s == doctest::Approx(2.0 / (d - 2)).epsilon(1e-15));
        CHECK(*c.a == doctest::Approx(1.0 / (d * (d - 2.0))).epsilon(1e-14));
        CHECK(*c.a == doctest::Approx(s * s / (4 * (1 + s))).epsilon(1e-14));
        CHECK(*c.b == doctest::Approx(-(1.0 / (2 * s * s)) * (1 + 1 / ((1 + s) * (2 + s)))).epsilon(1e-14));
        CHECK(*c.c == doctest::Approx(1.0 / (8 * (1 + s) * (2 + s))).epsilon(1e-14));
        if (d >= 5) CHECK(*c.eps_prime_star < 0.0);
    }
    for (int d = 1; d <= 8; ++d) {
        const auto c = ClosedFormCatalog::for_dimension(d);
        CHECK(c.alpha0 == doctest::Approx(std::exp(d / 2.0)).epsilon(1e-15));
        CHECK(c.slope0 / c.alpha0 == doctest::Approx(d * (d - 4) / 12.0).epsilon(1e-14));
    }
    CHECK_FALSE(ClosedFormCatalog::for_dimension(2).sigma_star.has_value());
    CHECK(ClosedFormCatalog::for_dimension(3).slope0 < 0.0);
    CHECK(ClosedFormCatalog::for_dimension(4).slope0 == 0.0);
    CHECK(ClosedFormCatalog::for_dimension(5).slope0 > 0.0);
}

TEST_CASE("subcriticality") {
    CHECK_NOTHROW(require_subcritical(2, 100.0));
    CHECK_NOTHROW(require_subcritical(5, 0.66));
    CHECK_THROWS_AS(require_subcritical(5, 2.0 / 3.0), DomainError);
    CHECK_THROWS_AS(require_subcritical(3, 0.0), DomainError);
    CHECK_THROWS_AS(require_subcritical(1, -1.0), DomainError);
}

TEST_CASE("gausson") {
    CHECK(gausson(2, 0.0) == doctest::Approx(2.718282).epsilon(1e-6));
    for (int d = 1; d <= 6; ++d) CHECK(gausson(d, std::sqrt(double(d))) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(gausson(1, 2.0) == doctest::Approx(0.223130).epsilon(1e-5));
    for (double r : {0.3, 1.0, 2.5}) {
        const double fd = finite_difference_derivative([](double x) { return gausson(3, x); }, r);
        CHECK(gausson_derivative(3, r) == doctest::Approx(fd).epsilon(1e-10));
    }
}

TEST_CASE("one-dimensional solitons") {
    CHECK(soliton_1d(1.0, 0.0) == doctest::Approx(1.414214).epsilon(1e-6));
    CHECK(soliton_1d(0.5, 0.0) == doctest::Approx(1.5).epsilon(1e-15));
    CHECK(soliton_1d(2.0, 0.0) == doctest::Approx(1.316074).epsilon(1e-6));
    CHECK_THROWS_AS(soliton_1d(0.0, 1.0), DomainError);
    // u'' + (u^{2 sigma} - 1) u / sigma = 0 by a fourth-order difference.
    for (double s : {0.5, 1.0, 2.0}) {
        for (double x : {0.0, 0.7, 2.0}) {
            const double upp = finite_difference_derivative(
                [s](double y) { return soliton_1d_derivative(s, y); }, x);
            const double u = soliton_1d(s, x);
            CHECK(std::abs(upp + (std::pow(u, 2 * s) - 1) * u / s) <= 1e-8);
        }
    }
    // -phi'' + phi = phi^{2 sigma + 1}.
    for (double s : {0.5, 1.0}) {
        for (double x : {0.2, 1.3}) {
            const auto phi = [s](double y) { return nls_soliton_1d(s, y); };
            const double h = 1e-3;
            const double pp = (phi(x + h) - 2 * phi(x) + phi(x - h)) / (h * h);
            CHECK(std::abs(-pp + phi(x) - std::pow(phi(x), 2 * s + 1)) <= 1e-5);
        }
    }
}

TEST_CASE("aubin-talenti soliton") {
    CHECK(aubin_talenti(5, 0.0) == 1.0);
    CHECK(aubin_talenti(5, 2.0) == doctest::Approx(std::pow(1.0 + 4.0 / 15.0, -1.5)).epsilon(1e-15));
    CHECK(aubin_talenti(3, std::sqrt(3.0)) == doctest::Approx(0.707107).epsilon(1e-6));
    CHECK_THROWS_AS(aubin_talenti(2, 1.0), DomainError);
    double prev = 2.0;
    for (double r = 0.0; r < 50.0; r += 0.5) {
        const double w = aubin_talenti(6, r);
        CHECK(w < prev);
        prev = w;
    }
    const double fd = finite_difference_derivative([](double x) { return aubin_talenti(5, x); }, 1.7);
    CHECK(aubin_talenti_derivative(5, 1.7) == doctest::Approx(fd).epsilon(1e-10));
}

TEST_CASE("corrector and its roots") {
    CHECK(corrector_mu0(4, 0.0) == 0.0);
    CHECK(corrector_mu0(1, 0.0) == doctest::Approx(-0.412180).epsilon(1e-6));
    const double r0 = std::sqrt(2 + 2 * std::sqrt(2.0));
    CHECK(std::abs(corrector_mu0(2, r0)) <= 1e-14);

    const auto two = mu0_positive_roots(2);
    REQUIRE(two.size() == 1);
    CHECK(two[0] == doctest::Approx(2.19737).epsilon(1e-5));
    CHECK(mu0_positive_roots(4).size() == 1);
    const auto five = mu0_positive_roots(5);
    REQUIRE(five.size() == 2);
    CHECK(five[0] == doctest::Approx(std::sqrt(8 - std::sqrt(59.0))).epsilon(1e-14));
    CHECK(five[1] == doctest::Approx(std::sqrt(8 + std::sqrt(59.0))).epsilon(1e-14));
    for (int d = 1; d <= 8; ++d) {
        const auto roots = mu0_positive_roots(d);
        CHECK(roots.size() == (d <= 4 ? 1u : 2u));
        for (double r : roots) CHECK(std::abs(corrector_mu0(d, r)) <= 1e-12 * gausson(d, 0.0));
    }
}

TEST_CASE("eps0 and the epsilon bound") {
    for (double s : {0.5, 0.6, 0.66}) CHECK(eps0(5, s) == doctest::Approx(9.0 / 160.0 * (2.0 / 3.0 - s)).epsilon(1e-13));
    CHECK(eps0(6, 0.3) == doctest::Approx(2.0 / 15.0 * 0.2).epsilon(1e-13));
    CHECK(eps0(5, 2.0 / 3.0) == 0.0);
    CHECK(eps0(5, 0.66) == doctest::Approx(3.75e-4).epsilon(1e-10));
    CHECK_THROWS_AS(eps0(2, 0.5), DomainError);
    CHECK_THROWS_AS(eps0(5, 0.7), DomainError);
    CHECK(eps_upper_bound(5, 0.6) == doctest::Approx(0.0625).epsilon(1e-14));
    for (int d : {5, 6, 7}) {
        const auto c = ClosedFormCatalog::for_dimension(d);
        CHECK(eps0(d, 0.5 * *c.sigma_star) == doctest::Approx(-*c.eps_prime_star * 0.5 * *c.sigma_star).epsilon(1e-13));
    }
}

TEST_CASE("scaling kernel") {
    CHECK(std::abs(kernel_v(5, std::sqrt(15.0))) <= 1e-15);
    for (int d : {3, 5, 7}) CHECK(kernel_v(d, 0.0) == 1.0);
    CHECK(kernel_v(5, 1.0) == doctest::Approx((14.0 / 15.0) / std::pow(16.0 / 15.0, 2.5)).epsilon(1e-14));
    CHECK_THROWS_AS(kernel_v(2, 1.0), DomainError);

    // M_0 v = -Delta v - (1 + 2 s*) w*^{2 s*} v vanishes to O(h^2).
    double prev = 0.0;
    for (int m : {1000, 2000, 4000}) {
        const auto g = build_grid(20.0, m, 5);
        const auto v = RadialProfile::sample(g, [](double r) { return kernel_v(5, r); });
        const auto pot = RadialProfile::sample(g, [](double r) {
            return -(1.0 + 2.0 * (2.0 / 3.0)) / std::pow(1.0 + r * r / 15.0, 2);
        });
        const auto res = assemble_operator(g, 0.0, pot).apply(v);
        double err = 0.0;
        for (int j = 0; j < g.size(); ++j) {
            if (g.node(j) < 0.5) continue;
            if (g.node(j) > 15.0) break;
            err = std::max(err, std::abs(res[j]));
        }
        if (prev > 0.0) CHECK(std::log2(prev / err) >= 1.9);
        prev = err;
    }
}

TEST_CASE("correction term and its root") {
    CHECK(std::abs(correction_term(5, 0.0)) <= 1e-15);
    CHECK_THROWS_AS(correction_term(4, 1.0), DomainError);
    CHECK_THROWS_AS(crossing_rho0(4), DomainError);

    // Independent scan with step 1e-3, then Boost TOMS748 on the bracket.
    for (int d : {5, 6, 7}) {
        double lo = 1e-3;
        while (correction_term(d, lo) * correction_term(d, lo + 1e-3) > 0.0) lo += 1e-3;
        boost::math::tools::eps_tolerance<double> tol(50);
        std::uintmax_t it = 100;
        const auto [a, b] = boost::math::tools::toms748_solve([d](double r) { return correction_term(d, r); }, lo,
                                                              lo + 1e-3, tol, it);
        const double rho0 = crossing_rho0(d);
        CHECK(rho0 == doctest::Approx(0.5 * (a + b)).epsilon(1e-9));
        CHECK(correction_term(d, 0.5 * rho0) < 0.0);
        for (double far : {2 * rho0, 10.0, 20.0, 50.0}) CHECK(correction_term(d, far) > 0.0);
    }
    CHECK(crossing_rho0(5) == doctest::Approx(0.910490).epsilon(1e-6));
}

TEST_CASE("rescalings") {
    const auto f = [](double r) { return std::exp(-r * r); };
    const auto same = scale_phi_to_u(f, 1.0);
    CHECK(same(0.8) == f(0.8));
    const auto quarter = scale_phi_to_u(f, 4.0);
    CHECK(quarter(1.0) == f(0.5));
    // 1D: phi = (1 + s)^{1/(2s)} cosh(s x)^{-1/s} maps onto the rescaled soliton.
    const auto phi = [](double x) { return nls_soliton_1d(0.5, x); };
    const auto u = scale_phi_to_u(phi, 0.5);
    for (double x : {0.0, 0.4, 1.9}) CHECK(u(x) == doctest::Approx(soliton_1d(0.5, x)).epsilon(1e-14));

    const auto w = scale_u_to_w(f, 1.0, 1.0);
    CHECK(w(1.3) == f(1.3));
    const double alpha = 3.0, s = 0.6;
    const auto uu = [alpha](double r) { return alpha * std::exp(-r * r); };
    CHECK(scale_u_to_w(uu, alpha, s)(0.0) == 1.0);
    CHECK(eps_from_alpha(alpha, s) == doctest::Approx(std::pow(alpha, -2 * s)).epsilon(1e-15));
    CHECK(alpha_from_eps(eps_from_alpha(alpha, s), s) == doctest::Approx(alpha).epsilon(1e-14));
}

TEST_CASE("amplitude blow-up near the critical power") {
    CHECK(predicted_alpha_near_star(5, 2.0 / 3.0 - 1e-3) ==
          doctest::Approx(std::pow(9.0 / 160.0 * 1e-3, -0.75)).epsilon(1e-12));
    double prev = 0.0;
    for (double gap : {1e-1, 1e-2, 1e-3, 1e-4}) {
        const double a = predicted_alpha_near_star(5, 2.0 / 3.0 - gap);
        CHECK(a > prev);
        prev = a;
    }
    CHECK_THROWS_AS(predicted_alpha_near_star(5, 0.7), DomainError);
}

}  // TEST_SUITE
