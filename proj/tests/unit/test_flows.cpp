#include <doctest.h>

#include <cmath>
#include <vector>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"
#include "groundstate/flows.hpp"

using namespace groundstate;

namespace {

FlowConfig grid_config(double R, int M, double tau = 0.1) {
    FlowConfig c;
    c.R = R;
    c.M = M;
    c.tau = tau;
    return c;
}

double max_slope_near_origin(const RadialProfile& u, double r_max) {
    const auto& g = u.grid();
    double s = 0.0;
    for (int j = 0; j + 1 < g.size() && g.node(j) < r_max; ++j) s = std::max(s, std::abs(u[j + 1] - u[j]) / g.h());
    return s;
}

}  // namespace

TEST_SUITE("flows") {

TEST_CASE("configuration checks") {
    FlowConfig c;
    c.tau = 0.0;
    CHECK_THROWS_AS(c.validate(), InvalidConfiguration);
    c = FlowConfig{};
    c.tol = -1.0;
    CHECK_THROWS_AS(c.validate(), InvalidConfiguration);
    c = FlowConfig{};
    c.max_iter = 0;
    CHECK_THROWS_AS(c.validate(), InvalidConfiguration);
    CHECK_THROWS_AS(nehari_flow(0.7, 5, FlowConfig{}), DomainError);
    CHECK_THROWS_AS(linf_flow(0.5, 2, FlowConfig{}), DomainError);
}

TEST_CASE("one-dimensional ground state against the closed form") {
    const auto gs = compute_ground_state(1.0, 1, grid_config(15.0, 2000));
    CHECK(std::abs(gs.alpha - std::sqrt(2.0)) <= 1e-3);
    double sup = 0.0;
    const auto& g = gs.u.grid();
    for (int j = 0; j < g.size(); ++j) sup = std::max(sup, std::abs(gs.u[j] - soliton_1d(1.0, g.node(j))));
    CHECK(sup <= 1e-3);
}

TEST_CASE("two dimensions, small power: amplitude follows the slope at zero") {
    const double s = 0.1;
    const auto gs = compute_ground_state(s, 2, FlowConfig{});
    const double predicted = std::exp(1.0) * (1.0 - s / 3.0);
    CHECK(std::abs(gs.alpha - predicted) <= 0.03 * predicted);
}

TEST_CASE("two dimensions, large power: steeper at the origin") {
    const auto g1 = compute_ground_state(1.0, 2, FlowConfig{});
    const auto g8 = compute_ground_state(8.0, 2, grid_config(40.0, 4000));
    CHECK(g8.flow.converged);
    CHECK(max_slope_near_origin(g8.u, 1.0) > max_slope_near_origin(g1.u, 1.0));
}

TEST_CASE("rescaling of the fixed point") {
    const auto g = build_grid(10.0, 200, 1);
    const auto phi = RadialProfile::sample(g, [](double r) { return std::exp(-r * r); });
    const auto same = rescale_fixed_point(phi, 1.0, 0.1, 0.7);
    for (int j = 0; j < g.size(); ++j) CHECK(same[j] == doctest::Approx(phi[j]).epsilon(1e-14));
    CHECK(rescale_gamma(1.0, 0.1, 0.7) == 1.0);
    CHECK_THROWS_AS(rescale_fixed_point(phi, 100.0, 0.1, 1.0), DomainError);

    const double s = 1.0;
    const auto cfg = grid_config(15.0, 2000);
    const FlowResult r = nehari_flow(s, 1, cfg);
    const auto u = rescale_fixed_point(r.profile, r.scalar, cfg.tau, s);
    double sup = 0.0;
    for (int j = 0; j < u.grid().size(); ++j) sup = std::max(sup, std::abs(u[j] - soliton_1d(s, u.grid().node(j))));
    CHECK(sup <= 1e-3);
    const double before = residual_groundstate(r.profile, s, 1);
    CHECK(residual_groundstate(u, s, 1) * 10.0 <= before);
    const auto exact = rescale_fixed_point_exact(r.profile, r.scalar, cfg.tau, s);
    CHECK(residual_groundstate(exact, s, 1) * 10.0 <= before);
    CHECK(exact.grid().h() == doctest::Approx(r.profile.grid().h() * std::sqrt(*r.gamma)).epsilon(1e-14));
}

TEST_CASE("L-infinity flow near the critical power") {
    const double s = 0.66;
    const FlowResult r = linf_flow(s, 5, grid_config(60.0, 6000));
    REQUIRE(r.eps_bar.has_value());
    CHECK(std::abs(*r.eps_bar - eps0(5, s)) <= 0.2 * eps0(5, s));
    CHECK(residual_w(r.profile, s, *r.eps_bar, 5) <= 10.0 * FlowConfig{}.tol);
}

TEST_CASE("L-infinity normalization holds at every step") {
    long steps = 0;
    bool normalized = true;
    bool positive = true;
    const FlowResult r = linf_flow(0.6, 5, grid_config(60.0, 3000, 1.0), [&](const FlowIteration& it) {
        ++steps;
        const RadialProfile w(build_grid(60.0, 3000, 5), std::vector<double>(it.iterate.begin(), it.iterate.end()));
        normalized = normalized && std::abs(lp_norm(w, kInfinity) - 1.0) <= 1e-14;
        for (double x : it.iterate) positive = positive && x > 0.0;
        CHECK(it.scalar > 0.0);
    });
    CHECK(steps == r.iterations);
    CHECK(normalized);
    CHECK(positive);
    CHECK(center_value(r.profile) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("the two flows agree on the rescaled profile") {
    const double s = 0.54;
    const auto gs = compute_ground_state(s, 5, FlowConfig{});
    const RadialProfile w_nehari = to_w_profile(gs.u, s);
    const FlowResult lin = linf_flow(s, 5, grid_config(60.0, 3000, 1.0));
    const ProfileInterpolant a(w_nehari), b(lin.profile);
    double sup = 0.0;
    for (double rho = 0.0; rho <= 40.0; rho += 0.05) sup = std::max(sup, std::abs(a(rho) - b(rho)));
    CHECK(sup <= 5e-3);
    CHECK(center_value(w_nehari) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("ground-state residual") {
    double prev = 0.0;
    // R = 40 keeps the jump to the Dirichlet value below the O(h^2) defect.
    for (int m : {1500, 3000, 6000}) {
        const auto g = build_grid(40.0, m, 1);
        const auto u = RadialProfile::sample(g, [](double r) { return soliton_1d(1.0, r); });
        const double res = residual_groundstate(u, 1.0, 1);
        if (prev > 0.0) CHECK(prev / res == doctest::Approx(4.0).epsilon(0.05));
        prev = res;
    }
    CHECK(residual_groundstate(RadialProfile::zeros(build_grid(5.0, 50, 2)), 0.5, 2) == 0.0);

    // The Gausson misses the equation by O(sigma).
    const auto g = build_grid(15.0, 1499, 2);
    const auto u0 = RadialProfile::sample(g, [](double r) { return gausson(2, r); });
    const double r1 = residual_groundstate(u0, 0.1, 2);
    const double r2 = residual_groundstate(u0, 0.05, 2);
    CHECK(r1 / r2 == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("rescaled-equation residual") {
    // w(rho) = u(c rho)/alpha with c^2 = sigma alpha^{-2 sigma} and eps = alpha^{-2 sigma}
    // turns the u-residual into sigma alpha^{-2 sigma - 1} times the w-residual,
    // and the L^2_r norm picks up c^{-d/2}. This holds for any positive profile.
    for (int d : {3, 5}) {
        for (double s : {0.3, 0.6}) {
            const auto g = build_grid(12.0, 800, d);
            const auto u = RadialProfile::sample(g, [](double r) { return 1.7 * std::exp(-0.4 * r * r); });
            const double alpha = center_value(u);
            const double c = std::sqrt(s) * std::pow(alpha, -s);
            const double expected = residual_groundstate(u, s, d) * s * std::pow(alpha, -2.0 * s - 1.0) * std::pow(c, -0.5 * d);
            const double res = residual_w(to_w_profile(u, s), s, eps_from_alpha(alpha, s), d);
            CHECK(res == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    CHECK(residual_w(RadialProfile::zeros(build_grid(5.0, 50, 5)), 0.5, 0.3, 5) == 0.0);
    CHECK_THROWS_AS(residual_w(RadialProfile::zeros(build_grid(5.0, 50, 2)), 0.5, 0.3, 2), DomainError);
}

TEST_CASE("property: the Nehari projection holds at every step") {
    const double s = 0.8;
    const int d = 3;
    const auto grid = FlowConfig{}.grid(d);
    double worst = 0.0;
    bool positive = true;
    nehari_flow(s, d, FlowConfig{}, std::nullopt, [&](const FlowIteration& it) {
        const double quadratic = 0.5 * dirichlet_form(grid, it.iterate) + std::pow(lp_norm(grid, it.iterate, 2.0), 2) / s;
        const double nonlinear = power_integral(grid, it.iterate, 2 * s + 2);
        worst = std::max(worst, std::abs(s * quadratic - nonlinear) / nonlinear);
        for (double x : it.iterate) positive = positive && x > 0.0;
        CHECK(it.scalar > 0.0);
    });
    CHECK(worst <= 1e-10);
    CHECK(positive);
}

TEST_CASE("property: amplitude converges at second order under refinement") {
    std::vector<double> a;
    for (int m : {1000, 2000, 4000}) a.push_back(compute_ground_state(1.0, 1, grid_config(15.0, m)).alpha);
    CHECK((a[0] - a[1]) / (a[1] - a[2]) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("property: the fixed point does not depend on the time step") {
    std::vector<double> a;
    for (double tau : {0.05, 0.1, 0.2}) a.push_back(compute_ground_state(1.0, 1, grid_config(15.0, 2000, tau)).alpha);
    const double tol = FlowConfig{}.tol;
    CHECK(std::abs(a[0] - a[1]) <= 10 * tol);
    CHECK(std::abs(a[2] - a[1]) <= 10 * tol);
}

TEST_CASE("iteration cap raises with the residual history") {
    FlowConfig c;
    c.max_iter = 5;
    try {
        nehari_flow(1.0, 1, c);
        FAIL("expected NonConvergence");
    } catch (const NonConvergence& e) {
        CHECK(e.residual_history().size() == 5);
    }
}

TEST_CASE("degenerate start states are rejected") {
    const auto g = FlowConfig{}.grid(2);
    CHECK_THROWS_AS(nehari_flow(1.0, 2, FlowConfig{}, RadialProfile::zeros(g)), DegenerateIterate);
    auto neg = RadialProfile::sample(g, [](double r) { return 1.0 - r; });
    CHECK_THROWS_AS(nehari_flow(1.0, 2, FlowConfig{}, neg), DegenerateIterate);
}

TEST_CASE("property: runs are deterministic") {
    const auto a = compute_ground_state(0.7, 3, FlowConfig{});
    const auto b = compute_ground_state(0.7, 3, FlowConfig{});
    CHECK(a.alpha == b.alpha);
    CHECK(a.flow.iterations == b.flow.iterations);
}

}  // TEST_SUITE
