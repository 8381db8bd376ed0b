#include "groundstate/flows.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"

namespace groundstate {
namespace {

void require_grid_dimension(const RadialProfile& v, int d, const char* who) {
    if (v.grid().dimension() != d) {
        throw DimensionMismatch(std::string(who) + ": profile dimension " +
                                std::to_string(v.grid().dimension()) + " differs from d = " + std::to_string(d));
    }
}

double l2_distance(const StaggeredGrid& grid, std::span<const double> a, std::span<const double> b) {
    const auto w = grid.weights();
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const double e = a[j] - b[j];
        s += w[j] * e * e;
    }
    return std::sqrt(s);
}

void require_positive(std::span<const double> v, long iteration) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] > 0.0)) {
            throw DegenerateIterate("iterate " + std::to_string(iteration) + " lost positivity at node " +
                                    std::to_string(j));
        }
    }
}

/// Start states may underflow to zero far out (exp(-r^2) beyond r ~ 27); one
/// implicit step makes them strictly positive again.
void require_admissible_start(std::span<const double> v) {
    bool any = false;
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (!(v[j] >= 0.0)) {
            throw DegenerateIterate("initial state is negative at node " + std::to_string(j));
        }
        any = any || v[j] > 0.0;
    }
    if (!any) throw DegenerateIterate("initial state is identically zero");
}

}  // namespace

void FlowConfig::validate() const {
    if (!(tau > 0.0)) throw InvalidConfiguration("flow: tau must be positive");
    if (!(tol > 0.0)) throw InvalidConfiguration("flow: tolerance must be positive");
    if (max_iter < 1) throw InvalidConfiguration("flow: max_iter must be >= 1");
}

FlowResult nehari_flow(double sigma, int d, const FlowConfig& config, const std::optional<RadialProfile>& initial,
                       const FlowObserver& observer) {
    config.validate();
    require_subcritical(d, sigma);

    const StaggeredGrid grid = initial ? initial->grid() : config.grid(d);
    if (initial) require_grid_dimension(*initial, d, "nehari_flow");
    const int m = grid.size();
    const auto weights = grid.weights();

    std::vector<double> phi(m);
    if (initial) {
        std::copy(initial->values().begin(), initial->values().end(), phi.begin());
    } else {
        for (int j = 0; j < m; ++j) phi[j] = std::exp(-grid.node(j) * grid.node(j));
    }
    require_admissible_start(phi);

    const double two_sigma = 2.0 * sigma;
    const double inv_tau = 1.0 / config.tau;
    std::vector<double> pow_phi(m);  // |phi^n|^{2 sigma}
    for (int j = 0; j < m; ++j) pow_phi[j] = std::pow(std::abs(phi[j]), two_sigma);

    std::vector<double> potential(m), rhs(m), star(m), pow_star(m), next(m);
    FlowResult result{RadialProfile::zeros(grid), {}, {}, 0, 0.0, false, 0.0, std::nullopt, std::nullopt};

    for (long n = 1; n <= config.max_iter; ++n) {
        for (int j = 0; j < m; ++j) {
            potential[j] = (1.0 - pow_phi[j]) / sigma;
            rhs[j] = phi[j] * inv_tau;
        }
        const TridiagonalLU lu(assemble_operator(grid, inv_tau, potential));
        lu.solve(rhs, star);
        require_positive(star, n);

        double l2 = 0.0;
        double nonlinear = 0.0;
        for (int j = 0; j < m; ++j) {
            pow_star[j] = std::pow(star[j], two_sigma);
            const double sq = star[j] * star[j];
            l2 += weights[j] * sq;
            nonlinear += weights[j] * pow_star[j] * sq;
        }
        if (!(nonlinear > 0.0)) throw DegenerateIterate("nehari_flow: iterate collapsed to zero");
        const double quadratic = 0.5 * dirichlet_form(grid, star) + l2 / sigma;
        const double lambda = std::pow(sigma * quadratic / nonlinear, 1.0 / two_sigma);
        const double lambda_pow = std::pow(lambda, two_sigma);

        for (int j = 0; j < m; ++j) {
            next[j] = lambda * star[j];
            pow_phi[j] = lambda_pow * pow_star[j];
        }
        const double residual = l2_distance(grid, next, phi) * inv_tau;
        phi.swap(next);

        result.scalar_history.push_back(lambda);
        result.residual_history.push_back(residual);
        if (observer) observer(FlowIteration{n, phi, star, lambda, residual});

        if (!std::isfinite(residual)) throw DegenerateIterate("nehari_flow: non-finite residual");
        if (residual <= config.tol) {
            result.iterations = n;
            result.final_residual = residual;
            result.converged = true;
            result.scalar = lambda;
            result.gamma = rescale_gamma(lambda, config.tau, sigma);
            result.profile = RadialProfile(grid, std::move(phi));
            return result;
        }
    }
    throw NonConvergence("nehari_flow: no convergence within " + std::to_string(config.max_iter) +
                             " iterations (sigma = " + std::to_string(sigma) + ", d = " + std::to_string(d) + ")",
                         std::move(result.residual_history));
}

FlowResult linf_flow(double sigma, int d, const FlowConfig& config, const FlowObserver& observer) {
    config.validate();
    if (d < 3) throw DomainError("linf_flow: requires d >= 3");
    require_subcritical(d, sigma);
    const double base_eps = eps0(d, sigma);

    const StaggeredGrid grid = config.grid(d);
    const int m = grid.size();
    std::vector<double> w(m);
    for (int j = 0; j < m; ++j) w[j] = aubin_talenti(d, grid.node(j));

    const double two_sigma = 2.0 * sigma;
    const double inv_tau = 1.0 / config.tau;
    std::vector<double> potential(m), rhs(m), star(m), next(m);
    FlowResult result{RadialProfile::zeros(grid), {}, {}, 0, 0.0, false, 0.0, std::nullopt, std::nullopt};

    for (long n = 1; n <= config.max_iter; ++n) {
        for (int j = 0; j < m; ++j) {
            potential[j] = base_eps - std::pow(std::abs(w[j]), two_sigma);
            rhs[j] = w[j] * inv_tau;
        }
        const TridiagonalLU lu(assemble_operator(grid, inv_tau, potential));
        lu.solve(rhs, star);
        require_positive(star, n);

        const double mu = lp_norm(grid, star, kInfinity);
        if (!(mu > 0.0)) throw DegenerateIterate("linf_flow: iterate collapsed to zero");
        const double inv_mu = 1.0 / mu;
        for (int j = 0; j < m; ++j) next[j] = star[j] * inv_mu;
        const double residual = l2_distance(grid, next, w) * inv_tau;
        w.swap(next);

        result.scalar_history.push_back(mu);
        result.residual_history.push_back(residual);
        if (observer) observer(FlowIteration{n, w, star, mu, residual});

        if (!std::isfinite(residual)) throw DegenerateIterate("linf_flow: non-finite residual");
        if (residual <= config.tol) {
            result.iterations = n;
            result.final_residual = residual;
            result.converged = true;
            result.scalar = mu;
            result.eps_bar = base_eps + (mu - 1.0) / (mu * config.tau);
            result.profile = RadialProfile(grid, std::move(w));
            return result;
        }
    }
    throw NonConvergence("linf_flow: no convergence within " + std::to_string(config.max_iter) +
                             " iterations (sigma = " + std::to_string(sigma) + ", d = " + std::to_string(d) + ")",
                         std::move(result.residual_history));
}

double rescale_gamma(double lambda, double tau, double sigma) { return 1.0 + sigma * (1.0 - lambda) / tau; }

RadialProfile rescale_fixed_point(const RadialProfile& phi, double lambda, double tau, double sigma) {
    const double gamma = rescale_gamma(lambda, tau, sigma);
    if (!(gamma > 0.0)) throw DomainError("rescale_fixed_point: gamma = " + std::to_string(gamma) + " <= 0");
    if (gamma == 1.0) return phi;
    const ProfileInterpolant interp(phi);
    const double amp = std::pow(gamma, -0.5 / sigma);
    const double stretch = 1.0 / std::sqrt(gamma);
    const auto& grid = phi.grid();
    std::vector<double> u(grid.size());
    for (int j = 0; j < grid.size(); ++j) u[j] = amp * interp(grid.node(j) * stretch);
    return RadialProfile(grid, std::move(u));
}

RadialProfile rescale_fixed_point_exact(const RadialProfile& phi, double lambda, double tau, double sigma) {
    const double gamma = rescale_gamma(lambda, tau, sigma);
    if (!(gamma > 0.0)) throw DomainError("rescale_fixed_point_exact: gamma = " + std::to_string(gamma) + " <= 0");
    const double amp = std::pow(gamma, -0.5 / sigma);
    std::vector<double> u(phi.values().begin(), phi.values().end());
    for (double& x : u) x *= amp;
    return RadialProfile(phi.grid().scaled(std::sqrt(gamma)), std::move(u));
}

GroundState compute_ground_state(double sigma, int d, const FlowConfig& config) {
    FlowResult flow = nehari_flow(sigma, d, config);
    RadialProfile u = rescale_fixed_point_exact(flow.profile, flow.scalar, config.tau, sigma);
    const double alpha = center_value(u);
    return GroundState{std::move(u), alpha, std::move(flow)};
}

RadialProfile to_w_profile(const RadialProfile& u, double sigma) {
    const double alpha = center_value(u);
    if (!(alpha > 0.0)) throw DomainError("to_w_profile: amplitude must be positive");
    std::vector<double> w(u.values().begin(), u.values().end());
    for (double& x : w) x /= alpha;
    const double stretch = std::pow(alpha, sigma) / std::sqrt(sigma);
    return RadialProfile(u.grid().scaled(stretch), std::move(w));
}

double residual_groundstate(const RadialProfile& u, double sigma, int d) {
    if (!(sigma > 0.0)) throw DomainError("residual_groundstate: sigma must be positive");
    require_grid_dimension(u, d, "residual_groundstate");
    const auto& grid = u.grid();
    std::vector<double> r(u.size());
    apply_laplacian(grid, u.values(), r);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = u[j];
        r[j] += (std::pow(std::abs(x), 2.0 * sigma) - 1.0) * x / sigma;
    }
    return lp_norm(grid, r, 2.0);
}

double residual_w(const RadialProfile& w, double sigma, double eps, int d) {
    if (d < 3) throw DomainError("residual_w: requires d >= 3");
    require_grid_dimension(w, d, "residual_w");
    const auto& grid = w.grid();
    std::vector<double> r(w.size());
    apply_laplacian(grid, w.values(), r);
    for (std::size_t j = 0; j < r.size(); ++j) {
        const double x = w[j];
        r[j] += std::pow(std::abs(x), 2.0 * sigma) * x - eps * x;
    }
    return lp_norm(grid, r, 2.0);
}

}  // namespace groundstate
