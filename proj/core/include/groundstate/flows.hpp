#pragma once

// Linearly implicit normalized gradient flows for the radial ground state.
//
//  * nehari_flow:  (phi* - phi^n)/tau = Delta phi* + (|phi^n|^{2s} - 1) phi* / s,
//                  phi^{n+1} = lambda phi*, with lambda projecting back onto the
//                  discrete Nehari constraint s I(phi) = ||phi||^{2s+2}_{2s+2}.
//  * linf_flow:    (w* - w^n)/tau = Delta w* + |w^n|^{2s} w* - eps0 w*,
//                  w^{n+1} = w* / ||w*||_inf.
//
// Both stop when ||x^{n+1} - x^n||_{L^2_r} / tau <= tol.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "groundstate/grid.hpp"

namespace groundstate {

struct FlowConfig {
    double tau = 0.1;
    double tol = 1e-10;
    long max_iter = 1'000'000;
    double R = 15.0;
    int M = 1499;

    /// Throws InvalidConfiguration on tau <= 0, tol <= 0 or max_iter < 1.
    void validate() const;
    StaggeredGrid grid(int d) const { return build_grid(R, M, d); }
};

/// Per-iteration snapshot handed to an optional observer.
struct FlowIteration {
    long iteration;
    /// Normalized iterate x^{n+1}.
    std::span<const double> iterate;
    /// Implicit-step solution x* before normalization.
    std::span<const double> unnormalized;
    /// lambda_{n+1} (Nehari) or mu_{n+1} (L^inf).
    double scalar;
    double residual;
};

using FlowObserver = std::function<void(const FlowIteration&)>;

struct FlowResult {
    /// phi_sigma (Nehari flow) or w_sigma (L^inf flow).
    RadialProfile profile;
    /// lambda_n or mu_n per iteration.
    std::vector<double> scalar_history;
    std::vector<double> residual_history;
    long iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
    /// Final lambda or mu.
    double scalar = 0.0;
    /// 1 + sigma (1 - lambda)/tau (Nehari flow only).
    std::optional<double> gamma;
    /// eps0(sigma) + (mu - 1)/(mu tau) (L^inf flow only).
    std::optional<double> eps_bar;
};

/// Nehari-normalized flow. Default initial state exp(-r^2) on config.grid(d).
/// Throws NonConvergence (with the residual history) at the iteration cap and
/// DegenerateIterate when an iterate loses positivity.
FlowResult nehari_flow(double sigma, int d, const FlowConfig& config,
                       const std::optional<RadialProfile>& initial = std::nullopt,
                       const FlowObserver& observer = {});

/// L^inf-normalized flow for d >= 3, started from the sampled Aubin-Talenti soliton.
FlowResult linf_flow(double sigma, int d, const FlowConfig& config, const FlowObserver& observer = {});

/// gamma = 1 + sigma (1 - lambda) / tau.
double rescale_gamma(double lambda, double tau, double sigma);

/// u(r) = gamma^{-1/(2 sigma)} phi(r / sqrt(gamma)), resampled on phi's grid by
/// monotone cubic interpolation (zero beyond R sqrt(gamma)).
/// Throws DomainError when gamma <= 0.
RadialProfile rescale_fixed_point(const RadialProfile& phi, double lambda, double tau, double sigma);

/// Same transform without interpolation: the samples gamma^{-1/(2 sigma)} phi_j
/// placed on the grid with mesh width h sqrt(gamma). The discrete fixed-point
/// equation maps exactly onto the discrete ground-state equation.
RadialProfile rescale_fixed_point_exact(const RadialProfile& phi, double lambda, double tau, double sigma);

/// Ground state of the rescaled equation together with its amplitude.
struct GroundState {
    RadialProfile u;
    double alpha;
    FlowResult flow;
};

/// nehari_flow followed by the exact rescale; alpha = center_value(u).
GroundState compute_ground_state(double sigma, int d, const FlowConfig& config);

/// Discrete form of w(rho) = u(sqrt(sigma) rho / alpha^sigma) / alpha with
/// alpha = center_value(u): samples u_j / alpha on the grid stretched by
/// alpha^sigma / sqrt(sigma).
RadialProfile to_w_profile(const RadialProfile& u, double sigma);

/// ||Delta_r^h u + (|u|^{2 sigma} - 1) u / sigma||_{L^2_r}.
double residual_groundstate(const RadialProfile& u, double sigma, int d);

/// ||Delta_r^h w + |w|^{2 sigma} w - eps w||_{L^2_r}.
double residual_w(const RadialProfile& w, double sigma, double eps, int d);

}  // namespace groundstate
