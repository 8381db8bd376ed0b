#pragma once

// Exact solutions and asymptotic constants for the radial ground-state
// problem  u'' + (d-1)/r u' + (|u|^{2 sigma} - 1) u / sigma = 0  and its
// rescaled form  w'' + (d-1)/rho w' + |w|^{2 sigma} w = eps w.

#include <functional>
#include <optional>
#include <vector>

namespace groundstate {

/// 2/(d-2) for d >= 3, nullopt for d <= 2 (no finite critical power).
std::optional<double> critical_power(int d);

/// Throws DomainError unless 0 < sigma < sigma*(d) (any sigma > 0 for d <= 2).
void require_subcritical(int d, double sigma);

/// Scalar constants attached to one dimension.
struct ClosedFormCatalog {
    int d = 0;
    std::optional<double> sigma_star;
    /// Aubin-Talenti width constant sigma*^2 / (4 (1 + sigma*)) = 1/(d(d-2)).
    std::optional<double> a;
    /// Coefficients of the explicit sigma-derivative of w_sigma at sigma*.
    std::optional<double> b;
    std::optional<double> c;
    /// eps'(sigma*) = (sigma* - 1) / (2 sigma* (1 + sigma*) (2 + sigma*)).
    std::optional<double> eps_prime_star;
    /// alpha(0) = e^{d/2}.
    double alpha0 = 0.0;
    /// alpha'(0) = d(d-4)/12 e^{d/2}.
    double slope0 = 0.0;

    static ClosedFormCatalog for_dimension(int d);
};

/// Gausson u0(r) = exp((d - r^2)/2).
double gausson(int d, double r);
double gausson_derivative(int d, double r);

/// 1D ground state of the rescaled equation:
/// (1 + sigma)^{1/(2 sigma)} cosh(x sqrt(sigma))^{-1/sigma}.
double soliton_1d(double sigma, double x);
double soliton_1d_derivative(double sigma, double x);

/// 1D ground state of -phi'' + phi = |phi|^{2 sigma} phi:
/// (1 + sigma)^{1/(2 sigma)} cosh(sigma x)^{-1/sigma}.
double nls_soliton_1d(double sigma, double x);

/// w*(rho) = (1 + a rho^2)^{-1/sigma*}, d >= 3.
double aubin_talenti(int d, double rho);
double aubin_talenti_derivative(int d, double rho);

/// mu0(r) = [d(d-4) + 4(1-d) r^2 + r^4] u0(r) / 12.
double corrector_mu0(int d, double r);

/// Positive roots of mu0, ascending (one for d <= 4, two for d >= 5).
std::vector<double> mu0_positive_roots(int d);

/// eps0(sigma) = (1 - sigma*)(sigma* - sigma) / (2 sigma* (1 + sigma*)(2 + sigma*)).
/// Positive for d >= 5. Throws DomainError for d < 3 or sigma outside (0, sigma*].
double eps0(int d, double sigma);

/// Upper bound (sigma* - sigma) / (sigma* (1 + sigma)) on eps(sigma).
double eps_upper_bound(int d, double sigma);

/// Scaling-kernel element v(rho) = (1 - a rho^2) / (1 + a rho^2)^{1 + 1/sigma*}.
double kernel_v(int d, double rho);

/// The bracket multiplying (sigma - sigma*) in the first-order expansion
/// w_sigma ~ w* + (sigma - sigma*) * bracket(rho), d >= 5:
///   (ln(1 + a rho^2) + sigma*^2 b + sigma*^2 c rho^2) / (sigma*^2 (1 + a rho^2)^{1/sigma*}) - b v(rho).
/// Negative on (0, rho0), positive beyond, so w_sigma - w* is positive then negative.
double correction_term(int d, double rho);

/// Unique positive root of correction_term (bracketed on (0, 1e3), bisected to 1e-10).
double crossing_rho0(int d);

/// u(x) = phi(x / sqrt(sigma)).
std::function<double(double)> scale_phi_to_u(std::function<double(double)> phi, double sigma);

/// w(rho) = u(sqrt(sigma) rho / alpha^sigma) / alpha.
std::function<double(double)> scale_u_to_w(std::function<double(double)> u, double alpha, double sigma);

/// eps = alpha^{-2 sigma}.
double eps_from_alpha(double alpha, double sigma);
/// alpha = eps^{-1/(2 sigma)}.
double alpha_from_eps(double eps, double sigma);

/// Leading-order blow-up (|eps'(sigma*)| (sigma* - sigma))^{-1/(2 sigma*)}, d >= 5.
double predicted_alpha_near_star(int d, double sigma);

}  // namespace groundstate
