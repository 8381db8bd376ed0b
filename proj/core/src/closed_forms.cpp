#include "groundstate/closed_forms.hpp"

#include <cmath>
#include <string>

#include "groundstate/errors.hpp"

namespace groundstate {
namespace {

double star_or_throw(int d, const char* who) {
    const auto s = critical_power(d);
    if (!s) throw DomainError(std::string(who) + ": requires d >= 3, got d = " + std::to_string(d));
    return *s;
}

double width_a(double star) { return star * star / (4.0 * (1.0 + star)); }

double coeff_b(double star) {
    return -(1.0 / (2.0 * star * star)) * (1.0 + 1.0 / ((1.0 + star) * (2.0 + star)));
}

double coeff_c(double star) { return 1.0 / (8.0 * (1.0 + star) * (2.0 + star)); }

}  // namespace

std::optional<double> critical_power(int d) {
    if (d < 1) throw DomainError("dimension must be >= 1");
    if (d <= 2) return std::nullopt;
    return 2.0 / (d - 2);
}

void require_subcritical(int d, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("sigma must be positive, got " + std::to_string(sigma));
    if (const auto s = critical_power(d); s && !(sigma < *s)) {
        throw DomainError("sigma = " + std::to_string(sigma) + " is not below the critical power " +
                          std::to_string(*s) + " for d = " + std::to_string(d));
    }
}

ClosedFormCatalog ClosedFormCatalog::for_dimension(int d) {
    ClosedFormCatalog cat;
    cat.d = d;
    cat.sigma_star = critical_power(d);
    cat.alpha0 = std::exp(0.5 * d);
    cat.slope0 = d * (d - 4) / 12.0 * cat.alpha0;
    if (cat.sigma_star) {
        const double s = *cat.sigma_star;
        cat.a = width_a(s);
        cat.b = coeff_b(s);
        cat.c = coeff_c(s);
        cat.eps_prime_star = (s - 1.0) / (2.0 * s * (1.0 + s) * (2.0 + s));
    }
    return cat;
}

double gausson(int d, double r) { return std::exp(0.5 * (d - r * r)); }

double gausson_derivative(int d, double r) { return -r * gausson(d, r); }

double soliton_1d(double sigma, double x) {
    if (!(sigma > 0.0)) throw DomainError("soliton_1d: sigma must be positive");
    const double amp = std::pow(1.0 + sigma, 0.5 / sigma);
    // cosh^{-1/sigma} evaluated in log form to stay finite far out.
    const double z = std::abs(x) * std::sqrt(sigma);
    const double log_cosh = z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
    return amp * std::exp(-log_cosh / sigma);
}

double soliton_1d_derivative(double sigma, double x) {
    const double k = std::sqrt(sigma);
    return -soliton_1d(sigma, x) * std::tanh(k * x) * k / sigma;
}

double nls_soliton_1d(double sigma, double x) {
    if (!(sigma > 0.0)) throw DomainError("nls_soliton_1d: sigma must be positive");
    const double amp = std::pow(1.0 + sigma, 0.5 / sigma);
    const double z = std::abs(x) * sigma;
    const double log_cosh = z + std::log1p(std::exp(-2.0 * z)) - std::log(2.0);
    return amp * std::exp(-log_cosh / sigma);
}

double aubin_talenti(int d, double rho) {
    const double s = star_or_throw(d, "aubin_talenti");
    return std::pow(1.0 + width_a(s) * rho * rho, -1.0 / s);
}

double aubin_talenti_derivative(int d, double rho) {
    const double s = star_or_throw(d, "aubin_talenti_derivative");
    const double a = width_a(s);
    return -(2.0 * a * rho / s) * std::pow(1.0 + a * rho * rho, -1.0 / s - 1.0);
}

double corrector_mu0(int d, double r) {
    const double r2 = r * r;
    return (d * (d - 4.0) + 4.0 * (1.0 - d) * r2 + r2 * r2) / 12.0 * gausson(d, r);
}

std::vector<double> mu0_positive_roots(int d) {
    if (d < 1) throw DomainError("mu0_positive_roots: dimension must be >= 1");
    const double centre = 2.0 * (d - 1.0);
    const double disc = std::sqrt(3.0 * d * d - 4.0 * d + 4.0);
    std::vector<double> roots;
    for (double r2 : {centre - disc, centre + disc}) {
        // r^2 = 0 at d = 4 is the origin, not a positive root.
        if (r2 > 1e-12) roots.push_back(std::sqrt(r2));
    }
    return roots;
}

double eps0(int d, double sigma) {
    const double s = star_or_throw(d, "eps0");
    if (!(sigma > 0.0) || sigma > s) {
        throw DomainError("eps0: sigma must lie in (0, sigma*], got " + std::to_string(sigma));
    }
    return (1.0 - s) * (s - sigma) / (2.0 * s * (1.0 + s) * (2.0 + s));
}

double eps_upper_bound(int d, double sigma) {
    const double s = star_or_throw(d, "eps_upper_bound");
    return (s - sigma) / (s * (1.0 + sigma));
}

double kernel_v(int d, double rho) {
    const double s = star_or_throw(d, "kernel_v");
    const double ar2 = width_a(s) * rho * rho;
    return (1.0 - ar2) * std::pow(1.0 + ar2, -1.0 - 1.0 / s);
}

double correction_term(int d, double rho) {
    if (d < 5) throw DomainError("correction_term: requires d >= 5, got d = " + std::to_string(d));
    const double s = 2.0 / (d - 2);
    const double a = width_a(s);
    const double b = coeff_b(s);
    const double c = coeff_c(s);
    const double ar2 = a * rho * rho;
    const double s2 = s * s;
    const double first = (std::log1p(ar2) + s2 * b + s2 * c * rho * rho) / (s2 * std::pow(1.0 + ar2, 1.0 / s));
    return first - b * kernel_v(d, rho);
}

double crossing_rho0(int d) {
    if (d < 5) throw DomainError("crossing_rho0: requires d >= 5, got d = " + std::to_string(d));
    constexpr double kStep = 1e-3;
    constexpr double kLimit = 1e3;
    double lo = kStep;
    double f_lo = correction_term(d, lo);
    double hi = 0.0;
    for (double r = 2 * kStep; r < kLimit; r += kStep) {
        const double f = correction_term(d, r);
        if ((f_lo < 0.0) != (f < 0.0)) {
            hi = r;
            break;
        }
        lo = r;
        f_lo = f;
    }
    if (hi == 0.0) throw RootNotFound("crossing_rho0: correction term has no sign change in (0, 1e3)");
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        const double f = correction_term(d, mid);
        if ((f < 0.0) == (f_lo < 0.0)) {
            lo = mid;
            f_lo = f;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

std::function<double(double)> scale_phi_to_u(std::function<double(double)> phi, double sigma) {
    if (!(sigma > 0.0)) throw DomainError("scale_phi_to_u: sigma must be positive");
    const double inv = 1.0 / std::sqrt(sigma);
    return [phi = std::move(phi), inv](double x) { return phi(x * inv); };
}

std::function<double(double)> scale_u_to_w(std::function<double(double)> u, double alpha, double sigma) {
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw DomainError("scale_u_to_w: alpha and sigma must be positive");
    const double stretch = std::sqrt(sigma) / std::pow(alpha, sigma);
    return [u = std::move(u), stretch, alpha](double rho) { return u(stretch * rho) / alpha; };
}

double eps_from_alpha(double alpha, double sigma) { return std::pow(alpha, -2.0 * sigma); }

double alpha_from_eps(double eps, double sigma) { return std::pow(eps, -0.5 / sigma); }

double predicted_alpha_near_star(int d, double sigma) {
    if (d < 5) throw DomainError("predicted_alpha_near_star: requires d >= 5");
    const double s = 2.0 / (d - 2);
    if (!(sigma < s)) throw DomainError("predicted_alpha_near_star: sigma must be below sigma*");
    const double slope = std::abs((s - 1.0) / (2.0 * s * (1.0 + s) * (2.0 + s)));
    return std::pow(slope * (s - sigma), -0.5 / s);
}

}  // namespace groundstate
