#include "groundstate/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"
#include "groundstate/quadrature.hpp"

namespace groundstate {
namespace {

/// W^{1/2} A W^{-1/2}: same diagonal, off-diagonal sign(A_{j,j+1}) sqrt(A_{j,j+1} A_{j+1,j}).
struct Symmetric {
    std::vector<double> diag;
    std::vector<double> off;
    std::vector<double> off_sq;
    double norm = 0.0;
};

Symmetric symmetrize(const TridiagonalOperator& a) {
    const std::size_t n = a.size();
    if (n == 0 || a.sub.size() + 1 != n || a.super.size() + 1 != n) {
        throw DimensionMismatch("spectral: inconsistent tridiagonal sizes");
    }
    Symmetric s;
    s.diag = a.diag;
    s.off.resize(n - 1);
    s.off_sq.resize(n - 1);
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double prod = a.super[j] * a.sub[j];
        if (prod < 0.0) throw SpectralFailure("spectral: operator is not symmetrizable", prod);
        s.off_sq[j] = prod;
        s.off[j] = std::copysign(std::sqrt(prod), a.super[j]);
    }
    for (std::size_t j = 0; j < n; ++j) {
        double row = std::abs(s.diag[j]);
        if (j > 0) row += std::abs(s.off[j - 1]);
        if (j + 1 < n) row += std::abs(s.off[j]);
        s.norm = std::max(s.norm, row);
    }
    return s;
}

int sturm_count(const Symmetric& s, double x) {
    const double guard = std::numeric_limits<double>::epsilon() * std::max(s.norm, 1.0);
    int count = 0;
    double q = s.diag[0] - x;
    for (std::size_t i = 0;; ++i) {
        if (q == 0.0) q = -guard;
        if (q < 0.0) ++count;
        if (i + 1 == s.diag.size()) break;
        q = s.diag[i + 1] - x - s.off_sq[i] / q;
    }
    return count;
}

/// i-th smallest eigenvalue (0-based) by bisection on the Sturm count.
double bisect_eigenvalue(const Symmetric& s, int i) {
    double lo = -s.norm - 1.0;
    double hi = s.norm + 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sturm_count(s, mid) >= i + 1) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return 0.5 * (lo + hi);
}

void apply_symmetric(const Symmetric& s, std::span<const double> x, std::span<double> out) {
    const std::size_t n = s.diag.size();
    for (std::size_t j = 0; j < n; ++j) {
        double v = s.diag[j] * x[j];
        if (j > 0) v += s.off[j - 1] * x[j - 1];
        if (j + 1 < n) v += s.off[j] * x[j + 1];
        out[j] = v;
    }
}

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

void normalize(std::vector<double>& x) {
    const double n = std::sqrt(dot(x, x));
    for (double& v : x) v /= n;
}

void deflate(std::vector<double>& x, const std::vector<std::vector<double>>& basis) {
    for (const auto& b : basis) {
        const double c = dot(x, b);
        for (std::size_t j = 0; j < x.size(); ++j) x[j] -= c * b[j];
    }
}

std::optional<TridiagonalLU> factor_shifted(const Symmetric& s, double shift) {
    TridiagonalOperator t{s.off, s.diag, s.off};
    for (double& v : t.diag) v -= shift;
    try {
        return TridiagonalLU(t);
    } catch (const SingularSystem&) {
        return std::nullopt;
    }
}

double sigma_star_or_throw(int d, const char* who) {
    const auto s = critical_power(d);
    if (!s) throw DomainError(std::string(who) + ": requires d >= 3");
    return *s;
}

}  // namespace

LinearizedOperator assemble_linearized(const RadialProfile& u, double sigma, int d) {
    if (!(sigma > 0.0)) throw DomainError("assemble_linearized: sigma must be positive");
    if (u.grid().dimension() != d) throw DimensionMismatch("assemble_linearized: profile dimension differs from d");
    std::vector<double> potential(u.size());
    for (std::size_t j = 0; j < u.size(); ++j) {
        if (!(u[j] > 0.0)) {
            throw DomainError("assemble_linearized: non-positive sample at node " + std::to_string(j));
        }
        const double p = std::pow(u[j], 2.0 * sigma);
        potential[j] = (1.0 - p) / sigma - 2.0 * p;
    }
    return LinearizedOperator{assemble_operator(u.grid(), 0.0, potential), sigma, d, u};
}

LinearizedOperator harmonic_oscillator(const StaggeredGrid& grid) {
    const int d = grid.dimension();
    std::vector<double> potential(grid.size());
    for (int j = 0; j < grid.size(); ++j) potential[j] = grid.node(j) * grid.node(j) - d - 2.0;
    return LinearizedOperator{assemble_operator(grid, 0.0, potential), 0.0, d,
                              RadialProfile::sample(grid, [d](double r) { return gausson(d, r); })};
}

double symmetry_defect(const TridiagonalOperator& a, const StaggeredGrid& grid) {
    if (a.size() != static_cast<std::size_t>(grid.size())) {
        throw DimensionMismatch("symmetry_defect: operator and grid sizes differ");
    }
    const auto w = grid.weights();
    double defect = 0.0;
    double scale = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        scale = std::max(scale, std::abs(w[j] * a.diag[j]));
        if (j + 1 < a.size()) defect = std::max(defect, std::abs(w[j] * a.super[j] - w[j + 1] * a.sub[j]));
    }
    return scale > 0.0 ? defect / scale : defect;
}

int count_eigenvalues_below(const TridiagonalOperator& a, double x) { return sturm_count(symmetrize(a), x); }

SpectralReport lowest_eigenvalues(const TridiagonalOperator& a, int k) {
    const int n = static_cast<int>(a.size());
    if (k < 1 || k > n) {
        throw InvalidConfiguration("lowest_eigenvalues: k = " + std::to_string(k) + " outside [1, " +
                                   std::to_string(n) + "]");
    }
    const Symmetric s = symmetrize(a);
    const double tol = 1e-11 * std::max(s.norm, 1.0);

    SpectralReport report;
    std::vector<std::vector<double>> basis;
    std::vector<double> x(n), y(n), ax(n);
    for (int i = 0; i < k; ++i) {
        double shift = bisect_eigenvalue(s, i);
        std::optional<TridiagonalLU> lu = factor_shifted(s, shift);
        for (int nudge = 1; !lu && nudge <= 8; ++nudge) {
            shift -= 1e-12 * std::max(std::abs(shift), 1.0) * std::pow(10.0, nudge);
            lu = factor_shifted(s, shift);
        }
        if (!lu) throw SpectralFailure("lowest_eigenvalues: cannot factor shifted operator", shift);

        // Deterministic start with components along every mode.
        for (int j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::sin(0.37 * j + i);
        deflate(x, basis);
        normalize(x);
        double lambda = shift;
        double residual = std::numeric_limits<double>::infinity();
        for (int it = 0; it < 50; ++it) {
            lu->solve(x, y);
            x.swap(y);
            deflate(x, basis);
            normalize(x);
            apply_symmetric(s, x, ax);
            lambda = dot(x, ax);
            double r2 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double e = ax[j] - lambda * x[j];
                r2 += e * e;
            }
            residual = std::sqrt(r2);
            if (residual <= tol) break;
        }
        if (!(residual <= tol)) {
            throw SpectralFailure("lowest_eigenvalues: inverse iteration stagnated for eigenvalue " +
                                      std::to_string(i),
                                  residual);
        }
        report.lowest_eigenvalues.push_back(lambda);
        report.residuals.push_back(residual);
        basis.push_back(x);
    }
    // Deflated iteration returns the pairs in Sturm order; sort defensively.
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t p, std::size_t q) { return report.lowest_eigenvalues[p] < report.lowest_eigenvalues[q]; });
    SpectralReport sorted;
    for (std::size_t p : order) {
        sorted.lowest_eigenvalues.push_back(report.lowest_eigenvalues[p]);
        sorted.residuals.push_back(report.residuals[p]);
    }
    sorted.morse_index = sturm_count(s, 0.0);
    sorted.kernel_gap = std::numeric_limits<double>::infinity();
    for (double v : sorted.lowest_eigenvalues) sorted.kernel_gap = std::min(sorted.kernel_gap, std::abs(v));
    return sorted;
}

SpectralReport lowest_eigenvalues(const LinearizedOperator& op, int k) { return lowest_eigenvalues(op.base, k); }

ChiSolution solve_chi(const RadialProfile& u, double sigma, int d) {
    const LinearizedOperator op = assemble_linearized(u, sigma, d);
    const Symmetric s = symmetrize(op.base);
    const SpectralReport spectrum = lowest_eigenvalues(op.base, std::min<int>(3, static_cast<int>(u.size())));
    if (spectrum.kernel_gap <= 1e-10 * std::max(s.norm, 1.0)) {
        throw ConditioningError("solve_chi: linearized operator is numerically singular (gap " +
                                std::to_string(spectrum.kernel_gap) + ")");
    }
    std::vector<double> rhs(u.size());
    constexpr double kFloor = 1e-300;
    for (std::size_t j = 0; j < u.size(); ++j) {
        const double x = std::max(u[j], kFloor);
        const double p = std::pow(x, 2.0 * sigma);
        rhs[j] = (1.0 - p) * x / (sigma * sigma) + std::log(x * x) * p * x / sigma;
    }
    RadialProfile chi = solve_tridiagonal(op.base, RadialProfile(u.grid(), std::move(rhs)));
    const double slope = center_value(chi);
    return ChiSolution{std::move(chi), slope};
}

namespace {

PohozaevResiduals pohozaev_from_integrals(double dirichlet, double l2, double power, double sigma, double eps, int d,
                                          double kappa) {
    const std::optional<double> star = critical_power(d);
    PohozaevResiduals out;
    if (power == 0.0 && l2 == 0.0 && dirichlet == 0.0) return out;
    const double lhs1 = kappa * power;
    const double rhs1 = eps * l2 + dirichlet;
    const double lhs2 = d * kappa * power / (1.0 + sigma);
    const double rhs2 = d * eps * l2 + (d - 2.0) * dirichlet;
    out.res1 = std::abs(lhs1 - rhs1) / std::max(std::abs(lhs1), std::abs(rhs1));
    out.res2 = std::abs(lhs2 - rhs2) / std::max(std::abs(lhs2), std::abs(rhs2));
    if (star && l2 > 0.0) out.eps_check = (*star - sigma) * dirichlet / (sigma * (1.0 + *star) * l2);
    return out;
}

}  // namespace

PohozaevResiduals pohozaev_residuals(const RadialProfile& w, double sigma, double eps, int d) {
    sigma_star_or_throw(d, "pohozaev_residuals");
    if (w.grid().dimension() != d) throw DimensionMismatch("pohozaev_residuals: profile dimension differs from d");
    const auto& g = w.grid();
    return pohozaev_from_integrals(dirichlet_form(g, w.values()), power_integral(g, w.values(), 2.0),
                                   power_integral(g, w.values(), 2.0 * sigma + 2.0), sigma, eps, d, 1.0);
}

PohozaevResiduals pohozaev_residuals(std::span<const TrajectorySample> trajectory, double sigma, double eps, int d,
                                     double cutoff, double kappa) {
    double dirichlet = 0.0, l2 = 0.0, power = 0.0;
    for (std::size_t j = 1; j < trajectory.size() && trajectory[j].r <= cutoff; ++j) {
        const auto& p = trajectory[j - 1];
        const auto& q = trajectory[j];
        const double half = 0.5 * (q.r - p.r);
        const auto weight = [d](double r) { return std::pow(r, d - 1); };
        const double wp = weight(p.r), wq = weight(q.r);
        dirichlet += half * (wp * p.du * p.du + wq * q.du * q.du);
        l2 += half * (wp * p.u * p.u + wq * q.u * q.u);
        power += half * (wp * std::pow(std::abs(p.u), 2.0 * sigma + 2.0) + wq * std::pow(std::abs(q.u), 2.0 * sigma + 2.0));
    }
    const double c = surface_area(d);
    return pohozaev_from_integrals(c * dirichlet, c * l2, c * power, sigma, eps, d, kappa);
}

double fredholm_ratio(int d) {
    if (d < 5) throw DomainError("fredholm_ratio: requires d >= 5, got d = " + std::to_string(d));
    const double star = 2.0 / (d - 2);
    const double a = star * star / (4.0 * (1.0 + star));
    const double center = -0.5 * std::log(a);
    const double num = integrate_radial_log(
        [&](double rho) {
            const double w = aubin_talenti(d, rho);
            return kernel_v(d, rho) * std::log(w * w) * std::pow(w, 1.0 + 2.0 * star);
        },
        d, center);
    const double den = integrate_radial_log([&](double rho) { return kernel_v(d, rho) * aubin_talenti(d, rho); }, d,
                                            center);
    return num / den;
}

double mu0_residual(int d, const StaggeredGrid& grid) {
    if (grid.dimension() != d) throw DimensionMismatch("mu0_residual: grid dimension differs from d");
    const int m = grid.size();
    std::vector<double> mu(m), lap(m), res(m);
    for (int j = 0; j < m; ++j) mu[j] = corrector_mu0(d, grid.node(j));
    apply_laplacian(grid, mu, lap);
    for (int j = 0; j < m; ++j) {
        const double r2 = grid.node(j) * grid.node(j);
        const double source = 0.5 * (d - r2) * (d - r2) * gausson(d, grid.node(j));
        res[j] = -lap[j] + (r2 - d - 2.0) * mu[j] - source;
    }
    return lp_norm(grid, res, 2.0);
}

AubinTalentiIntegrals aubin_talenti_integrals(int d) {
    const double star = sigma_star_or_throw(d, "aubin_talenti_integrals");
    const double a = star * star / (4.0 * (1.0 + star));
    const double center = -0.5 * std::log(a);
    const double c = surface_area(d);
    const double dirichlet = integrate_radial_log(
        [d](double rho) {
            const double g = aubin_talenti_derivative(d, rho);
            return g * g;
        },
        d, center);
    const double power =
        integrate_radial_log([&](double rho) { return std::pow(aubin_talenti(d, rho), 2.0 * star + 2.0); }, d, center);
    return AubinTalentiIntegrals{c * dirichlet, c * power};
}

}  // namespace groundstate
