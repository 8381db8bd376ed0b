#pragma once

// Spectral and identity-based checks on computed ground states.

#include <span>
#include <vector>

#include "groundstate/grid.hpp"
#include "groundstate/shooting.hpp"

namespace groundstate {

/// Discretized L_sigma = -Delta + (1 - u^{2 sigma})/sigma - 2 u^{2 sigma} with the
/// profile it was built from. `sigma` is 0 for the harmonic-oscillator limit.
struct LinearizedOperator {
    TridiagonalOperator base;
    double sigma;
    int d;
    RadialProfile u;
};

/// Throws DomainError on non-positive samples or sigma <= 0.
LinearizedOperator assemble_linearized(const RadialProfile& u, double sigma, int d);

/// sigma -> 0 limit L_0 = -Delta + r^2 - d - 2 on `grid` (u holds the Gausson).
LinearizedOperator harmonic_oscillator(const StaggeredGrid& grid);

/// max_j |w_j A_{j,j+1} - w_{j+1} A_{j+1,j}| / max_j |w_j A_{jj}|: zero for an
/// operator symmetric in the weighted inner product.
double symmetry_defect(const TridiagonalOperator& a, const StaggeredGrid& grid);

struct SpectralReport {
    /// Ascending.
    std::vector<double> lowest_eigenvalues;
    /// ||A x - lambda x|| / ||x|| per eigenpair, in the symmetrized basis.
    std::vector<double> residuals;
    /// Number of negative eigenvalues of the whole operator.
    int morse_index = 0;
    /// min |lambda| over the computed eigenvalues.
    double kernel_gap = 0.0;
};

/// Number of eigenvalues strictly below x (Sturm sequence of the symmetrized matrix).
int count_eigenvalues_below(const TridiagonalOperator& a, double x);

/// k smallest eigenvalues by shifted inverse iteration with deflation. Shifts come
/// from Sturm-sequence bisection. Throws SpectralFailure when an eigenpair does
/// not settle and InvalidConfiguration when k is out of range.
SpectralReport lowest_eigenvalues(const TridiagonalOperator& a, int k);
SpectralReport lowest_eigenvalues(const LinearizedOperator& op, int k);

struct ChiSolution {
    RadialProfile chi;
    /// chi(0), which is alpha'(sigma).
    double alpha_prime;
};

/// Solves L_sigma chi = (1 - u^{2 sigma}) u / sigma^2 + (ln u^2) u^{2 sigma + 1} / sigma.
/// Throws ConditioningError when L_sigma is numerically singular.
ChiSolution solve_chi(const RadialProfile& u, double sigma, int d);

struct PohozaevResiduals {
    double res1 = 0.0;
    double res2 = 0.0;
    /// (sigma* - sigma) ||w'||^2 / (sigma (1 + sigma*) ||w||^2).
    double eps_check = 0.0;
};

/// Relative defects of
///   kappa ||w||^{2s+2}_{2s+2}        = eps ||w||^2 + ||w'||^2
///   d kappa ||w||^{2s+2}_{2s+2}/(1+s) = d eps ||w||^2 + (d - 2) ||w'||^2
/// with kappa = 1 for Delta w + kappa w^{2s+1} = eps w. w == 0 gives zeros.
/// Requires d >= 3.
PohozaevResiduals pohozaev_residuals(const RadialProfile& w, double sigma, double eps, int d);

/// Same identities by trapezoidal quadrature of a recorded shot on [0, cutoff].
/// Use kappa = eps = 1/sigma for the u-equation. Any d >= 1; eps_check is 0 for d <= 2.
PohozaevResiduals pohozaev_residuals(std::span<const TrajectorySample> trajectory, double sigma, double eps, int d,
                                     double cutoff, double kappa = 1.0);

/// <v, (ln w*^2) w*^{1+2 sigma*}> / <v, w*> for d >= 5.
double fredholm_ratio(int d);

/// ||L_0 mu_0 - (d - r^2)^2 e^{(d - r^2)/2} / 2||_{L^2_r} on grid samples of the
/// closed-form corrector.
double mu0_residual(int d, const StaggeredGrid& grid);

struct AubinTalentiIntegrals {
    /// ||w*'||^2
    double dirichlet;
    /// ||w*||^{2 sigma* + 2}_{2 sigma* + 2}
    double power;
};

/// Both sides of the critical Pohozaev identity by quadrature, d >= 3.
AubinTalentiIntegrals aubin_talenti_integrals(int d);

}  // namespace groundstate
