#pragma once

#include <functional>

namespace groundstate {

/// Adaptive Simpson on [a, b] to absolute tolerance `tol`.
/// Throws IntegrationError when the recursion depth is exhausted.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth = 50);

/// \int_0^\infty f(rho) rho^{d-1} d rho via t = ln rho, which turns algebraic
/// tails into exponential ones. The window [center - T, center + T] doubles
/// until the integral changes by less than `increment_tol`. Both tolerances are
/// relative to the integral of |f| rho^{d-1} over the first window.
double integrate_radial_log(const std::function<double(double)>& f, int d, double center,
                            double tol = 1e-14, double increment_tol = 1e-12);

}  // namespace groundstate
