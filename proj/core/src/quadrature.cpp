#include "groundstate/quadrature.hpp"

#include <cmath>
#include <string>

#include "groundstate/errors.hpp"

namespace groundstate {
namespace {

struct Simpson {
    const std::function<double(double)>& f;
    int max_depth;

    double recurse(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) const {
        const double m = 0.5 * (a + b);
        const double lm = 0.5 * (a + m);
        const double rm = 0.5 * (m + b);
        const double flm = f(lm);
        const double frm = f(rm);
        const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        const double delta = left + right - whole;
        if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
        if (depth >= max_depth) {
            throw IntegrationError("adaptive Simpson: recursion depth exhausted near x = " + std::to_string(m));
        }
        return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
               recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
    }
};

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double tol,
                        int max_depth) {
    if (a == b) return 0.0;
    // Seed on a fixed panel split so narrow features are not skipped by the
    // first five-point estimate.
    constexpr int kPanels = 64;
    const Simpson s{f, max_depth};
    const double width = (b - a) / kPanels;
    double total = 0.0;
    for (int k = 0; k < kPanels; ++k) {
        const double lo = a + k * width;
        const double hi = (k + 1 == kPanels) ? b : lo + width;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += s.recurse(lo, hi, flo, fm, fhi, whole, tol / kPanels, 0);
    }
    if (!std::isfinite(total)) throw IntegrationError("adaptive Simpson: non-finite result");
    return total;
}

double integrate_radial_log(const std::function<double(double)>& f, int d, double center, double tol,
                            double increment_tol) {
    const auto integrand = [&](double t) {
        const double rho = std::exp(t);
        const double v = f(rho);
        return v == 0.0 ? 0.0 : v * std::exp(d * t);
    };
    double half_width = 8.0;
    // Both tolerances are relative to the size of the integrand's mass, taken
    // from a plain composite Simpson sum of |integrand| over the first window.
    constexpr int kPanels = 512;
    const double step = 2.0 * half_width / kPanels;
    double mass = 0.0;
    for (int k = 0; k <= kPanels; ++k) {
        const double weight = (k == 0 || k == kPanels) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
        mass += weight * std::abs(integrand(center - half_width + k * step));
    }
    mass *= step / 3.0;
    if (!(mass > 0.0)) mass = 1.0;
    tol *= mass;
    increment_tol *= mass;
    double previous = adaptive_simpson(integrand, center - half_width, center + half_width, tol);
    constexpr double kMaxHalfWidth = 64.0;
    while (half_width < kMaxHalfWidth) {
        half_width *= 2.0;
        const double current = adaptive_simpson(integrand, center - half_width, center + half_width, tol);
        if (std::abs(current - previous) < increment_tol) return current;
        previous = current;
    }
    throw IntegrationError("integrate_radial_log: tail did not settle within the window cap");
}

}  // namespace groundstate
