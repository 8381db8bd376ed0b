#pragma once

// Shooting oracle: classical RK4 on the radial initial-value problems
//   u'' + (d-1)/r u' + (|u|^{2 sigma} - 1) u / sigma = 0,   u(0) = alpha, u'(0) = 0
//   w'' + (d-1)/rho w' + |w|^{2 sigma} w = eps w,          w(0) = 1,     w'(0) = 0
// with bisection on the free parameter between trajectories that cross zero
// and trajectories that turn back up.

#include <functional>
#include <string>
#include <vector>

namespace groundstate {

enum class OutcomeKind { CrossedZero, TurnedUp, Decayed, Inconclusive };

const char* to_string(OutcomeKind kind) noexcept;

struct TrajectorySample {
    double r;
    double u;
    double du;
};

struct ShotOutcome {
    OutcomeKind kind = OutcomeKind::Inconclusive;
    /// Radius of the classifying event (or the horizon reached).
    double radius = 0.0;
    /// Filled when ShootingConfig::record_stride > 0.
    std::vector<TrajectorySample> trajectory;
    std::string diagnostics;
};

struct ShootingConfig {
    double dr = 1e-4;
    double r_max = 30.0;
    /// Below this value, with u' < 0 and a tail-like log-slope, the shot counts as Decayed.
    double decay_threshold = 1e-8;
    /// Relative parameter tolerance of the bisection.
    double bisection_tol = 1e-13;
    /// Keep every k-th RK4 node in the outcome (0 = no trajectory).
    int record_stride = 0;

    void validate() const;

    /// dr = 1e-4, r_max = 30.
    static ShootingConfig for_u() { return {}; }
    /// dr = 1e-4, r_max = 200 (slow algebraic-exponential tails near sigma*).
    static ShootingConfig for_w() {
        ShootingConfig c;
        c.r_max = 200.0;
        return c;
    }
};

ShotOutcome integrate_ivp_u(double alpha, double sigma, int d, const ShootingConfig& config);
ShotOutcome integrate_ivp_w(double eps, double sigma, int d, const ShootingConfig& config);

/// One bisection step: the current bracket and the classes at its ends.
struct BracketStep {
    double lo;
    double hi;
    OutcomeKind lo_kind;
    OutcomeKind hi_kind;
};

struct ShootingResult {
    double value = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    OutcomeKind lo_kind = OutcomeKind::Inconclusive;
    OutcomeKind hi_kind = OutcomeKind::Inconclusive;
    /// Smallest event radius at the final bracket ends: how far out the two
    /// trajectories still shadow the ground state.
    double confidence_radius = 0.0;
    int bisection_steps = 0;
};

using BracketObserver = std::function<void(const BracketStep&)>;

/// Ground-state amplitude alpha(sigma). The bracket is located by a geometric
/// scan from alpha = 1.5 and its orientation is detected from the outcomes.
/// Throws NoBracket when the scan finds no change of outcome class.
ShootingResult find_alpha_detailed(double sigma, int d, const ShootingConfig& config,
                                   const BracketObserver& observer = {});
double find_alpha(double sigma, int d, const ShootingConfig& config);

/// eps(sigma) for d >= 3, bracketed in (0, (sigma* - sigma) / (sigma* (1 + sigma))].
ShootingResult find_epsilon_detailed(double sigma, int d, const ShootingConfig& config,
                                     const BracketObserver& observer = {});
double find_epsilon(double sigma, int d, const ShootingConfig& config);

}  // namespace groundstate
