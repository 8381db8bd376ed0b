#include "groundstate/shooting.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "groundstate/closed_forms.hpp"
#include "groundstate/errors.hpp"

namespace groundstate {
namespace {

bool decisive(OutcomeKind k) { return k == OutcomeKind::CrossedZero || k == OutcomeKind::TurnedUp; }

/// RK4 from a two-term Taylor start at r = dr. `accel(r, u, du)` returns u''.
/// A shot below the decay threshold counts as Decayed only while its log-slope
/// stays near that of a genuine tail, -u'/u <= 2 k + (d-1)/r with k the linear
/// decay rate; a trajectory about to cross zero has -u'/u blowing up instead.
/// `algebraic_envelope`, when set, classifies a positive decreasing trajectory
/// that reaches the horizon close to the envelope as Decayed.
template <typename Accel>
ShotOutcome integrate(double u0, double curvature0, double tail_rate, int d, const ShootingConfig& config,
                      Accel accel, const std::function<double(double)>& algebraic_envelope = {}) {
    config.validate();
    ShotOutcome out;
    const double dr = config.dr;
    double r = dr;
    double u = u0 + 0.5 * curvature0 * dr * dr;
    double du = curvature0 * dr;
    const long steps = static_cast<long>(std::ceil((config.r_max - dr) / dr));
    const auto record = [&](long k) {
        if (config.record_stride > 0 && k % config.record_stride == 0) out.trajectory.push_back({r, u, du});
    };
    if (config.record_stride > 0) out.trajectory.push_back({0.0, u0, 0.0});
    record(0);

    for (long k = 1; k <= steps; ++k) {
        const double k1u = du;
        const double k1v = accel(r, u, du);
        const double k2u = du + 0.5 * dr * k1v;
        const double k2v = accel(r + 0.5 * dr, u + 0.5 * dr * k1u, k2u);
        const double k3u = du + 0.5 * dr * k2v;
        const double k3v = accel(r + 0.5 * dr, u + 0.5 * dr * k2u, k3u);
        const double k4u = du + dr * k3v;
        const double k4v = accel(r + dr, u + dr * k3u, k4u);
        const double u_prev = u;
        u += dr / 6.0 * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        du += dr / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
        r += dr;
        record(k);

        if (!std::isfinite(u) || !std::isfinite(du)) {
            out.kind = OutcomeKind::Inconclusive;
            out.radius = r;
            out.diagnostics = "non-finite state at r = " + std::to_string(r);
            return out;
        }
        if (u < 0.0) {
            out.kind = OutcomeKind::CrossedZero;
            out.radius = r - dr * u / (u - u_prev);
            return out;
        }
        if (du > 0.0) {
            out.kind = OutcomeKind::TurnedUp;
            out.radius = r;
            return out;
        }
        if (u < config.decay_threshold && -du <= (2.0 * tail_rate + (d - 1.0) / r) * u) {
            out.kind = OutcomeKind::Decayed;
            out.radius = r;
            return out;
        }
    }
    out.radius = r;
    if (algebraic_envelope) {
        const double env = algebraic_envelope(r);
        if (u > 0.0 && du <= 0.0 && std::abs(u / env - 1.0) < 0.1) {
            out.kind = OutcomeKind::Decayed;
            out.diagnostics = "tracks the algebraic envelope up to the horizon";
            return out;
        }
    }
    out.kind = OutcomeKind::Inconclusive;
    out.diagnostics = "horizon reached without a classifying event";
    return out;
}

struct Bracket {
    double lo;
    double hi;
    ShotOutcome lo_shot;
    ShotOutcome hi_shot;
};

template <typename Shoot>
ShootingResult bisect(Bracket b, const ShootingConfig& config, Shoot shoot, const BracketObserver& observer) {
    ShootingResult res;
    int steps = 0;
    std::optional<double> exact;
    while (b.hi - b.lo > config.bisection_tol * std::abs(b.hi)) {
        if (observer) observer({b.lo, b.hi, b.lo_shot.kind, b.hi_shot.kind});
        const double mid = 0.5 * (b.lo + b.hi);
        if (mid <= b.lo || mid >= b.hi) break;
        ShotOutcome s = shoot(mid);
        ++steps;
        if (s.kind == b.lo_shot.kind) {
            b.lo = mid;
            b.lo_shot = std::move(s);
        } else if (s.kind == b.hi_shot.kind) {
            b.hi = mid;
            b.hi_shot = std::move(s);
        } else {
            // Decayed, or undecidable within the horizon: the parameter is resolved
            // as far as this configuration can tell.
            exact = mid;
            break;
        }
    }
    res.lo = b.lo;
    res.hi = b.hi;
    res.lo_kind = b.lo_shot.kind;
    res.hi_kind = b.hi_shot.kind;
    res.value = exact.value_or(0.5 * (b.lo + b.hi));
    res.confidence_radius = std::min(b.lo_shot.radius, b.hi_shot.radius);
    res.bisection_steps = steps;
    return res;
}

template <typename Shoot>
std::optional<Bracket> scan(const std::vector<double>& candidates, Shoot shoot) {
    std::optional<std::pair<double, ShotOutcome>> last;
    for (double p : candidates) {
        ShotOutcome s = shoot(p);
        if (!decisive(s.kind)) continue;
        if (last && last->second.kind != s.kind) {
            const double a = last->first;
            if (a < p) return Bracket{a, p, std::move(last->second), std::move(s)};
            return Bracket{p, a, std::move(s), std::move(last->second)};
        }
        last.emplace(p, std::move(s));
    }
    return std::nullopt;
}

}  // namespace

const char* to_string(OutcomeKind kind) noexcept {
    switch (kind) {
        case OutcomeKind::CrossedZero: return "CrossedZero";
        case OutcomeKind::TurnedUp: return "TurnedUp";
        case OutcomeKind::Decayed: return "Decayed";
        case OutcomeKind::Inconclusive: return "Inconclusive";
    }
    return "?";
}

void ShootingConfig::validate() const {
    if (!(dr > 0.0)) throw InvalidConfiguration("shooting: dr must be positive");
    if (!(r_max > dr)) throw InvalidConfiguration("shooting: r_max must exceed dr");
    if (r_max / dr > 1e8) throw InvalidConfiguration("shooting: r_max / dr exceeds 1e8 steps");
    if (!(bisection_tol > 0.0)) throw InvalidConfiguration("shooting: bisection_tol must be positive");
}

ShotOutcome integrate_ivp_u(double alpha, double sigma, int d, const ShootingConfig& config) {
    if (!(alpha > 0.0) || !(sigma > 0.0)) throw DomainError("integrate_ivp_u: alpha and sigma must be positive");
    const double two_sigma = 2.0 * sigma;
    const double inv_sigma = 1.0 / sigma;
    const double bend = d - 1.0;
    const double curvature0 = -(std::pow(alpha, two_sigma) - 1.0) * alpha / (sigma * d);
    return integrate(alpha, curvature0, std::sqrt(inv_sigma), d, config, [=](double r, double u, double du) {
        return -bend * du / r - (std::pow(std::abs(u), two_sigma) - 1.0) * u * inv_sigma;
    });
}

ShotOutcome integrate_ivp_w(double eps, double sigma, int d, const ShootingConfig& config) {
    if (d < 3) throw DomainError("integrate_ivp_w: requires d >= 3");
    if (!(eps >= 0.0) || !(sigma > 0.0)) throw DomainError("integrate_ivp_w: need eps >= 0 and sigma > 0");
    const double two_sigma = 2.0 * sigma;
    const double bend = d - 1.0;
    const double curvature0 = (eps - 1.0) / d;
    std::function<double(double)> envelope;
    if (eps == 0.0) envelope = [d](double rho) { return aubin_talenti(d, rho); };
    return integrate(
        1.0, curvature0, std::sqrt(eps), d, config,
        [=](double r, double w, double dw) {
            return -bend * dw / r - std::pow(std::abs(w), two_sigma) * w + eps * w;
        },
        envelope);
}

ShootingResult find_alpha_detailed(double sigma, int d, const ShootingConfig& config, const BracketObserver& observer) {
    require_subcritical(d, sigma);
    const auto shoot = [&](double a) { return integrate_ivp_u(a, sigma, d, config); };

    // Geometric scan away from alpha = 1.5 in both directions (alpha > 1 is
    // forced by u''(0) < 0).
    std::vector<double> up{1.5};
    for (int k = 0; k < 60 && up.back() < 1e8; ++k) up.push_back(up.back() * 1.5);
    std::vector<double> down{1.5};
    for (int k = 0; k < 60; ++k) down.push_back(1.0 + (down.back() - 1.0) / 1.5);
    // Seed the downward pass from above so a root sitting exactly at 1.5 is bracketed.
    down.insert(down.begin(), up[1]);

    auto bracket = scan(up, shoot);
    if (!bracket) bracket = scan(down, shoot);
    if (!bracket) {
        throw NoBracket("find_alpha: no change of outcome class found (sigma = " + std::to_string(sigma) +
                        ", d = " + std::to_string(d) + ")");
    }
    return bisect(std::move(*bracket), config, shoot, observer);
}

double find_alpha(double sigma, int d, const ShootingConfig& config) {
    return find_alpha_detailed(sigma, d, config).value;
}

ShootingResult find_epsilon_detailed(double sigma, int d, const ShootingConfig& config,
                                     const BracketObserver& observer) {
    if (d < 3) throw DomainError("find_epsilon: requires d >= 3");
    require_subcritical(d, sigma);
    const auto shoot = [&](double e) { return integrate_ivp_w(e, sigma, d, config); };
    const double upper = eps_upper_bound(d, sigma);

    std::vector<double> candidates{upper};
    for (int k = 1; k <= 40; ++k) candidates.push_back(upper * std::pow(0.5, k));
    auto bracket = scan(candidates, shoot);
    if (!bracket) {
        throw NoBracket("find_epsilon: no change of outcome class in (0, " + std::to_string(upper) + "]");
    }
    return bisect(std::move(*bracket), config, shoot, observer);
}

double find_epsilon(double sigma, int d, const ShootingConfig& config) {
    return find_epsilon_detailed(sigma, d, config).value;
}

}  // namespace groundstate
