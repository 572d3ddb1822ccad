#ifndef RABIPISTON_TRIAL_HPP
#define RABIPISTON_TRIAL_HPP

#include <algorithm>
#include <cmath>
#include <numbers>

#include "rabipiston/errors.hpp"

namespace rabipiston {

/// Closed-form trial model of the condensate in a hard-wall box of length a
/// with a sin(pi x/a) profile shared by both spin components, at phi = 0 and
/// g_c = 0. Used as an analytic oracle; no production path evaluates it.
struct TrialParams {
    double g_s;
    double delta;
    double a;

    void validate() const {
        if (!(g_s > 0)) throw ValidationError("trial: g_s must be > 0");
        if (!(a > 0)) throw ValidationError("trial: a must be > 0");
        if (!(delta >= 0)) throw ValidationError("trial: delta must be >= 0");
    }
};

/// Rabi strength at which the box of length a becomes fully spin-down
/// polarized, delta_cr = 3 g_s / (2a).
inline double trial_critical_delta(const TrialParams& p) {
    p.validate();
    return 1.5 * p.g_s / p.a;
}

/// Box length at which polarization completes for fixed delta.
inline double trial_critical_length(const TrialParams& p) {
    p.validate();
    if (!(p.delta > 0)) throw ValidationError("trial: critical length needs delta > 0");
    return 1.5 * p.g_s / p.delta;
}

/// Equilibrium spin-down fraction n_down = 1/2 + a*delta/(3 g_s), saturating
/// at 1 once a*delta >= (3/2) g_s.
inline double trial_occupation(const TrialParams& p) {
    p.validate();
    return std::min(1.0, 0.5 + p.a * p.delta / (3.0 * p.g_s));
}

/// Minimized trial energy:
///   E(a, 0)              = pi^2/(2a^2) + 3 g_s/(8a)
///   E(a, delta<delta_cr) = E(a, 0) - a delta^2/(6 g_s)
///   E(a, delta>delta_cr) = E(a, 0) + 3 g_s/(8a) - delta/2
/// Continuous across delta_cr.
inline double trial_energy(const TrialParams& p) {
    p.validate();
    const double e0 = 0.5 * std::numbers::pi * std::numbers::pi / (p.a * p.a) +
                      0.375 * p.g_s / p.a;
    if (p.delta < trial_critical_delta(p)) return e0 - p.a * p.delta * p.delta / (6.0 * p.g_s);
    return e0 + 0.375 * p.g_s / p.a - 0.5 * p.delta;
}

/// Rabi-induced stationary pressure shift p(a, delta) = P(a, delta) - P(a, 0),
/// the exact -d/da of the energy branches above: delta^2/(6 g_s) below the
/// critical point, 3 g_s/(8 a^2) beyond it. Continuous at delta_cr.
inline double trial_pressure_shift(const TrialParams& p) {
    p.validate();
    if (p.delta < trial_critical_delta(p)) return p.delta * p.delta / (6.0 * p.g_s);
    return 0.375 * p.g_s / (p.a * p.a);
}

/// Raw two-parameter trial energy before minimizing over the spin-down
/// fraction; exposed for the brute-force minimization oracle.
inline double trial_energy_of_occupation(const TrialParams& p, double n_down) {
    p.validate();
    const double gamma = 1.5 * p.g_s / p.a;
    return 0.5 * std::numbers::pi * std::numbers::pi / (p.a * p.a) + 0.5 * gamma +
           0.5 * p.delta - (gamma + p.delta) * n_down + gamma * n_down * n_down;
}

}  // namespace rabipiston

#endif
