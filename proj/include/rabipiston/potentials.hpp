#ifndef RABIPISTON_POTENTIALS_HPP
#define RABIPISTON_POTENTIALS_HPP

#include <cmath>
#include <numbers>

#include "rabipiston/errors.hpp"
#include "rabipiston/params.hpp"

namespace rabipiston {

/// Geometry of the confining walls: a high smooth step on the left of the
/// origin and a lower smooth step riding with the piston. Both ramps rise or
/// fall over [-s, s] around their center.
struct WallSpec {
    double v_left;
    double v_piston;
    double slope_s;

    WallSpec(double vl, double vp, double s) : v_left(vl), v_piston(vp), slope_s(s) {
        if (!(vp > 0)) throw ValidationError("wall: v_piston must be > 0");
        if (!(vl > vp)) throw ValidationError("wall: v_left must exceed v_piston");
        if (!(s > 0)) throw ValidationError("wall: slope_s must be > 0");
    }
    explicit WallSpec(const SystemParams& p) : WallSpec(p.v_left, p.v_piston, p.slope_s) {}
};

/// Left wall V_L(x): the full height for x < -s, zero for x > s, half-sine
/// ramp in between. Continuous and nonincreasing.
inline double left_wall(double x, const WallSpec& w) {
    const double s = w.slope_s;
    if (x <= -s) return w.v_left;
    if (x >= s) return 0.0;
    return 0.5 * w.v_left * (1.0 - std::sin(0.5 * std::numbers::pi * x / s));
}

/// Piston barrier V(z) as a function of the offset z = x - a: zero left of the
/// ramp, the full height beyond it. Continuous and nondecreasing.
inline double piston_barrier(double z, const WallSpec& w) {
    const double s = w.slope_s;
    if (z <= -s) return 0.0;
    if (z >= s) return w.v_piston;
    return 0.5 * w.v_piston * (1.0 + std::sin(0.5 * std::numbers::pi * z / s));
}

/// Analytic dV/dz of the piston barrier; supported on [-s, s], nonnegative,
/// integrates to v_piston. This is the weight of the pressure integral, kept
/// analytic so piston forces stay smooth in the barrier position.
inline double piston_barrier_deriv(double z, const WallSpec& w) {
    const double s = w.slope_s;
    if (z <= -s || z >= s) return 0.0;
    return w.v_piston * (0.25 * std::numbers::pi / s) * std::cos(0.5 * std::numbers::pi * z / s);
}

}  // namespace rabipiston

#endif
