#ifndef RABIPISTON_PISTON_HPP
#define RABIPISTON_PISTON_HPP

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "rabipiston/errors.hpp"
#include "rabipiston/gpe.hpp"
#include "rabipiston/schedule.hpp"
#include "rabipiston/surface.hpp"

namespace rabipiston {

enum class SimMode { exact, surrogate };

/// Time series of one piston run: position a, velocity v, pressure P (units
/// rho), magnetization S and control angle phi, all sampled every step.
/// Surrogate runs carry no field, so their S column is zero.
struct PistonTrajectory {
    std::vector<double> t, a, v, p, s, phi;
    SimMode mode = SimMode::exact;

    std::size_t size() const { return t.size(); }
    double dt() const {
        if (t.size() < 2) throw ValidationError("trajectory: need at least two samples");
        return t[1] - t[0];
    }
    void push(double ti, double ai, double vi, double pi, double si, double phii) {
        t.push_back(ti);
        a.push_back(ai);
        v.push_back(vi);
        p.push_back(pi);
        s.push_back(si);
        phi.push_back(phii);
    }
    void reserve(std::size_t n) {
        for (auto* col : {&t, &a, &v, &p, &s, &phi}) col->reserve(n);
    }
    void validate() const {
        const std::size_t n = size();
        if (n < 2) throw ValidationError("trajectory: need at least two samples");
        for (auto* col : {&a, &v, &p, &s, &phi})
            if (col->size() != n) throw ValidationError("trajectory: ragged columns");
        const double step = dt();
        for (std::size_t i = 1; i < n; ++i)
            if (std::abs(t[i] - t[i - 1] - step) > 1e-9 * (1 + std::abs(step)))
                throw ValidationError("trajectory: non-uniform time spacing");
    }
};

namespace detail {

inline void check_piston_inside(double a, const SystemParams& p) {
    const double margin = 4.0 * p.slope_s;
    if (!(a > p.x_min + margin) || !(a < p.x_max - margin))
        throw NumericalError("piston left the domain clearance at a=" + std::to_string(a));
}

}  // namespace detail

/// Equilibrium piston position from direct ground-state solves: root of
/// P_st(a, phi) = kappa*a, bracketed by marching from `hint` and polished by
/// bisection. Each evaluation is an imaginary-time solve (warm-started).
inline double equilibrium_position_exact(const SystemParams& params, double phi,
                                         double hint = 1.8, double tol_a = 1e-5,
                                         double gs_tol = 1e-10) {
    Evolver ev(params);
    GroundStateOptions opt;
    opt.tol = gs_tol;
    SpinorField warm(ev.grid());
    bool have_warm = false;
    const WallSpec wall(params);
    auto imbalance = [&](double a) {
        opt.warm_start = have_warm ? &warm : nullptr;
        const auto r = ground_state(ev, a, phi, opt);
        warm = r.field;
        have_warm = true;
        return pressure_exact(r.field, wall, a) - params.spring_k * a;
    };
    double a0 = hint, f0 = imbalance(a0);
    const double dir = f0 > 0 ? 1.0 : -1.0;  // pressure beats spring: move outward
    double step = 0.02;
    double a1 = a0, f1 = f0;
    for (int i = 0; i < 60; ++i) {
        const double cand = a0 + dir * step;
        detail::check_piston_inside(cand, params);
        a1 = cand;
        f1 = imbalance(a1);
        if ((f1 > 0) != (f0 > 0)) break;
        a0 = a1;
        f0 = f1;
        step *= 1.6;
        if (i == 59) throw NumericalError("equilibrium_position_exact: no bracket found");
    }
    double lo = std::min(a0, a1), hi = std::max(a0, a1);
    double flo = a0 < a1 ? f0 : f1;
    while (hi - lo > tol_a) {
        const double mid = 0.5 * (lo + hi);
        const double fm = imbalance(mid);
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

struct ExactSimOptions {
    /// Starting position; NaN finds the equilibrium at phi(0) automatically.
    double a0 = std::numeric_limits<double>::quiet_NaN();
    /// Ground state at (a0, phi(0)); computed when absent. Must match a0.
    const SpinorField* initial_field = nullptr;
    bool record = true;
    double gs_tol = 1e-10;
    /// Dump the field CSV every `snapshot_every` steps into `snapshot_dir`.
    long snapshot_every = 0;
    std::string snapshot_dir;
};

struct ExactSimResult {
    PistonTrajectory trajectory;
    double a0 = 0.0;
    double a_final = 0.0, v_final = 0.0;
};

/// Co-simulation of the piston Newton equation mu*a'' = -kappa*a + P(t) with
/// the live condensate. Velocity-Verlet for the piston interleaves with one
/// split-step of the field per dt; the field sees the step-frozen midpoint
/// piston position, and the force refreshes once per step from the exact
/// pressure of the current field. Adjacent diagonal half-steps of the field
/// map are fused (the sampled observables P, S only need densities, which the
/// diagonal factor preserves).
inline ExactSimResult simulate_exact(const ControlSchedule& schedule, double t_f,
                                     const SystemParams& params,
                                     const ExactSimOptions& opt = {}) {
    if (!(t_f > 0)) throw ValidationError("simulate_exact: t_f must be > 0");
    const long steps = std::max<long>(1, std::llround(t_f / params.dt_real));
    const double dt = t_f / static_cast<double>(steps);
    const double phi0 = schedule.phi(0.0);

    const double a0 = std::isfinite(opt.a0)
                          ? opt.a0
                          : equilibrium_position_exact(params, phi0, 1.8, 1e-5, opt.gs_tol);
    detail::check_piston_inside(a0, params);

    Evolver ev(params);
    if (opt.initial_field) {
        ev.set_field(*opt.initial_field);
        ev.renormalize();
    } else {
        GroundStateOptions gopt;
        gopt.tol = opt.gs_tol;
        ground_state(ev, a0, phi0, gopt);
    }

    ExactSimResult res;
    res.a0 = a0;
    PistonTrajectory& traj = res.trajectory;
    traj.mode = SimMode::exact;
    if (opt.record) traj.reserve(static_cast<std::size_t>(steps) + 1);

    const double kappa = params.spring_k;
    const double inv_mu = 1.0 / params.mass_ratio;
    double a = a0, v = 0.0;
    double pressure = ev.pressure(a);
    if (opt.record) traj.push(0.0, a, v, pressure, ev.magnetization(), phi0);

    bool pending = false;
    double abar_prev = a;
    for (long k = 0; k < steps; ++k) {
        const double force = -kappa * a + pressure;
        const double v_half = v + 0.5 * dt * force * inv_mu;
        const double a_next = a + dt * v_half;
        detail::check_piston_inside(a_next, params);

        const double abar = 0.5 * (a + a_next);
        const double phi_mid = schedule.phi((k + 0.5) * dt);
        if (pending)
            ev.apply_diag_merged(dt, abar_prev, abar);
        else
            ev.apply_diag_half(dt, abar);
        ev.apply_rabi_half(dt, phi_mid, false);
        ev.apply_kinetic(dt, false);
        ev.apply_rabi_half(dt, phi_mid, false);
        pending = true;
        abar_prev = abar;

        pressure = ev.pressure(a_next);
        if (!std::isfinite(pressure))
            throw NumericalError("simulate_exact: pressure became non-finite at step " +
                                 std::to_string(k));
        v = v_half + 0.5 * dt * (-kappa * a_next + pressure) * inv_mu;
        a = a_next;
        const double t_now = (k + 1) * dt;
        if (opt.record) traj.push(t_now, a, v, pressure, ev.magnetization(), schedule.phi(t_now));

        if (opt.snapshot_every > 0 && (k + 1) % opt.snapshot_every == 0) {
            ev.apply_diag_half(dt, abar_prev);  // close the step before exporting
            pending = false;
            char name[64];
            std::snprintf(name, sizeof name, "field_%08ld.csv", k + 1);
            write_field_csv(opt.snapshot_dir + "/" + name, ev.field());
        }
    }
    if (pending) ev.apply_diag_half(dt, abar_prev);
    ev.check_finite("simulate_exact");

    res.a_final = a;
    res.v_final = v;
    return res;
}

struct SurrogateSimOptions {
    double a0 = std::numeric_limits<double>::quiet_NaN();  // NaN: surface equilibrium
    bool record = true;
};

struct SurrogateSimResult {
    PistonTrajectory trajectory;
    double a0 = 0.0;
    double a_final = 0.0, v_final = 0.0;
};

/// Piston-only integration of mu*a'' = -kappa*a + P_st(a, phi(t)) with the
/// tabulated stationary pressure; classic RK4 at the exact-mode step size so
/// the two trajectories share a sampling grid. Queries outside the tabulated
/// surface throw ValidationError.
inline SurrogateSimResult simulate_surrogate(const ControlSchedule& schedule, double t_f,
                                             const SurfaceInterpolator& surf,
                                             const SystemParams& params,
                                             const SurrogateSimOptions& opt = {}) {
    if (!(t_f > 0)) throw ValidationError("simulate_surrogate: t_f must be > 0");
    const long steps = std::max<long>(1, std::llround(t_f / params.dt_real));
    const double dt = t_f / static_cast<double>(steps);
    const double kappa = params.spring_k;
    const double inv_mu = 1.0 / params.mass_ratio;

    const double a0 = std::isfinite(opt.a0)
                          ? opt.a0
                          : equilibrium_position(surf, kappa, schedule.phi(0.0));

    SurrogateSimResult res;
    res.a0 = a0;
    PistonTrajectory& traj = res.trajectory;
    traj.mode = SimMode::surrogate;
    if (opt.record) traj.reserve(static_cast<std::size_t>(steps) + 1);

    auto accel = [&](double t, double a) {
        return (-kappa * a + surf.pressure(a, schedule.phi(t))) * inv_mu;
    };

    double a = a0, v = 0.0;
    if (opt.record) traj.push(0.0, a, v, surf.pressure(a, schedule.phi(0.0)), 0.0, schedule.phi(0.0));
    for (long k = 0; k < steps; ++k) {
        const double t = k * dt;
        const double k1a = v, k1v = accel(t, a);
        const double k2a = v + 0.5 * dt * k1v, k2v = accel(t + 0.5 * dt, a + 0.5 * dt * k1a);
        const double k3a = v + 0.5 * dt * k2v, k3v = accel(t + 0.5 * dt, a + 0.5 * dt * k2a);
        const double k4a = v + dt * k3v, k4v = accel(t + dt, a + dt * k3a);
        a += dt / 6.0 * (k1a + 2 * k2a + 2 * k3a + k4a);
        v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        if (!std::isfinite(a) || !std::isfinite(v))
            throw NumericalError("simulate_surrogate: state became non-finite");
        const double t1 = (k + 1) * dt;
        if (opt.record)
            traj.push(t1, a, v, surf.pressure(a, schedule.phi(t1)), 0.0, schedule.phi(t1));
    }
    res.a_final = a;
    res.v_final = v;
    return res;
}

inline SurrogateSimResult simulate_surrogate(const ControlSchedule& schedule, double t_f,
                                             const StationarySurface& surface,
                                             const SystemParams& params,
                                             const SurrogateSimOptions& opt = {}) {
    SurfaceInterpolator it(surface);
    return simulate_surrogate(schedule, t_f, it, params, opt);
}

/// Trajectory CSV: manifest comments, then `t,a,v,P,S,phi` rows at 12
/// significant digits, one per sample.
inline void write_trajectory_csv(const std::string& path, const PistonTrajectory& traj,
                                 const std::vector<std::string>& header = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write trajectory CSV '" + path + "'");
    for (const auto& h : header) out << h << "\n";
    out << "t,a,v,P,S,phi\n";
    char buf[200];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", traj.t[i],
                      traj.a[i], traj.v[i], traj.p[i], traj.s[i], traj.phi[i]);
        out << buf;
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline PistonTrajectory load_trajectory_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open trajectory CSV '" + path + "'");
    PistonTrajectory traj;
    std::string line;
    bool saw_header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!saw_header) {
            if (t != "t,a,v,P,S,phi")
                throw ValidationError(path + ": unexpected trajectory header '" + t + "'");
            saw_header = true;
            continue;
        }
        double vals[6];
        if (std::sscanf(t.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &vals[0], &vals[1], &vals[2],
                        &vals[3], &vals[4], &vals[5]) != 6)
            throw ValidationError(path + ":" + std::to_string(lineno) + ": malformed row");
        traj.push(vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]);
    }
    traj.validate();
    return traj;
}

}  // namespace rabipiston

#endif
