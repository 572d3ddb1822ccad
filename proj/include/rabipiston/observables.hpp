#ifndef RABIPISTON_OBSERVABLES_HPP
#define RABIPISTON_OBSERVABLES_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "rabipiston/gpe.hpp"
#include "rabipiston/piston.hpp"
#include "rabipiston/pressure.hpp"
#include "rabipiston/surface.hpp"

namespace rabipiston {

/// Ground-state pressure and energy at frozen (a, phi). The pressure comes
/// from the exact barrier-derivative integral on the converged state; the
/// thermodynamic identity P_st = -dE_gs/da is a test-time cross-check, not
/// the evaluation path.
inline std::pair<double, double> pressure_stationary(double a, double phi,
                                                     const SystemParams& params,
                                                     double tol = 1e-10) {
    GroundStateOptions opt;
    opt.tol = tol;
    const auto r = ground_state(a, phi, params, opt);
    return {pressure_exact(r.field, WallSpec(params), a), r.energy};
}

/// Work decomposition of one completed run:
///   w_p      total piston work          int da/dt P dt
///   w_p_st   stationary contribution    int da/dt P_st(a, phi) dt
///   dw_p     non-stationary remainder   w_p - w_p_st
///   e_st     stationary energy change   E_gs(end) - E_gs(start)
///   w_phi_st control work               int dphi/dt dE_gs/dphi dt
/// The identity w_phi_st = w_p + e_st - dw_p closes up to quadrature and
/// interpolation error; closure_residual reports the defect.
struct WorkLedger {
    double w_p = 0.0;
    double w_p_st = 0.0;
    double dw_p = 0.0;
    double e_st = 0.0;
    double w_phi_st = 0.0;

    double closure_residual() const { return std::abs(w_phi_st - (w_p + e_st - dw_p)); }
};

inline WorkLedger work_report(const PistonTrajectory& traj, const SurfaceInterpolator& surf) {
    traj.validate();
    const std::size_t n = traj.size();
    const double dt = traj.dt();

    std::vector<double> wp_term(n), wpst_term(n), wphi_term(n);
    for (std::size_t i = 0; i < n; ++i) {
        double p_st, de_dphi;
        try {
            p_st = surf.pressure(traj.a[i], traj.phi[i]);
            de_dphi = surf.denergy_dphi(traj.a[i], traj.phi[i]);
        } catch (const ValidationError& e) {
            throw ValidationError("work_report: trajectory sample " + std::to_string(i) + " (t=" +
                                  std::to_string(traj.t[i]) + ") leaves the surface: " + e.what());
        }
        // phi rate by centered differences on the sampled schedule
        double phi_dot;
        if (i == 0)
            phi_dot = (traj.phi[1] - traj.phi[0]) / dt;
        else if (i + 1 == n)
            phi_dot = (traj.phi[n - 1] - traj.phi[n - 2]) / dt;
        else
            phi_dot = (traj.phi[i + 1] - traj.phi[i - 1]) / (2.0 * dt);
        wp_term[i] = traj.v[i] * traj.p[i];
        wpst_term[i] = traj.v[i] * p_st;
        wphi_term[i] = phi_dot * de_dphi;
    }
    auto trapezoid = [&](const std::vector<double>& f) {
        double acc = 0.5 * (f.front() + f.back());
        for (std::size_t i = 1; i + 1 < n; ++i) acc += f[i];
        return acc * dt;
    };

    WorkLedger ledger;
    ledger.w_p = trapezoid(wp_term);
    ledger.w_p_st = trapezoid(wpst_term);
    ledger.dw_p = ledger.w_p - ledger.w_p_st;
    ledger.e_st = surf.energy(traj.a.back(), traj.phi.back()) -
                  surf.energy(traj.a.front(), traj.phi.front());
    ledger.w_phi_st = trapezoid(wphi_term);
    return ledger;
}

inline WorkLedger work_report(const PistonTrajectory& traj, const StationarySurface& surface) {
    SurfaceInterpolator it(surface);
    return work_report(traj, it);
}

}  // namespace rabipiston

#endif
