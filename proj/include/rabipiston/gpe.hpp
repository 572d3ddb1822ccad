#ifndef RABIPISTON_GPE_HPP
#define RABIPISTON_GPE_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "rabipiston/errors.hpp"
#include "rabipiston/fastmath.hpp"
#include "rabipiston/fft.hpp"
#include "rabipiston/grid.hpp"
#include "rabipiston/params.hpp"
#include "rabipiston/potentials.hpp"
#include "rabipiston/pressure.hpp"
#include "rabipiston/spinor.hpp"

namespace rabipiston {

struct GroundStateResult {
    SpinorField field;
    double energy = 0.0;
    long iterations = 0;
    double residual = 0.0;  // |energy change| over the last check interval
};

struct GroundStateOptions {
    double tol = 1e-10;            // energy change per check interval, eps
    long max_iters = 2'000'000;
    int check_interval = 100;
    double dt = 0.0;               // 0 selects params.dt_imag
    const SpinorField* warm_start = nullptr;
};

/// Split-step evolver for the coupled Gross-Pitaevskii equations with a
/// Rabi term of strength delta and in-plane angle phi:
///
///   i d/dt psi_up   = [-1/2 d^2/dx^2 + V_L + V(x-a) + g_s|up|^2 + g_c|dn|^2] up
///                     + (delta/2)(cos phi) up - i (delta/2)(sin phi) dn
///   i d/dt psi_down = [-1/2 d^2/dx^2 + V_L + V(x-a) + g_s|dn|^2 + g_c|up|^2] dn
///                     - (delta/2)(cos phi) dn + i (delta/2)(sin phi) up
///
/// One step is the palindromic composition  D(dt/2) R(dt/2) K(dt) R(dt/2) D(dt/2)
/// with D the diagonal potential+nonlinear phase, R the closed-form 2x2 Rabi
/// rotation (position independent), and K the spectral kinetic factor. Every
/// factor in real time is exactly unitary. The same factors with decaying
/// exponentials plus per-step renormalization drive the imaginary-time
/// ground-state search.
///
/// The field lives in FFT-aligned buffers owned by the evolver; SpinorField
/// snapshots are copied in/out at the boundaries. The low-level apply_*
/// methods are exposed so the piston co-simulation can fuse the adjacent
/// diagonal half steps of consecutive steps (the diagonal factors commute and
/// preserve the densities they are built from).
class Evolver {
  public:
    explicit Evolver(const SystemParams& p)
        : params_(p), grid_(p), wall_(p), up_(p.n_points), dn_(p.n_points),
          scratch_(p.n_points), vl_(p.n_points), x_(p.n_points) {
        p.validate();
        for (int j = 0; j < grid_.n(); ++j) {
            x_[j] = grid_.x(j);
            vl_[j] = left_wall(x_[j], wall_);
        }
    }

    const Grid& grid() const { return grid_; }
    const SystemParams& params() const { return params_; }
    double time() const { return time_; }
    void set_time(double t) { time_ = t; }

    void set_field(const SpinorField& f) {
        if (!(f.grid == grid_)) throw ValidationError("set_field: grid mismatch");
        std::copy(f.up.begin(), f.up.end(), up_.data());
        std::copy(f.down.begin(), f.down.end(), dn_.data());
    }

    SpinorField field() const {
        SpinorField f(grid_);
        std::copy(up_.data(), up_.data() + grid_.n(), f.up.begin());
        std::copy(dn_.data(), dn_.data() + grid_.n(), f.down.begin());
        return f;
    }

    double norm() const {
        double s = 0.0;
        const auto* u = up_.data();
        const auto* d = dn_.data();
        for (int j = 0; j < grid_.n(); ++j) s += std::norm(u[j]) + std::norm(d[j]);
        return s * grid_.dx();
    }

    double magnetization() const {
        double s = 0.0;
        const auto* u = up_.data();
        const auto* d = dn_.data();
        for (int j = 0; j < grid_.n(); ++j) s += std::norm(u[j]) - std::norm(d[j]);
        return s * grid_.dx();
    }

    double boundary_density() const {
        const int m = grid_.n() - 1;
        return std::norm(up_.data()[0]) + std::norm(dn_.data()[0]) +
               std::norm(up_.data()[m]) + std::norm(dn_.data()[m]);
    }

    double pressure(double a) const {
        return detail::pressure_core(up_.data(), dn_.data(), grid_, wall_, a);
    }

    /// One real-time step with the piston frozen at a and angle phi.
    void step_real(double dt, double a, double phi) {
        apply_diag_half(dt, a);
        apply_rabi_half(dt, phi, false);
        apply_kinetic(dt, false);
        apply_rabi_half(dt, phi, false);
        apply_diag_half(dt, a);
        time_ += dt;
        check_finite("step_real");
    }

    /// One imaginary-time step (same splitting with decaying factors),
    /// followed by norm restoration.
    void step_imag(double dtau, double a, double phi) {
        apply_diag_half_imag(dtau, a);
        apply_rabi_half(dtau, phi, true);
        apply_kinetic(dtau, true);
        apply_rabi_half(dtau, phi, true);
        apply_diag_half_imag(dtau, a);
        renormalize();
    }

    /// Energy functional of the current field at (a, phi); kinetic term
    /// evaluated spectrally. Units eps.
    double energy(double a, double phi) const {
        const int n = grid_.n();
        const double dx = grid_.dx();
        // kinetic via scratch transform, one component at a time
        double kin = 0.0;
        for (const auto* src : {up_.data(), dn_.data()}) {
            std::copy(src, src + n, scratch_.data());
            scratch_.forward();
            const auto* hat = scratch_.data();
            double acc = 0.0;
            for (int j = 0; j < n; ++j) {
                const double k = grid_.k(j);
                acc += k * k * std::norm(hat[j]);
            }
            kin += acc;
        }
        kin *= 0.5 * dx / n;

        const double cphi = std::cos(phi), sphi = std::sin(phi);
        const auto* u = up_.data();
        const auto* d = dn_.data();
        double pot = 0.0;
        for (int j = 0; j < n; ++j) {
            const double nu = std::norm(u[j]);
            const double nd = std::norm(d[j]);
            const double v = vl_[j] + piston_barrier(x_[j] - a, wall_);
            const double im_ud = std::imag(std::conj(u[j]) * d[j]);
            pot += v * (nu + nd) +
                   0.5 * params_.delta * (cphi * (nu - nd) + 2.0 * sphi * im_ud) +
                   0.5 * params_.g_s * (nu * nu + nd * nd) + params_.g_c * nu * nd;
        }
        return kin + pot * dx;
    }

    void renormalize() {
        const double nrm = norm();
        if (!(nrm > 0.0)) throw NumericalError("evolver: field norm vanished or went non-finite");
        const double sc = 1.0 / std::sqrt(nrm);
        auto* u = up_.data();
        auto* d = dn_.data();
        for (int j = 0; j < grid_.n(); ++j) {
            u[j] *= sc;
            d[j] *= sc;
        }
    }

    // --- low-level stepping interface -------------------------------------

    /// Diagonal (potential + nonlinear) phase for half a step of size dt.
    void apply_diag_half(double dt, double a) { diag_phase(0.5 * dt, a, a); }

    /// Fused closing+opening diagonal halves of consecutive steps with piston
    /// positions a1 and a2. Valid because the diagonal factor leaves the
    /// densities it is built from unchanged. Spans two half steps, hence the
    /// full dt coefficient.
    void apply_diag_merged(double dt, double a1, double a2) { diag_phase(dt, a1, a2); }

    /// Closed-form Rabi rotation exp(-i (delta/2)(sin phi sigma_y + cos phi
    /// sigma_z) dt/2), or its decaying counterpart in imaginary time.
    void apply_rabi_half(double dt, double phi, bool imag_time) {
        const double theta = 0.25 * params_.delta * dt;
        const double cphi = std::cos(phi), sphi = std::sin(phi);
        auto* u = up_.data();
        auto* d = dn_.data();
        const int n = grid_.n();
        if (!imag_time) {
            const double c = std::cos(theta), s = std::sin(theta);
            const Complex u11(c, -s * cphi);
            const Complex u22(c, s * cphi);
            const double u12 = -s * sphi;
            const double u21 = s * sphi;
            for (int j = 0; j < n; ++j) {
                const Complex a0 = u[j], b0 = d[j];
                u[j] = u11 * a0 + u12 * b0;
                d[j] = u21 * a0 + u22 * b0;
            }
        } else {
            const double ch = std::cosh(theta), sh = std::sinh(theta);
            const double m11 = ch - sh * cphi;
            const double m22 = ch + sh * cphi;
            const Complex m12(0.0, sh * sphi);
            const Complex m21(0.0, -sh * sphi);
            for (int j = 0; j < n; ++j) {
                const Complex a0 = u[j], b0 = d[j];
                u[j] = m11 * a0 + m12 * b0;
                d[j] = m21 * a0 + m22 * b0;
            }
        }
    }

    /// Full kinetic factor in spectral space (1/n folded into the tables).
    void apply_kinetic(double dt, bool imag_time) {
        const int n = grid_.n();
        if (!imag_time) {
            ensure_kin_real(dt);
            for (auto* f : {&up_, &dn_}) {
                f->forward();
                auto* v = f->data();
                for (int j = 0; j < n; ++j) v[j] *= kin_real_[j];
                f->backward();
            }
        } else {
            ensure_kin_imag(dt);
            for (auto* f : {&up_, &dn_}) {
                f->forward();
                auto* v = f->data();
                for (int j = 0; j < n; ++j) v[j] *= kin_imag_[j];
                f->backward();
            }
        }
    }

    void check_finite(const char* where) const {
        if (!std::isfinite(up_.data()[0].real()) || !std::isfinite(dn_.data()[0].real()))
            throw NumericalError(std::string(where) +
                                 ": field became non-finite (step too large or boundary leak)");
    }

  private:
    /// Multiplies both components by the diagonal phase/decay
    /// exp(-i c [V_L + (V(x-a1)+V(x-a2))/2 + G_jj]) per grid point. a1 == a2
    /// reproduces the plain half step.
    void diag_phase(double c, double a1, double a2) {
        const int n = grid_.n();
        const double gs = params_.g_s, gc = params_.g_c;
        auto* u = up_.data();
        auto* d = dn_.data();
        // indices whose barrier value differs between plateaus
        const double s = wall_.slope_s;
        const double lo_x = std::min(a1, a2) - s;
        const double hi_x = std::max(a1, a2) + s;
        const double jlo_d = std::ceil((lo_x - grid_.x_min()) / grid_.dx());
        const double jhi_d = std::floor((hi_x - grid_.x_min()) / grid_.dx());
        const int jlo = jlo_d < 0 ? 0 : (jlo_d > n ? n : static_cast<int>(jlo_d));
        const int jhi = jhi_d < jlo ? jlo - 1 : (jhi_d > n - 1 ? n - 1 : static_cast<int>(jhi_d));
        auto phase_at = [&](int j, double vp) {
            const double nu = std::norm(u[j]);
            const double nd = std::norm(d[j]);
            const double base = vl_[j] + vp;
            u[j] *= detail::cis_neg(c * (base + gs * nu + gc * nd));
            d[j] *= detail::cis_neg(c * (base + gs * nd + gc * nu));
        };
        for (int j = 0; j < jlo; ++j) phase_at(j, 0.0);
        for (int j = jlo; j <= jhi; ++j)
            phase_at(j, 0.5 * (piston_barrier(x_[j] - a1, wall_) +
                               piston_barrier(x_[j] - a2, wall_)));
        for (int j = jhi + 1; j < n; ++j) phase_at(j, wall_.v_piston);
    }

    void diag_phase_imag(double c, double a) {
        const int n = grid_.n();
        const double gs = params_.g_s, gc = params_.g_c;
        auto* u = up_.data();
        auto* d = dn_.data();
        const double s = wall_.slope_s;
        int jlo = static_cast<int>(std::ceil((a - s - grid_.x_min()) / grid_.dx()));
        int jhi = static_cast<int>(std::floor((a + s - grid_.x_min()) / grid_.dx()));
        if (jlo < 0) jlo = 0;
        if (jhi > n - 1) jhi = n - 1;
        auto decay_at = [&](int j, double vp) {
            const double nu = std::norm(u[j]);
            const double nd = std::norm(d[j]);
            const double base = vl_[j] + vp;
            u[j] *= detail::exp_neg(c * (base + gs * nu + gc * nd));
            d[j] *= detail::exp_neg(c * (base + gs * nd + gc * nu));
        };
        for (int j = 0; j < jlo; ++j) decay_at(j, 0.0);
        for (int j = jlo; j <= jhi; ++j) decay_at(j, piston_barrier(x_[j] - a, wall_));
        for (int j = jhi + 1; j < n; ++j) decay_at(j, wall_.v_piston);
    }

    void apply_diag_half_imag(double dtau, double a) { diag_phase_imag(0.5 * dtau, a); }

    void ensure_kin_real(double dt) {
        if (dt == kin_real_dt_ && !kin_real_.empty()) return;
        const int n = grid_.n();
        kin_real_.resize(n);
        for (int j = 0; j < n; ++j) {
            const double k = grid_.k(j);
            const double th = 0.5 * k * k * dt;
            kin_real_[j] = Complex(std::cos(th), -std::sin(th)) / static_cast<double>(n);
        }
        kin_real_dt_ = dt;
    }

    void ensure_kin_imag(double dt) {
        if (dt == kin_imag_dt_ && !kin_imag_.empty()) return;
        const int n = grid_.n();
        kin_imag_.resize(n);
        for (int j = 0; j < n; ++j) {
            const double k = grid_.k(j);
            kin_imag_[j] = std::exp(-0.5 * k * k * dt) / n;
        }
        kin_imag_dt_ = dt;
    }

    SystemParams params_;
    Grid grid_;
    WallSpec wall_;
    detail::Fft1D up_, dn_;
    mutable detail::Fft1D scratch_;
    std::vector<double> vl_, x_;
    std::vector<Complex> kin_real_;
    std::vector<double> kin_imag_;
    double kin_real_dt_ = std::numeric_limits<double>::quiet_NaN();
    double kin_imag_dt_ = std::numeric_limits<double>::quiet_NaN();
    double time_ = 0.0;
};

/// Default imaginary-time starting guess: equal-weight spinor with box-mode
/// density sin^2(pi x / a) truncated to [0, a].
inline SpinorField box_mode_guess(const Grid& grid, double a) {
    SpinorField f(grid);
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int j = 0; j < grid.n(); ++j) {
        const double x = grid.x(j);
        if (x > 0.0 && x < a) {
            const double amp = std::sin(std::numbers::pi * x / a) * inv_sqrt2;
            f.up[j] = amp;
            f.down[j] = amp;
        }
    }
    normalize(f);
    return f;
}

/// Imaginary-time ground-state search at frozen (a, phi), reusing an existing
/// evolver (plans, tables). Converged when the energy change over
/// check_interval steps drops below tol.
inline GroundStateResult ground_state(Evolver& ev, double a, double phi,
                                      const GroundStateOptions& opt = {}) {
    const SystemParams& p = ev.params();
    if (!(a > p.x_min + 4.0 * p.slope_s) || !(a < p.x_max - 4.0 * p.slope_s))
        throw ValidationError("ground_state: piston position a=" + std::to_string(a) +
                              " lacks 4s clearance inside the domain");
    if (!(opt.tol > 0)) throw ValidationError("ground_state: tol must be > 0");
    const double dtau = opt.dt > 0 ? opt.dt : p.dt_imag;

    if (opt.warm_start) {
        ev.set_field(*opt.warm_start);
        ev.renormalize();
    } else {
        ev.set_field(box_mode_guess(ev.grid(), a));
    }

    double e_prev = ev.energy(a, phi);
    long iter = 0;
    while (iter < opt.max_iters) {
        for (int i = 0; i < opt.check_interval; ++i) ev.step_imag(dtau, a, phi);
        iter += opt.check_interval;
        const double e = ev.energy(a, phi);
        const double change = std::abs(e_prev - e);
        e_prev = e;
        if (change < opt.tol && iter >= 2 * opt.check_interval)
            return {ev.field(), e, iter, change};
    }
    throw NumericalError("ground_state: no convergence after " + std::to_string(opt.max_iters) +
                         " iterations at a=" + std::to_string(a) +
                         ", phi=" + std::to_string(phi));
}

inline GroundStateResult ground_state(double a, double phi, const SystemParams& p,
                                      const GroundStateOptions& opt = {}) {
    Evolver ev(p);
    return ground_state(ev, a, phi, opt);
}

/// Energy of an arbitrary field (copies it into a scratch evolver).
inline double energy_functional(const SpinorField& f, double a, double phi,
                                const SystemParams& p) {
    Evolver ev(p);
    ev.set_field(f);
    return ev.energy(a, phi);
}

}  // namespace rabipiston

#endif
