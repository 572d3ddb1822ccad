#ifndef RABIPISTON_CONTROL_HPP
#define RABIPISTON_CONTROL_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rabipiston/parallel.hpp"
#include "rabipiston/piston.hpp"
#include "rabipiston/schedule.hpp"
#include "rabipiston/surface.hpp"

namespace rabipiston {

/// Weights of the terminal cost: one unit of error is a 0.1 l position miss
/// or a 0.01 l/tau residual velocity.
inline constexpr double kXiPositionScale = 0.1;
inline constexpr double kXiVelocityScale = 0.01;
/// Target threshold for a successful control, xi^2 < 1e-4.
inline constexpr double kXiThreshold = 1e-4;

inline double terminal_error(double a_final, double v_final, double a_target) {
    const double da = (a_final - a_target) / kXiPositionScale;
    const double dv = v_final / kXiVelocityScale;
    return da * da + dv * dv;
}

/// xi^2 of a completed trajectory against the target position (zero target
/// velocity), read from the stored terminal samples.
inline double terminal_error(const PistonTrajectory& traj, double a_target) {
    if (traj.size() == 0) throw ValidationError("terminal_error: empty trajectory");
    return terminal_error(traj.a.back(), traj.v.back(), a_target);
}

struct OptimizationResult {
    double c1 = 0.0, c2 = 0.0;
    double xi2 = std::numeric_limits<double>::infinity();
    long evaluations = 0;
    int stage = 0;
};

/// One optimizer evaluation for the run log.
struct EvalRecord {
    int stage;
    double c1, c2, xi2;
};

namespace detail {

using Objective = std::function<double(double, double)>;

struct GridSimplexOptions {
    double lo = -0.1, hi = 0.6;   // search square for (c1, c2)
    double step = 0.025;          // coarse grid spacing
    double simplex_tol = 1e-4;    // terminal simplex diameter
    int simplex_max_iter = 400;
    unsigned jobs = 1;
};

/// Coarse grid scan over [lo, hi]^2 followed by Nelder-Mead refinement from
/// the best node. Evaluations returning +inf (out-of-table candidates) are
/// skipped by the scan and repelled by the simplex. Deterministic: grid
/// results are reduced in row-major order, the simplex is sequential.
inline OptimizationResult grid_then_simplex(const Objective& f, const GridSimplexOptions& opt,
                                            std::vector<EvalRecord>* log, int stage) {
    const int npts = static_cast<int>(std::llround((opt.hi - opt.lo) / opt.step)) + 1;
    std::vector<double> vals(static_cast<std::size_t>(npts) * npts);
    auto coord = [&](int i) { return opt.lo + i * opt.step; };
    parallel_for(vals.size(), opt.jobs, [&](std::size_t idx) {
        const int i = static_cast<int>(idx) / npts;
        const int j = static_cast<int>(idx) % npts;
        vals[idx] = f(coord(i), coord(j));
    });
    long evals = static_cast<long>(vals.size());
    std::size_t best = 0;
    for (std::size_t idx = 1; idx < vals.size(); ++idx)
        if (vals[idx] < vals[best]) best = idx;
    if (log)
        for (std::size_t idx = 0; idx < vals.size(); ++idx)
            log->push_back({stage, coord(static_cast<int>(idx) / npts),
                            coord(static_cast<int>(idx) % npts), vals[idx]});
    if (!std::isfinite(vals[best]))
        throw NumericalError("optimizer: every grid candidate failed");

    // Nelder-Mead on (c1, c2)
    struct Vertex {
        std::array<double, 2> x;
        double fv;
    };
    auto eval = [&](std::array<double, 2> x) {
        const double v = f(x[0], x[1]);
        ++evals;
        if (log) log->push_back({stage, x[0], x[1], v});
        return v;
    };
    const double h = 0.5 * opt.step;
    std::array<Vertex, 3> simp;
    simp[0].x = {coord(static_cast<int>(best) / npts), coord(static_cast<int>(best) % npts)};
    simp[0].fv = vals[best];
    simp[1].x = {simp[0].x[0] + h, simp[0].x[1]};
    simp[1].fv = eval(simp[1].x);
    simp[2].x = {simp[0].x[0], simp[0].x[1] + h};
    simp[2].fv = eval(simp[2].x);

    auto diameter = [&] {
        double d = 0;
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                d = std::max(d, std::hypot(simp[i].x[0] - simp[j].x[0],
                                           simp[i].x[1] - simp[j].x[1]));
        return d;
    };
    for (int it = 0; it < opt.simplex_max_iter && diameter() > opt.simplex_tol; ++it) {
        std::stable_sort(simp.begin(), simp.end(),
                         [](const Vertex& a, const Vertex& b) { return a.fv < b.fv; });
        const std::array<double, 2> centroid{0.5 * (simp[0].x[0] + simp[1].x[0]),
                                             0.5 * (simp[0].x[1] + simp[1].x[1])};
        auto blend = [&](double w) {
            return std::array<double, 2>{centroid[0] + w * (centroid[0] - simp[2].x[0]),
                                         centroid[1] + w * (centroid[1] - simp[2].x[1])};
        };
        const auto xr = blend(1.0);
        const double fr = eval(xr);
        if (fr < simp[0].fv) {
            const auto xe = blend(2.0);
            const double fe = eval(xe);
            if (fe < fr)
                simp[2] = {xe, fe};
            else
                simp[2] = {xr, fr};
        } else if (fr < simp[1].fv) {
            simp[2] = {xr, fr};
        } else {
            const auto xc = blend(-0.5);
            const double fc = eval(xc);
            if (fc < std::min(fr, simp[2].fv)) {
                simp[2] = {xc, fc};
            } else {
                for (int i = 1; i < 3; ++i) {
                    simp[i].x[0] = 0.5 * (simp[i].x[0] + simp[0].x[0]);
                    simp[i].x[1] = 0.5 * (simp[i].x[1] + simp[0].x[1]);
                    simp[i].fv = eval(simp[i].x);
                }
            }
        }
    }
    std::stable_sort(simp.begin(), simp.end(),
                     [](const Vertex& a, const Vertex& b) { return a.fv < b.fv; });
    OptimizationResult res;
    res.c1 = simp[0].x[0];
    res.c2 = simp[0].x[1];
    res.xi2 = simp[0].fv;
    res.evaluations = evals;
    res.stage = stage;
    return res;
}

struct StencilDescentOptions {
    double step0 = 0.005;
    double step_min = 0.001;
    double stop_below = kXiThreshold;
    unsigned jobs = 1;
    long max_rounds = 400;
};

/// Local 3x3 stencil descent: evaluate the eight neighbours of the incumbent
/// at the current step, move to the best strict improvement, halve the step
/// when none exists; stop once the incumbent cost is below stop_below or the
/// step would shrink under step_min. Points live on an integer lattice keyed
/// by the smallest step, so re-visited candidates are served from a cache.
/// Ties prefer the candidate nearest the starting point.
inline OptimizationResult stencil_descent(const Objective& f, double start_x, double start_y,
                                          const StencilDescentOptions& opt,
                                          std::vector<EvalRecord>* log, int stage) {
    // lattice unit: the last step size still >= step_min after halvings
    double unit = opt.step0;
    while (unit * 0.5 >= opt.step_min) unit *= 0.5;
    const long stride0 = std::lround(opt.step0 / unit);

    std::map<std::pair<long, long>, double> cache;
    long evals = 0;
    auto eval = [&](long ix, long iy) {
        const auto key = std::make_pair(ix, iy);
        const auto found = cache.find(key);
        if (found != cache.end()) return found->second;
        const double x = start_x + ix * unit;
        const double y = start_y + iy * unit;
        const double v = f(x, y);
        ++evals;
        if (log) log->push_back({stage, x, y, v});
        cache.emplace(key, v);
        return v;
    };

    long cx = 0, cy = 0;
    double fc = eval(0, 0);
    long stride = stride0;
    for (long round = 0; round < opt.max_rounds; ++round) {
        // eight neighbours; prefetch uncached ones in parallel
        std::array<std::pair<long, long>, 8> nb;
        int count = 0;
        for (int dx = -1; dx <= 1; ++dx)
            for (int dy = -1; dy <= 1; ++dy)
                if (dx || dy) nb[count++] = {cx + dx * stride, cy + dy * stride};
        if (opt.jobs > 1) {
            std::array<double, 8> out{};
            std::array<bool, 8> need{};
            for (int i = 0; i < 8; ++i) need[i] = cache.find(nb[i]) == cache.end();
            parallel_for(8, opt.jobs, [&](std::size_t i) {
                if (need[i]) out[i] = f(start_x + nb[i].first * unit, start_y + nb[i].second * unit);
            });
            for (int i = 0; i < 8; ++i)
                if (need[i]) {
                    ++evals;
                    if (log)
                        log->push_back({stage, start_x + nb[i].first * unit,
                                        start_y + nb[i].second * unit, out[i]});
                    cache.emplace(nb[i], out[i]);
                }
        }
        long bx = cx, by = cy;
        double fb = fc;
        for (int i = 0; i < 8; ++i) {
            const double v = eval(nb[i].first, nb[i].second);
            const bool better = v < fb;
            const bool tie_closer =
                v == fb && (nb[i].first * nb[i].first + nb[i].second * nb[i].second <
                            bx * bx + by * by);
            if (better || tie_closer) {
                fb = v;
                bx = nb[i].first;
                by = nb[i].second;
            }
        }
        if (fb < fc) {
            cx = bx;
            cy = by;
            fc = fb;
        } else {
            stride /= 2;
        }
        if (fc < opt.stop_below) break;
        if (stride * unit < opt.step_min) break;
    }
    OptimizationResult res;
    res.c1 = start_x + cx * unit;
    res.c2 = start_y + cy * unit;
    res.xi2 = fc;
    res.evaluations = evals;
    res.stage = stage;
    return res;
}

}  // namespace detail

struct OptimizeOptions {
    unsigned jobs = 1;
    double gs_tol = 1e-10;
    std::vector<EvalRecord>* log = nullptr;
};

/// Stage 1: minimize the surrogate-model terminal error over the quintic
/// controls (c1, c2) with a coarse grid scan plus simplex refinement. Only
/// the tabulated stationary pressure is consulted; no field is evolved.
inline OptimizationResult optimize_stage1(double t_f, const SurfaceInterpolator& surf,
                                          const SystemParams& params,
                                          const OptimizeOptions& opt = {}) {
    const double a_target = equilibrium_position(surf, params.spring_k, std::numbers::pi / 2);
    const double a_start = equilibrium_position(surf, params.spring_k, 0.0);
    detail::Objective f = [&](double c1, double c2) {
        try {
            SurrogateSimOptions sopt;
            sopt.a0 = a_start;
            sopt.record = false;
            const auto run = simulate_surrogate(ControlSchedule::quintic(t_f, c1, c2), t_f, surf,
                                                params, sopt);
            return terminal_error(run.a_final, run.v_final, a_target);
        } catch (const ValidationError&) {
            return std::numeric_limits<double>::infinity();  // left the tabulated surface
        }
    };
    detail::GridSimplexOptions gopt;
    gopt.jobs = opt.jobs;
    return detail::grid_then_simplex(f, gopt, opt.log, 1);
}

inline OptimizationResult optimize_stage1(double t_f, const StationarySurface& surface,
                                          const SystemParams& params,
                                          const OptimizeOptions& opt = {}) {
    SurfaceInterpolator it(surface);
    return optimize_stage1(t_f, it, params, opt);
}

/// Stage 2: local descent of the exact-simulation terminal error starting
/// from the stage-1 optimum. The surface supplies the target position and the
/// starting equilibrium; every candidate runs the full coupled simulation
/// from one shared initial ground state.
inline OptimizationResult optimize_stage2(double c1_start, double c2_start, double t_f,
                                          const SystemParams& params,
                                          const SurfaceInterpolator& surf,
                                          const OptimizeOptions& opt = {}) {
    const double a_target = equilibrium_position(surf, params.spring_k, std::numbers::pi / 2);
    const double a0 = equilibrium_position(surf, params.spring_k, 0.0);
    GroundStateOptions gopt;
    gopt.tol = opt.gs_tol;
    const GroundStateResult init = ground_state(a0, 0.0, params, gopt);

    detail::Objective f = [&](double c1, double c2) {
        ExactSimOptions sopt;
        sopt.a0 = a0;
        sopt.initial_field = &init.field;
        sopt.record = false;
        const auto run =
            simulate_exact(ControlSchedule::quintic(t_f, c1, c2), t_f, params, sopt);
        return terminal_error(run.a_final, run.v_final, a_target);
    };
    detail::StencilDescentOptions dopt;
    dopt.jobs = opt.jobs;
    return detail::stencil_descent(f, c1_start, c2_start, dopt, opt.log, 2);
}

inline OptimizationResult optimize_stage2(double c1_start, double c2_start, double t_f,
                                          const SystemParams& params,
                                          const StationarySurface& surface,
                                          const OptimizeOptions& opt = {}) {
    SurfaceInterpolator it(surface);
    return optimize_stage2(c1_start, c2_start, t_f, params, it, opt);
}

struct SpeedLimitPoint {
    double t_f;
    double xi2;
    double c1, c2;
};

struct SpeedLimitResult {
    std::vector<SpeedLimitPoint> points;           // scanned + bisection refinements, sorted
    double t_f_c = std::numeric_limits<double>::quiet_NaN();  // smallest passing t_f
};

/// Runs the stage-1 optimization for each final time, then refines the first
/// crossing of the xi^2 < 1e-4 threshold by bisection down to `resolution`.
inline SpeedLimitResult speed_limit_scan(const std::vector<double>& t_f_values,
                                         const SystemParams& params,
                                         const SurfaceInterpolator& surf,
                                         const OptimizeOptions& opt = {},
                                         double resolution = 0.1) {
    if (t_f_values.empty()) throw ValidationError("speed_limit_scan: empty t_f list");
    std::vector<double> tfs(t_f_values);
    std::sort(tfs.begin(), tfs.end());
    SpeedLimitResult res;
    auto run_at = [&](double tf) {
        const auto r = optimize_stage1(tf, surf, params, opt);
        res.points.push_back({tf, r.xi2, r.c1, r.c2});
        return r.xi2;
    };
    std::vector<double> xi(tfs.size());
    for (std::size_t i = 0; i < tfs.size(); ++i) xi[i] = run_at(tfs[i]);

    // first passing point preceded by a failing one
    std::size_t pass = tfs.size();
    for (std::size_t i = 0; i < tfs.size(); ++i)
        if (xi[i] < kXiThreshold) {
            pass = i;
            break;
        }
    if (pass == tfs.size()) return res;  // nothing passes: t_f_c stays NaN
    if (pass == 0) {
        res.t_f_c = tfs[0];  // already passing at the lower end of the scan
        std::sort(res.points.begin(), res.points.end(),
                  [](const SpeedLimitPoint& a, const SpeedLimitPoint& b) { return a.t_f < b.t_f; });
        return res;
    }
    double lo = tfs[pass - 1], hi = tfs[pass];
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (run_at(mid) < kXiThreshold)
            hi = mid;
        else
            lo = mid;
    }
    res.t_f_c = hi;
    std::sort(res.points.begin(), res.points.end(),
              [](const SpeedLimitPoint& a, const SpeedLimitPoint& b) { return a.t_f < b.t_f; });
    return res;
}

inline SpeedLimitResult speed_limit_scan(const std::vector<double>& t_f_values,
                                         const SystemParams& params,
                                         const StationarySurface& surface,
                                         const OptimizeOptions& opt = {},
                                         double resolution = 0.1) {
    SurfaceInterpolator it(surface);
    return speed_limit_scan(t_f_values, params, it, opt, resolution);
}

}  // namespace rabipiston

#endif
