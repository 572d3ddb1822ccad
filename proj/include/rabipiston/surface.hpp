#ifndef RABIPISTON_SURFACE_HPP
#define RABIPISTON_SURFACE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rabipiston/errors.hpp"
#include "rabipiston/gpe.hpp"
#include "rabipiston/parallel.hpp"
#include "rabipiston/params.hpp"

namespace rabipiston {

/// Tabulated ground-state energy E_gs(a, phi) and stationary pressure
/// P_st(a, phi) over a rectangular (piston position, Rabi angle) grid.
/// Storage is row-major with the phi index fastest.
struct StationarySurface {
    std::vector<double> a_grid;
    std::vector<double> phi_grid;
    std::vector<double> e_values;
    std::vector<double> p_values;

    int na() const { return static_cast<int>(a_grid.size()); }
    int nphi() const { return static_cast<int>(phi_grid.size()); }
    double e(int ia, int iphi) const { return e_values[ia * nphi() + iphi]; }
    double p(int ia, int iphi) const { return p_values[ia * nphi() + iphi]; }

    void validate() const {
        auto strictly_increasing = [](const std::vector<double>& g) {
            for (std::size_t i = 1; i < g.size(); ++i)
                if (!(g[i] > g[i - 1])) return false;
            return true;
        };
        if (na() < 2 || nphi() < 2) throw ValidationError("surface: need at least a 2x2 grid");
        if (!strictly_increasing(a_grid)) throw ValidationError("surface: a-grid not increasing");
        if (!strictly_increasing(phi_grid))
            throw ValidationError("surface: phi-grid not increasing");
        const std::size_t want = static_cast<std::size_t>(na()) * nphi();
        if (e_values.size() != want || p_values.size() != want)
            throw ValidationError("surface: table size does not match grids");
        for (double p : p_values)
            if (!(p > 0)) throw ValidationError("surface: non-positive tabulated pressure");
    }
};

namespace detail {

/// C1 bicubic Hermite interpolation on a rectilinear grid. Nodal slopes come
/// from centered differences (one-sided at the edges), so the interpolant is
/// exact at nodes and reproduces linear data; its analytic derivatives are the
/// smooth surface derivatives used for the work integrals.
class BicubicTable {
  public:
    BicubicTable() = default;
    BicubicTable(const std::vector<double>& xs, const std::vector<double>& ys,
                 const std::vector<double>& f)
        : xs_(xs), ys_(ys), values_(f) {
        const int nx = static_cast<int>(xs.size());
        const int ny = static_cast<int>(ys.size());
        auto at = [&](int i, int j) { return f[i * ny + j]; };
        // slope estimates in physical units
        std::vector<double> fx(nx * ny), fy(nx * ny), fxy(nx * ny);
        auto slope = [](double fm, double fp, double xm, double xp) {
            return (fp - fm) / (xp - xm);
        };
        for (int i = 0; i < nx; ++i) {
            const int im = std::max(0, i - 1), ip = std::min(nx - 1, i + 1);
            for (int j = 0; j < ny; ++j) {
                const int jm = std::max(0, j - 1), jp = std::min(ny - 1, j + 1);
                fx[i * ny + j] = slope(at(im, j), at(ip, j), xs[im], xs[ip]);
                fy[i * ny + j] = slope(at(i, jm), at(i, jp), ys[jm], ys[jp]);
                fxy[i * ny + j] = slope(slope(at(im, jm), at(im, jp), ys[jm], ys[jp]),
                                        slope(at(ip, jm), at(ip, jp), ys[jm], ys[jp]),
                                        xs[im], xs[ip]);
            }
        }
        coeff_.resize(static_cast<std::size_t>(nx - 1) * (ny - 1) * 16);
        static constexpr double M[4][4] = {
            {1, 0, 0, 0}, {0, 0, 1, 0}, {-3, 3, -2, -1}, {2, -2, 1, 1}};
        for (int i = 0; i + 1 < nx; ++i) {
            const double hx = xs[i + 1] - xs[i];
            for (int j = 0; j + 1 < ny; ++j) {
                const double hy = ys[j + 1] - ys[j];
                // F holds values, y-slopes, x-slopes, cross slopes in cell units
                double F[4][4];
                for (int di = 0; di < 2; ++di)
                    for (int dj = 0; dj < 2; ++dj) {
                        const int idx = (i + di) * ny + (j + dj);
                        F[di][dj] = f[idx];
                        F[di][2 + dj] = fy[idx] * hy;
                        F[2 + di][dj] = fx[idx] * hx;
                        F[2 + di][2 + dj] = fxy[idx] * hx * hy;
                    }
                double MF[4][4];
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) {
                        double s = 0;
                        for (int k = 0; k < 4; ++k) s += M[r][k] * F[k][c];
                        MF[r][c] = s;
                    }
                double* cc = cell(i, j);
                for (int r = 0; r < 4; ++r)
                    for (int c = 0; c < 4; ++c) {
                        double s = 0;
                        for (int k = 0; k < 4; ++k) s += MF[r][k] * M[c][k];
                        cc[r * 4 + c] = s;
                    }
            }
        }
    }

    double value(double x, double y) const { return eval(x, y, 0); }
    double dx(double x, double y) const { return eval(x, y, 1); }
    double dy(double x, double y) const { return eval(x, y, 2); }

    double x_min() const { return xs_.front(); }
    double x_max() const { return xs_.back(); }
    double y_min() const { return ys_.front(); }
    double y_max() const { return ys_.back(); }

  private:
    double* cell(int i, int j) {
        return coeff_.data() + (static_cast<std::size_t>(i) * (ys_.size() - 1) + j) * 16;
    }
    const double* cell(int i, int j) const {
        return coeff_.data() + (static_cast<std::size_t>(i) * (ys_.size() - 1) + j) * 16;
    }

    static int locate(const std::vector<double>& g, double v, const char* what) {
        if (!(v >= g.front() && v <= g.back()))
            throw ValidationError(std::string("surface interpolation: ") + what + "=" +
                                  std::to_string(v) + " outside tabulated range [" +
                                  std::to_string(g.front()) + ", " + std::to_string(g.back()) +
                                  "]");
        const auto it = std::upper_bound(g.begin(), g.end(), v);
        int i = static_cast<int>(it - g.begin()) - 1;
        if (i > static_cast<int>(g.size()) - 2) i = static_cast<int>(g.size()) - 2;
        if (i < 0) i = 0;
        return i;
    }

    double eval(double x, double y, int deriv) const {
        const int i = locate(xs_, x, "a");
        const int j = locate(ys_, y, "phi");
        if (deriv == 0) {  // node queries reproduce the table bit for bit
            const int ix = x == xs_[i] ? i : (x == xs_[i + 1] ? i + 1 : -1);
            const int iy = y == ys_[j] ? j : (y == ys_[j + 1] ? j + 1 : -1);
            if (ix >= 0 && iy >= 0) return values_[ix * ys_.size() + iy];
        }
        const double hx = xs_[i + 1] - xs_[i];
        const double hy = ys_[j + 1] - ys_[j];
        const double t = (x - xs_[i]) / hx;
        const double u = (y - ys_[j]) / hy;
        const double* c = cell(i, j);
        if (deriv == 0) {
            double acc = 0;
            for (int r = 3; r >= 0; --r) {
                double row = 0;
                for (int s = 3; s >= 0; --s) row = row * u + c[r * 4 + s];
                acc = acc * t + row;
            }
            return acc;
        }
        if (deriv == 1) {  // d/dx
            double acc = 0;
            for (int r = 3; r >= 1; --r) {
                double row = 0;
                for (int s = 3; s >= 0; --s) row = row * u + c[r * 4 + s];
                acc = acc * t + r * row;
            }
            return acc / hx;
        }
        double acc = 0;  // d/dy
        for (int r = 3; r >= 0; --r) {
            double row = 0;
            for (int s = 3; s >= 1; --s) row = row * u + s * c[r * 4 + s];
            acc = acc * t + row;
        }
        return acc / hy;
    }

    std::vector<double> xs_, ys_;
    std::vector<double> values_;
    std::vector<double> coeff_;
};

}  // namespace detail

/// Smooth C1 view of a StationarySurface with analytic derivatives.
class SurfaceInterpolator {
  public:
    explicit SurfaceInterpolator(const StationarySurface& s)
        : energy_(s.a_grid, s.phi_grid, s.e_values), pressure_(s.a_grid, s.phi_grid, s.p_values) {
        s.validate();
    }

    double pressure(double a, double phi) const { return pressure_.value(a, phi); }
    double energy(double a, double phi) const { return energy_.value(a, phi); }
    double denergy_da(double a, double phi) const { return energy_.dx(a, phi); }
    double denergy_dphi(double a, double phi) const { return energy_.dy(a, phi); }

    double a_min() const { return pressure_.x_min(); }
    double a_max() const { return pressure_.x_max(); }
    double phi_min() const { return pressure_.y_min(); }
    double phi_max() const { return pressure_.y_max(); }

  private:
    detail::BicubicTable energy_, pressure_;
};

/// Interpolated (pressure, energy) at one point; for repeated queries build a
/// SurfaceInterpolator once instead.
inline std::pair<double, double> interpolate(const StationarySurface& s, double a, double phi) {
    SurfaceInterpolator it(s);
    return {it.pressure(a, phi), it.energy(a, phi)};
}

struct SurfaceBuildOptions {
    double tol = 1e-10;
    unsigned jobs = 1;
};

/// Fills the (a, phi) tables with imaginary-time ground-state solves. Rows of
/// fixed phi run independently (parallelizable); along each row the solves
/// march in ascending a, warm-starting from the neighbour.
inline StationarySurface build_surface(double a_lo, double a_hi, int na, double phi_lo,
                                       double phi_hi, int nphi, const SystemParams& params,
                                       const SurfaceBuildOptions& opt = {}) {
    if (na < 8) throw ValidationError("build_surface: na must be >= 8");
    if (nphi < 8) throw ValidationError("build_surface: nphi must be >= 8");
    if (!(a_lo < a_hi)) throw ValidationError("build_surface: need a_lo < a_hi");
    if (!(phi_lo < phi_hi)) throw ValidationError("build_surface: need phi_lo < phi_hi");
    if (!(a_hi < params.x_max - 4 * params.slope_s))
        throw ValidationError("build_surface: a_hi lacks 4s clearance from the domain edge");
    StationarySurface s;
    s.a_grid.resize(na);
    s.phi_grid.resize(nphi);
    for (int i = 0; i < na; ++i) s.a_grid[i] = a_lo + (a_hi - a_lo) * i / (na - 1);
    for (int j = 0; j < nphi; ++j) s.phi_grid[j] = phi_lo + (phi_hi - phi_lo) * j / (nphi - 1);
    s.e_values.assign(static_cast<std::size_t>(na) * nphi, 0.0);
    s.p_values.assign(static_cast<std::size_t>(na) * nphi, 0.0);

    const WallSpec wall(params);
    parallel_for(static_cast<std::size_t>(nphi), opt.jobs, [&](std::size_t j) {
        Evolver ev(params);
        GroundStateOptions gopt;
        gopt.tol = opt.tol;
        SpinorField warm(ev.grid());
        bool have_warm = false;
        for (int i = 0; i < na; ++i) {
            gopt.warm_start = have_warm ? &warm : nullptr;
            try {
                const GroundStateResult r = ground_state(ev, s.a_grid[i], s.phi_grid[j], gopt);
                warm = r.field;
                have_warm = true;
                s.e_values[i * nphi + j] = r.energy;
                s.p_values[i * nphi + j] = pressure_exact(r.field, wall, s.a_grid[i]);
            } catch (const NumericalError& e) {
                throw NumericalError("build_surface node (a=" + std::to_string(s.a_grid[i]) +
                                     ", phi=" + std::to_string(s.phi_grid[j]) + "): " + e.what());
            }
        }
    });
    s.validate();
    return s;
}

/// Root of kappa*a = P_st(a, phi) inside the tabulated a-range (bisection).
inline double equilibrium_position(const SurfaceInterpolator& it, double kappa, double phi) {
    double lo = it.a_min(), hi = it.a_max();
    auto f = [&](double a) { return it.pressure(a, phi) - kappa * a; };
    double flo = f(lo), fhi = f(hi);
    if (flo == 0) return lo;
    if (fhi == 0) return hi;
    if ((flo > 0) == (fhi > 0))
        throw ValidationError("equilibrium_position: no sign change of P_st - kappa*a in [" +
                              std::to_string(lo) + ", " + std::to_string(hi) + "]");
    for (int iter = 0; iter < 200 && hi - lo > 1e-13 * (1 + std::abs(lo)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (fm == 0) return mid;
        if ((fm > 0) == (flo > 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

/// Surface file: optional leading # comments, a line with the a-grid, a line
/// with the phi-grid, then na rows of nphi energies and na rows of nphi
/// pressures, whitespace separated.
inline void save_surface(const std::string& path, const StationarySurface& s,
                         const std::vector<std::string>& header = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write surface file '" + path + "'");
    for (const auto& h : header) out << h << "\n";
    char buf[40];
    auto put_row = [&](const double* v, int count) {
        for (int i = 0; i < count; ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", v[i]);
            out << buf << (i + 1 == count ? '\n' : ' ');
        }
    };
    put_row(s.a_grid.data(), s.na());
    put_row(s.phi_grid.data(), s.nphi());
    for (int i = 0; i < s.na(); ++i) put_row(s.e_values.data() + i * s.nphi(), s.nphi());
    for (int i = 0; i < s.na(); ++i) put_row(s.p_values.data() + i * s.nphi(), s.nphi());
    if (!out) throw IoError("write failed for '" + path + "'");
}

inline StationarySurface load_surface(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open surface file '" + path + "'");
    std::string line;
    auto next_content_line = [&](std::string& dst) {
        while (std::getline(in, line)) {
            const std::string t = detail::trim(line);
            if (t.empty() || t[0] == '#') continue;
            dst = t;
            return true;
        }
        return false;
    };
    auto parse_row = [&](const std::string& text) {
        std::istringstream iss(text);
        std::vector<double> vals;
        double v;
        while (iss >> v) vals.push_back(v);
        return vals;
    };
    StationarySurface s;
    std::string content;
    if (!next_content_line(content)) throw ValidationError(path + ": missing a-grid line");
    s.a_grid = parse_row(content);
    if (!next_content_line(content)) throw ValidationError(path + ": missing phi-grid line");
    s.phi_grid = parse_row(content);
    const std::size_t want = s.a_grid.size() * s.phi_grid.size();
    for (auto* tab : {&s.e_values, &s.p_values}) {
        tab->reserve(want);
        while (tab->size() < want) {
            if (!next_content_line(content))
                throw ValidationError(path + ": truncated surface table");
            for (double v : parse_row(content)) tab->push_back(v);
        }
        if (tab->size() != want) throw ValidationError(path + ": table size mismatch");
    }
    s.validate();
    return s;
}

}  // namespace rabipiston

#endif
