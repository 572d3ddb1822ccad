#ifndef RABIPISTON_PRESSURE_HPP
#define RABIPISTON_PRESSURE_HPP

#include <cmath>
#include <complex>

#include "rabipiston/fastmath.hpp"
#include "rabipiston/grid.hpp"
#include "rabipiston/potentials.hpp"
#include "rabipiston/spinor.hpp"

namespace rabipiston {

namespace detail {

/// Six-point Lagrange interpolation of grid samples at fractional index t
/// measured from sample j0 (valid t in [0, 5], accurate O(dx^6)).
template <typename Getter>
double lagrange6(const Getter& value, int j0, double t) {
    double prod = 1.0;
    for (int k = 0; k < 6; ++k) prod *= (t - k);
    static constexpr double denom[6] = {-120.0, 24.0, -12.0, 12.0, -24.0, 120.0};
    double acc = 0.0;
    if (prod == 0.0) {
        const int m = static_cast<int>(std::lround(t));
        return value(j0 + m);
    }
    for (int m = 0; m < 6; ++m) acc += value(j0 + m) * prod / ((t - m) * denom[m]);
    return acc;
}

/// Exact pressure integral P = int |Psi|^2 dV/dz (x - a) dx in units rho.
/// The integrand is supported on the barrier ramp [a-s, a+s], which spans only
/// a handful of grid cells, so plain grid quadrature would be noisy in a.
/// Instead the smooth density is interpolated to Gauss-Legendre nodes and the
/// analytic barrier derivative is integrated exactly against it.
inline double pressure_core(const std::complex<double>* up, const std::complex<double>* down,
                            const Grid& grid, const WallSpec& wall, double a) {
    const auto& gl = gauss_legendre_24();
    const double s = wall.slope_s;
    if (a - s < grid.x_min() + 3 * grid.dx() || a + s > grid.x_max() - 4 * grid.dx())
        throw ValidationError("pressure: barrier ramp at a=" + std::to_string(a) +
                              " leaves the grid");
    auto density = [&](int j) { return std::norm(up[j]) + std::norm(down[j]); };
    double acc = 0.0;
    for (std::size_t i = 0; i < gl.nodes.size(); ++i) {
        const double z = s * gl.nodes[i];
        const double x = a + z;
        const double frac = (x - grid.x_min()) / grid.dx();
        int j0 = static_cast<int>(std::floor(frac)) - 2;
        if (j0 < 0) j0 = 0;
        if (j0 > grid.n() - 6) j0 = grid.n() - 6;
        const double n_here = lagrange6(density, j0, frac - j0);
        acc += gl.weights[i] * n_here * piston_barrier_deriv(z, wall);
    }
    return acc * s;
}

}  // namespace detail

/// Instantaneous force of the condensate on the piston barrier at position a.
inline double pressure_exact(const SpinorField& f, const WallSpec& wall, double a) {
    return detail::pressure_core(f.up.data(), f.down.data(), f.grid, wall, a);
}

inline double pressure_exact(const SpinorField& f, const SystemParams& p, double a) {
    return pressure_exact(f, WallSpec(p), a);
}

}  // namespace rabipiston

#endif
