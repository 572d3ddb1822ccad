#ifndef RABIPISTON_FASTMATH_HPP
#define RABIPISTON_FASTMATH_HPP

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "rabipiston/errors.hpp"

namespace rabipiston::detail {

/// e^{-i theta} with a polynomial fast path for the small phases that dominate
/// split-step inner loops (|theta| <= 1/8 keeps the truncation below 1e-19).
/// The result is renormalized to unit modulus.
inline std::complex<double> cis_neg(double theta) {
    double c, s;
    const double t2 = theta * theta;
    if (t2 <= 0.015625) {
        c = 1.0 -
            t2 * (1.0 / 2 -
                  t2 * (1.0 / 24 - t2 * (1.0 / 720 - t2 * (1.0 / 40320 - t2 / 3628800.0))));
        s = theta *
            (1.0 -
             t2 * (1.0 / 6 -
                   t2 * (1.0 / 120 - t2 * (1.0 / 5040 - t2 * (1.0 / 362880 - t2 / 39916800.0)))));
        const double fix = 0.5 * (3.0 - (c * c + s * s));
        c *= fix;
        s *= fix;
    } else {
        c = std::cos(theta);
        s = std::sin(theta);
    }
    return {c, -s};
}

/// e^{-theta} for theta >= -0.125 with the same kind of fast path.
inline double exp_neg(double theta) {
    const double t2 = theta * theta;
    if (t2 <= 0.015625) {
        const double even =
            1.0 + t2 * (1.0 / 2 + t2 * (1.0 / 24 + t2 * (1.0 / 720 + t2 * (1.0 / 40320 +
                                                                           t2 / 3628800.0))));
        const double odd =
            theta * (1.0 + t2 * (1.0 / 6 + t2 * (1.0 / 120 + t2 * (1.0 / 5040 +
                                                                   t2 * (1.0 / 362880)))));
        return even - odd;
    }
    return std::exp(-theta);
}

/// Gauss-Legendre nodes and weights on [-1, 1], computed once by Newton
/// iteration on the Legendre recurrence (deterministic).
struct GaussLegendre {
    std::vector<double> nodes, weights;
    explicit GaussLegendre(int n) : nodes(n), weights(n) {
        const double pi = std::numbers::pi;
        for (int i = 0; i < (n + 1) / 2; ++i) {
            double x = std::cos(pi * (i + 0.75) / (n + 0.5));
            double pp = 0.0;
            for (int it = 0; it < 64; ++it) {
                double p0 = 1.0, p1 = x;
                for (int k = 2; k <= n; ++k) {
                    const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                pp = n * (x * p1 - p0) / (x * x - 1.0);
                const double dx = p1 / pp;
                x -= dx;
                if (std::abs(dx) < 1e-15) break;
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            const double w = 2.0 / ((1.0 - x * x) * pp * pp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
    }
};

inline const GaussLegendre& gauss_legendre_24() {
    static const GaussLegendre gl(24);
    return gl;
}

/// Dense Gaussian elimination with partial pivoting for the tiny linear
/// systems used by schedule construction.
template <std::size_t N>
std::array<double, N> solve_linear(std::array<std::array<double, N>, N> a,
                                   std::array<double, N> b) {
    for (std::size_t col = 0; col < N; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < N; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw NumericalError("solve_linear: singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t r = col + 1; r < N; ++r) {
            const double f = a[r][col] / a[col][col];
            for (std::size_t c = col; c < N; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::array<double, N> x{};
    for (std::size_t ri = N; ri-- > 0;) {
        double s = b[ri];
        for (std::size_t c = ri + 1; c < N; ++c) s -= a[ri][c] * x[c];
        x[ri] = s / a[ri][ri];
    }
    return x;
}

}  // namespace rabipiston::detail

#endif
