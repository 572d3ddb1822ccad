// Test-side reference computations, kept independent of the library's
// evolution/quadrature code paths: adaptive Simpson quadrature, a
// finite-difference eigensolver, and a dense diagonalization of the spectral
// Hamiltonian built via a naive DFT.

#ifndef RABIPISTON_TESTS_ORACLES_HPP
#define RABIPISTON_TESTS_ORACLES_HPP

#include <cmath>
#include <complex>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <lapacke.h>

namespace oracles {

// --- adaptive Simpson quadrature -------------------------------------------

inline double simpson_rec(const std::function<double(double)>& f, double a, double b, double fa,
                          double fm, double fb, double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) throw std::runtime_error("adaptive simpson: max depth");
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a, double b,
                        double tol = 1e-13) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, 60);
}

// --- three-point finite-difference ground state -----------------------------

struct EigenPair {
    double value;
    std::vector<double> vector;  // normalized with quadrature weight dx
};

/// Lowest eigenpair of H = -1/2 d2/dx2 + V on a periodic grid, second-order
/// finite differences, via dense symmetric diagonalization.
inline EigenPair fd_ground_state(const std::vector<double>& potential, double dx) {
    const int n = static_cast<int>(potential.size());
    std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
    const double inv = 0.5 / (dx * dx);
    for (int i = 0; i < n; ++i) {
        h[i * n + i] = 2.0 * inv + potential[i];
        h[i * n + (i + 1) % n] -= inv;
        h[i * n + (i + n - 1) % n] -= inv;
    }
    std::vector<double> w(n);
    const int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', n, h.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyev failed");
    EigenPair out;
    out.value = w[0];
    out.vector.resize(n);
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        out.vector[i] = h[i * n];  // first column = lowest eigenvector
        nrm += out.vector[i] * out.vector[i];
    }
    nrm = std::sqrt(nrm * dx);
    for (auto& v : out.vector) v /= nrm;
    return out;
}

/// Lowest eigenpair of the spectral discretization: kinetic part built
/// exactly from the DFT (naive O(n^2) transform), plus the diagonal
/// potential. This is the operator a Fourier split-step scheme discretizes.
inline EigenPair spectral_ground_state(const std::vector<double>& potential, double length,
                                       double dx) {
    const int n = static_cast<int>(potential.size());
    const double two_pi = 2.0 * std::numbers::pi;
    // kinetic matrix K_{jl} = (1/n) sum_k (k^2/2) exp(i k (x_j - x_l)); real symmetric
    std::vector<double> h(static_cast<std::size_t>(n) * n, 0.0);
    for (int diff = 0; diff < n; ++diff) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            const double k = two_pi / length * (m < n / 2 ? m : m - n);
            acc += 0.5 * k * k * std::cos(two_pi * m * diff / n);
        }
        acc /= n;
        for (int j = 0; j < n; ++j) h[j * n + (j + diff) % n] += acc;
    }
    for (int j = 0; j < n; ++j) h[j * n + j] += potential[j];
    // symmetrize against rounding
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double s = 0.5 * (h[i * n + j] + h[j * n + i]);
            h[i * n + j] = h[j * n + i] = s;
        }
    std::vector<double> w(n);
    const int info = LAPACKE_dsyev(LAPACK_ROW_MAJOR, 'V', 'U', n, h.data(), n, w.data());
    if (info != 0) throw std::runtime_error("dsyev failed");
    EigenPair out;
    out.value = w[0];
    out.vector.resize(n);
    double nrm = 0;
    for (int i = 0; i < n; ++i) {
        out.vector[i] = h[i * n];
        nrm += out.vector[i] * out.vector[i];
    }
    nrm = std::sqrt(nrm * dx);
    for (auto& v : out.vector) v /= nrm;
    return out;
}

}  // namespace oracles

#endif
