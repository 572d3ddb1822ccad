#ifndef RABIPISTON_SPINOR_HPP
#define RABIPISTON_SPINOR_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "rabipiston/errors.hpp"
#include "rabipiston/grid.hpp"

namespace rabipiston {

using Complex = std::complex<double>;

/// Two-component complex field (pseudo-spin up/down amplitudes) on a Grid.
/// The working convention keeps the total norm at one.
struct SpinorField {
    Grid grid;
    std::vector<Complex> up;
    std::vector<Complex> down;

    explicit SpinorField(const Grid& g) : grid(g), up(g.n(), Complex{}), down(g.n(), Complex{}) {}

    int n() const { return grid.n(); }
};

/// Rectangle-rule quadrature of |psi_up|^2 + |psi_down|^2 (spectrally accurate
/// for confined fields on the periodic grid).
inline double norm(const SpinorField& f) {
    double s = 0.0;
    for (int j = 0; j < f.n(); ++j) s += std::norm(f.up[j]) + std::norm(f.down[j]);
    return s * f.grid.dx();
}

/// Total density at the two domain edges; should stay below 1e-8 for the
/// periodic spectral treatment to be faithful.
inline double boundary_density(const SpinorField& f) {
    const int m = f.n() - 1;
    return std::norm(f.up[0]) + std::norm(f.down[0]) + std::norm(f.up[m]) + std::norm(f.down[m]);
}

/// Rescales to unit norm; relative phases and spin composition are unchanged.
inline void normalize(SpinorField& f) {
    const double nrm = norm(f);
    if (!(nrm > 0.0)) throw NumericalError("normalize: field has zero norm");
    const double scale = 1.0 / std::sqrt(nrm);
    for (auto& v : f.up) v *= scale;
    for (auto& v : f.down) v *= scale;
}

inline SpinorField normalized(SpinorField f) {
    normalize(f);
    return f;
}

/// Population imbalance S = integral(|up|^2 - |down|^2) dx; in [-1, 1] for a
/// unit-norm field.
inline double magnetization(const SpinorField& f) {
    double s = 0.0;
    for (int j = 0; j < f.n(); ++j) s += std::norm(f.up[j]) - std::norm(f.down[j]);
    return s * f.grid.dx();
}

/// Writes the field snapshot CSV (columns x,re_up,im_up,re_down,im_down).
/// `header` lines are emitted verbatim before the column header.
inline void write_field_csv(const std::string& path, const SpinorField& f,
                            const std::vector<std::string>& header = {}) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write field CSV '" + path + "'");
    for (const auto& h : header) out << h << "\n";
    out << "x,re_up,im_up,re_down,im_down\n";
    char buf[160];
    for (int j = 0; j < f.n(); ++j) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,%.12g,%.12g,%.12g\n", f.grid.x(j),
                      f.up[j].real(), f.up[j].imag(), f.down[j].real(), f.down[j].imag());
        out << buf;
    }
    if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace rabipiston

#endif
