#ifndef RABIPISTON_GRID_HPP
#define RABIPISTON_GRID_HPP

#include <cmath>
#include <numbers>

#include "rabipiston/errors.hpp"
#include "rabipiston/params.hpp"

namespace rabipiston {

/// Uniform periodic spatial grid: x_j = x_min + j*dx, j = 0..n-1 (x_max is the
/// periodic image of x_min). Wavenumbers follow the standard DFT ordering with
/// |k|_max = pi/dx.
class Grid {
  public:
    Grid(double x_min, double x_max, int n) : x_min_(x_min), x_max_(x_max), n_(n) {
        if (!(x_max > x_min)) throw ValidationError("grid: x_max must exceed x_min");
        if (n < 2) throw ValidationError("grid: need at least 2 points");
        dx_ = (x_max - x_min) / n;
    }
    explicit Grid(const SystemParams& p) : Grid(p.x_min, p.x_max, p.n_points) {}

    int n() const { return n_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    double length() const { return x_max_ - x_min_; }

    double x(int j) const { return x_min_ + j * dx_; }

    /// DFT wavenumber of bin j (2*pi*j/L for j < n/2, negative branch above).
    double k(int j) const {
        const double base = 2.0 * std::numbers::pi / length();
        return (j < n_ / 2) ? base * j : base * (j - n_);
    }

    /// Index of the grid point at or just below position x.
    int index_below(double x) const {
        int j = static_cast<int>(std::floor((x - x_min_) / dx_));
        if (j < 0) j = 0;
        if (j > n_ - 1) j = n_ - 1;
        return j;
    }

    bool operator==(const Grid& o) const {
        return x_min_ == o.x_min_ && x_max_ == o.x_max_ && n_ == o.n_;
    }

  private:
    double x_min_, x_max_;
    int n_;
    double dx_;
};

}  // namespace rabipiston

#endif
