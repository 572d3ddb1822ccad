#ifndef RABIPISTON_SCHEDULE_HPP
#define RABIPISTON_SCHEDULE_HPP

#include <array>
#include <cmath>
#include <numbers>
#include <string>

#include "rabipiston/errors.hpp"
#include "rabipiston/fastmath.hpp"

namespace rabipiston {

/// Rabi-angle schedule phi(t) on [0, t_f] with the control boundary
/// conditions phi(0) = 0, phi(t_f) = pi/2, phi'(0) = phi'(t_f) = 0.
///
///  - reference_cubic: the unique cubic satisfying the four conditions,
///    phi(t) = (3pi/2)(t/t_f)^2 - pi (t/t_f)^3.
///  - constrained_quintic: the unique degree-5 polynomial that additionally
///    passes through phi(t_f/3) = pi*c1 and phi(2 t_f/3) = pi*c2; the two
///    interior values are the control parameters being optimized.
class ControlSchedule {
  public:
    enum class Kind { reference_cubic, constrained_quintic };

    static ControlSchedule reference(double t_f) {
        ControlSchedule s(Kind::reference_cubic, t_f);
        s.b_ = {0.0, 0.0, 1.5 * std::numbers::pi, -std::numbers::pi, 0.0, 0.0};
        return s;
    }

    static ControlSchedule quintic(double t_f, double c1, double c2) {
        ControlSchedule s(Kind::constrained_quintic, t_f);
        s.c1_ = c1;
        s.c2_ = c2;
        const double pi = std::numbers::pi;
        // unknowns b2..b5 in sigma = t/t_f; b0 = b1 = 0 from the t=0 conditions
        std::array<std::array<double, 4>, 4> A{{{1.0, 1.0, 1.0, 1.0},
                                                {2.0, 3.0, 4.0, 5.0},
                                                {1.0 / 9, 1.0 / 27, 1.0 / 81, 1.0 / 243},
                                                {4.0 / 9, 8.0 / 27, 16.0 / 81, 32.0 / 243}}};
        std::array<double, 4> rhs{0.5 * pi, 0.0, pi * c1, pi * c2};
        const auto sol = detail::solve_linear<4>(A, rhs);
        s.b_ = {0.0, 0.0, sol[0], sol[1], sol[2], sol[3]};
        return s;
    }

    Kind kind() const { return kind_; }
    double t_f() const { return t_f_; }
    double c1() const { return c1_; }
    double c2() const { return c2_; }

    double phi(double t) const {
        const double sigma = clamp_time(t);
        double acc = 0.0;
        for (int i = 5; i >= 0; --i) acc = acc * sigma + b_[i];
        return acc;
    }

    double phi_dot(double t) const {
        const double sigma = clamp_time(t);
        double acc = 0.0;
        for (int i = 5; i >= 1; --i) acc = acc * sigma + i * b_[i];
        return acc / t_f_;
    }

    std::string describe() const {
        if (kind_ == Kind::reference_cubic) return "reference";
        return "quintic(c1=" + std::to_string(c1_) + ", c2=" + std::to_string(c2_) + ")";
    }

  private:
    ControlSchedule(Kind k, double t_f) : kind_(k), t_f_(t_f) {
        if (!(t_f > 0)) throw ValidationError("schedule: t_f must be > 0");
    }

    double clamp_time(double t) const {
        const double slack = 1e-9 * t_f_;
        if (t < -slack || t > t_f_ + slack)
            throw ValidationError("schedule: time " + std::to_string(t) + " outside [0, " +
                                  std::to_string(t_f_) + "]");
        return std::min(std::max(t / t_f_, 0.0), 1.0);
    }

    Kind kind_;
    double t_f_;
    double c1_ = 0.0, c2_ = 0.0;
    std::array<double, 6> b_{};
};

}  // namespace rabipiston

#endif
