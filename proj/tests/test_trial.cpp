#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <random>

#include "rabipiston/trial.hpp"

using namespace rabipiston;

namespace {

/// The raw two-parameter energy written out independently of the library:
/// E(n) = pi^2/(2a^2) + (3g/4a) + Delta/2 - (3g/2a + Delta) n + (3g/2a) n^2.
double raw_energy(double g, double delta, double a, double n) {
    const double pi2 = std::numbers::pi * std::numbers::pi;
    return 0.5 * pi2 / (a * a) + 0.75 * g / a + 0.5 * delta - (1.5 * g / a + delta) * n +
           1.5 * g / a * n * n;
}

/// Brute-force minimum over the occupation: coarse scan plus ternary refine.
double scan_minimum(double g, double delta, double a) {
    double best_n = 0.0, best = raw_energy(g, delta, a, 0.0);
    for (int i = 1; i <= 4000; ++i) {
        const double n = i / 4000.0;
        const double e = raw_energy(g, delta, a, n);
        if (e < best) {
            best = e;
            best_n = n;
        }
    }
    double lo = std::max(0.0, best_n - 1e-3), hi = std::min(1.0, best_n + 1e-3);
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3, m2 = hi - (hi - lo) / 3;
        if (raw_energy(g, delta, a, m1) < raw_energy(g, delta, a, m2))
            hi = m2;
        else
            lo = m1;
    }
    return raw_energy(g, delta, a, 0.5 * (lo + hi));
}

}  // namespace

TEST_CASE("occupation law: balanced, saturated, midpoint") {
    CHECK(trial_occupation({5.0, 0.0, 1.0}) == 0.5);
    // a*delta = (3/2) g_s saturates
    CHECK(trial_occupation({5.0, 7.5, 1.0}) == 1.0);
    CHECK(trial_occupation({5.0, 30.0, 1.0}) == 1.0);
    // a*delta = (3/4) g_s sits at 3/4
    CHECK(trial_occupation({5.0, 3.75, 1.0}) == Catch::Approx(0.75));
}

TEST_CASE("occupation is nondecreasing in delta and in a") {
    double prev = 0.0;
    for (double d = 0.0; d <= 12.0; d += 0.25) {
        const double n = trial_occupation({5.0, d, 1.2});
        CHECK(n >= prev);
        prev = n;
    }
    prev = 0.0;
    for (double a = 0.2; a <= 4.0; a += 0.1) {
        const double n = trial_occupation({5.0, 4.0, a});
        CHECK(n >= prev);
        prev = n;
    }
}

TEST_CASE("energy at zero Rabi strength") {
    const double e = trial_energy({5.0, 0.0, 1.0});
    CHECK(e == Catch::Approx(0.5 * std::numbers::pi * std::numbers::pi + 15.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("energy branches join continuously at the critical point") {
    const double g = 5.0, a = 1.3;
    const double dcr = trial_critical_delta({g, 0.0, a});
    const double e0 = 0.5 * std::numbers::pi * std::numbers::pi / (a * a) + 0.375 * g / a;
    const double below = e0 - a * dcr * dcr / (6.0 * g);
    const double above = e0 + 0.375 * g / a - 0.5 * dcr;
    CHECK(std::abs(below - above) < 1e-12);
    CHECK(trial_energy({g, dcr * (1 - 1e-12), a}) ==
          Catch::Approx(trial_energy({g, dcr * (1 + 1e-12), a})).margin(1e-10));
}

TEST_CASE("closed form equals brute-force minimization of the raw energy") {
    std::mt19937 rng(20240811);
    std::uniform_real_distribution<double> pick_a(0.3, 3.0), pick_d(0.0, 12.0),
        pick_g(1.0, 8.0);
    for (int trial = 0; trial < 40; ++trial) {
        const double g = pick_g(rng), d = pick_d(rng), a = pick_a(rng);
        const double brute = scan_minimum(g, d, a);
        CHECK(trial_energy({g, d, a}) == Catch::Approx(brute).margin(1e-10));
    }
}

TEST_CASE("pressure shift values and a-independence below the critical point") {
    CHECK(trial_pressure_shift({5.0, 0.0, 1.0}) == 0.0);
    const double shift1 = trial_pressure_shift({5.0, 2.0, 0.7});
    const double shift2 = trial_pressure_shift({5.0, 2.0, 1.9});
    CHECK(shift1 == Catch::Approx(4.0 / 30.0).epsilon(1e-14));
    CHECK(shift1 == shift2);
}

TEST_CASE("pressure shift matches centered differences of the energy") {
    const double h = 1e-6;
    auto fd_shift = [&](double g, double d, double a) {
        auto pressure = [&](double delta) {
            return -(trial_energy({g, delta, a + h}) - trial_energy({g, delta, a - h})) / (2 * h);
        };
        return pressure(d) - pressure(0.0);
    };
    // one point per branch, away from the kink
    CHECK(fd_shift(5.0, 2.0, 1.0) ==
          Catch::Approx(trial_pressure_shift({5.0, 2.0, 1.0})).margin(1e-6));
    CHECK(fd_shift(5.0, 9.0, 1.4) ==
          Catch::Approx(trial_pressure_shift({5.0, 9.0, 1.4})).margin(1e-6));
}

TEST_CASE("pressure shift is continuous across the polarization boundary") {
    const double g = 5.0, d = 5.0;
    const double acr = trial_critical_length({g, d, 1.0});
    CHECK(acr == Catch::Approx(1.5));
    const double eps = 1e-9;
    CHECK(trial_pressure_shift({g, d, acr - eps}) ==
          Catch::Approx(trial_pressure_shift({g, d, acr + eps})).margin(1e-7));
    // decreasing once polarized
    double prev = trial_pressure_shift({g, d, acr});
    for (double a = acr; a <= 3.0; a += 0.05) {
        const double v = trial_pressure_shift({g, d, a});
        CHECK(v <= prev + 1e-14);
        prev = v;
    }
}

TEST_CASE("trial parameter validation") {
    CHECK_THROWS_AS(trial_occupation({-1.0, 1.0, 1.0}), ValidationError);
    CHECK_THROWS_AS(trial_energy({5.0, 1.0, -0.5}), ValidationError);
    CHECK_THROWS_AS(trial_pressure_shift({5.0, -2.0, 1.0}), ValidationError);
}
