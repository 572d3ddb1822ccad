#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "oracles.hpp"
#include "rabipiston/potentials.hpp"

using namespace rabipiston;

namespace {
const WallSpec wall(100.0, 10.0, 0.01);
}

TEST_CASE("left wall ramp values") {
    CHECK(left_wall(0.0, wall) == Catch::Approx(50.0));
    CHECK(left_wall(wall.slope_s, wall) == Catch::Approx(0.0).margin(1e-12));
    CHECK(left_wall(-2 * wall.slope_s, wall) == 100.0);
    // monotone nonincreasing
    double prev = left_wall(-0.05, wall);
    for (double x = -0.05; x <= 0.05; x += 1e-4) {
        const double v = left_wall(x, wall);
        CHECK(v <= prev + 1e-12);
        prev = v;
    }
}

TEST_CASE("piston barrier ramp values") {
    CHECK(piston_barrier(0.0, wall) == Catch::Approx(5.0));
    CHECK(piston_barrier(-wall.slope_s, wall) == Catch::Approx(0.0).margin(1e-12));
    CHECK(piston_barrier(2 * wall.slope_s, wall) == 10.0);
}

TEST_CASE("barrier derivative: midpoint, edges, and normalization") {
    const double s = wall.slope_s;
    CHECK(piston_barrier_deriv(0.0, wall) ==
          Catch::Approx(10.0 * std::numbers::pi / (4 * s)));
    CHECK(piston_barrier_deriv(s, wall) == 0.0);
    CHECK(piston_barrier_deriv(-s, wall) == 0.0);
    for (double z = -2 * s; z <= 2 * s; z += s / 17) CHECK(piston_barrier_deriv(z, wall) >= 0.0);

    const double total =
        oracles::integrate([&](double z) { return piston_barrier_deriv(z, wall); }, -s, s, 1e-12);
    CHECK(total == Catch::Approx(wall.v_piston).margin(1e-6));
}

TEST_CASE("finite differences of the barrier match the analytic derivative") {
    const double h = 1e-6;
    for (double z = -0.0157; z <= 0.0157; z += 9.3e-4) {
        if (std::abs(std::abs(z) - wall.slope_s) < 2 * h) continue;  // kink in V''
        const double fd = (piston_barrier(z + h, wall) - piston_barrier(z - h, wall)) / (2 * h);
        CHECK(fd == Catch::Approx(piston_barrier_deriv(z, wall)).margin(5e-3));
    }
}

TEST_CASE("combined potential is nonnegative everywhere") {
    const double a = 1.8;
    for (double x = -2.0; x <= 6.0; x += 0.003)
        CHECK(left_wall(x, wall) + piston_barrier(x - a, wall) >= 0.0);
}

TEST_CASE("wall spec validation") {
    CHECK_THROWS_AS(WallSpec(5.0, 10.0, 0.01), ValidationError);   // left below piston
    CHECK_THROWS_AS(WallSpec(100.0, 10.0, 0.0), ValidationError);  // flat ramp
    CHECK_THROWS_AS(WallSpec(100.0, 0.0, 0.01), ValidationError);  // no barrier
}
