#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "rabipiston/surface.hpp"
#include "test_support.hpp"

using namespace rabipiston;

namespace {

StationarySurface synthetic(int na, int nphi, const std::function<double(double, double)>& e,
                            const std::function<double(double, double)>& p) {
    StationarySurface s;
    for (int i = 0; i < na; ++i) s.a_grid.push_back(1.0 + 0.1 * i);
    for (int j = 0; j < nphi; ++j) s.phi_grid.push_back(0.2 * j);
    for (int i = 0; i < na; ++i)
        for (int j = 0; j < nphi; ++j) {
            s.e_values.push_back(e(s.a_grid[i], s.phi_grid[j]));
            s.p_values.push_back(p(s.a_grid[i], s.phi_grid[j]));
        }
    s.validate();
    return s;
}

}  // namespace

TEST_CASE("interpolation is exact at grid nodes") {
    const auto s = synthetic(
        9, 7, [](double a, double f) { return std::sin(3 * a) + f * f; },
        [](double a, double f) { return 2.0 + std::cos(a + f); });
    SurfaceInterpolator it(s);
    for (int i = 0; i < s.na(); ++i)
        for (int j = 0; j < s.nphi(); ++j) {
            CHECK(it.energy(s.a_grid[i], s.phi_grid[j]) == s.e(i, j));
            CHECK(it.pressure(s.a_grid[i], s.phi_grid[j]) == s.p(i, j));
        }
}

TEST_CASE("linear tables are reproduced everywhere, including derivatives") {
    const auto s = synthetic(
        9, 9, [](double a, double f) { return 0.3 - 1.7 * a + 0.5 * f; },
        [](double a, double f) { return 4.0 - 0.9 * a + 0.05 * f; });
    SurfaceInterpolator it(s);
    for (double a = 1.0; a <= 1.8001; a += 0.037)
        for (double f = 0.0; f <= 1.6001; f += 0.093) {
            CHECK(it.energy(a, f) == Catch::Approx(0.3 - 1.7 * a + 0.5 * f).margin(1e-12));
            CHECK(it.pressure(a, f) == Catch::Approx(4.0 - 0.9 * a + 0.05 * f).margin(1e-12));
            CHECK(it.denergy_da(a, f) == Catch::Approx(-1.7).margin(1e-9));
            CHECK(it.denergy_dphi(a, f) == Catch::Approx(0.5).margin(1e-9));
        }
}

TEST_CASE("smooth tables interpolate to high accuracy between nodes") {
    auto efun = [](double a, double f) { return std::exp(-a) * std::cos(f); };
    auto pfun = [](double a, double f) { return 3.0 + std::sin(a) * (1.0 + 0.2 * f); };
    StationarySurface s;
    for (int i = 0; i < 41; ++i) s.a_grid.push_back(1.0 + 0.025 * i);
    for (int j = 0; j < 41; ++j) s.phi_grid.push_back(0.05 * j);
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j) {
            s.e_values.push_back(efun(s.a_grid[i], s.phi_grid[j]));
            s.p_values.push_back(pfun(s.a_grid[i], s.phi_grid[j]));
        }
    SurfaceInterpolator it(s);
    double emax = 0.0, dmax = 0.0;
    for (double a = 1.05; a <= 1.95; a += 0.013)
        for (double f = 0.1; f <= 1.9; f += 0.017) {
            emax = std::max(emax, std::abs(it.energy(a, f) - efun(a, f)));
            dmax = std::max(dmax, std::abs(it.denergy_dphi(a, f) + std::exp(-a) * std::sin(f)));
        }
    CHECK(emax < 2e-6);
    CHECK(dmax < 2e-4);
}

TEST_CASE("queries outside the hull are rejected") {
    const auto s = synthetic(
        8, 8, [](double a, double f) { return a + f; }, [](double, double) { return 1.0; });
    SurfaceInterpolator it(s);
    CHECK_THROWS_AS(it.energy(0.99, 0.5), ValidationError);
    CHECK_THROWS_AS(it.energy(1.2, 1.4001), ValidationError);
    CHECK_NOTHROW(it.energy(s.a_grid.front(), s.phi_grid.back()));
}

TEST_CASE("surface validation rejects malformed tables") {
    auto good = synthetic(
        8, 8, [](double a, double f) { return a + f; }, [](double, double) { return 1.0; });
    auto bad = good;
    bad.p_values[5] = 0.0;
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = good;
    bad.a_grid[3] = bad.a_grid[2];
    CHECK_THROWS_AS(bad.validate(), ValidationError);
    bad = good;
    bad.e_values.pop_back();
    CHECK_THROWS_AS(bad.validate(), ValidationError);
}

TEST_CASE("surface file round trip preserves every value bit for bit") {
    testsupport::TempDir dir;
    const auto s = synthetic(
        8, 9, [](double a, double f) { return std::sin(a * 7 + f); },
        [](double a, double f) { return 2.0 + 0.001 * std::cos(40 * a * f); });
    save_surface(dir.file("s.txt"), s, {"# header line"});
    const auto r = load_surface(dir.file("s.txt"));
    REQUIRE(r.na() == s.na());
    REQUIRE(r.nphi() == s.nphi());
    CHECK(r.a_grid == s.a_grid);
    CHECK(r.phi_grid == s.phi_grid);
    CHECK(r.e_values == s.e_values);
    CHECK(r.p_values == s.p_values);
    CHECK_THROWS_AS(load_surface(dir.file("missing.txt")), IoError);
}

TEST_CASE("equilibrium root on a synthetic pressure curve") {
    // P(a) = 3 - a and kappa = 1: root of 3 - a = a at a = 1.5
    const auto s = synthetic(
        11, 8, [](double a, double) { return a; }, [](double a, double) { return 3.0 - a; });
    SurfaceInterpolator it(s);
    CHECK(equilibrium_position(it, 1.0, 0.4) == Catch::Approx(1.5).margin(1e-10));
    // no crossing for a huge spring constant
    CHECK_THROWS_AS(equilibrium_position(it, 50.0, 0.4), ValidationError);
}
