#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <fstream>
#include <numbers>

#include "rabipiston/fft.hpp"
#include "rabipiston/grid.hpp"
#include "rabipiston/spinor.hpp"
#include "test_support.hpp"

using namespace rabipiston;

namespace {

Grid small_grid() { return Grid(-1.0, 3.0, 512); }

SpinorField box_field(const Grid& g, double a) {
    SpinorField f(g);
    for (int j = 0; j < g.n(); ++j) {
        const double x = g.x(j);
        if (x > 0 && x < a) f.up[j] = std::sqrt(2.0 / a) * std::sin(std::numbers::pi * x / a);
    }
    return f;
}

}  // namespace

TEST_CASE("grid geometry and wavenumber ordering") {
    const Grid g(-2.0, 6.0, 4096);
    CHECK(g.dx() == Catch::Approx(8.0 / 4096));
    CHECK(g.x(0) == -2.0);
    CHECK(g.x(4095) == Catch::Approx(6.0 - g.dx()));
    CHECK(g.k(0) == 0.0);
    CHECK(g.k(1) == Catch::Approx(2 * std::numbers::pi / 8.0));
    CHECK(g.k(4095) == Catch::Approx(-2 * std::numbers::pi / 8.0));
    CHECK(std::abs(g.k(2048)) == Catch::Approx(std::numbers::pi / g.dx()));
}

TEST_CASE("norm of the zero field is zero") {
    SpinorField f(small_grid());
    CHECK(norm(f) == 0.0);
}

TEST_CASE("norm of an analytically normalized box mode is one") {
    const auto f = box_field(small_grid(), 1.3);
    CHECK(norm(f) == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("normalize rescales without touching direction") {
    auto f = box_field(small_grid(), 1.0);
    for (auto& v : f.up) v *= 2.0;  // norm 4
    const int probe = 300;
    const Complex before = f.up[probe];
    normalize(f);
    CHECK(norm(f) == Catch::Approx(1.0).margin(1e-12));
    CHECK(std::abs(f.up[probe] - before * 0.5) < 1e-14);

    // already unit norm: unchanged
    const Complex post = f.up[probe];
    normalize(f);
    CHECK(std::abs(f.up[probe] - post) < 1e-14);
}

TEST_CASE("normalizing the zero field fails") {
    SpinorField f(small_grid());
    CHECK_THROWS_AS(normalize(f), NumericalError);
}

TEST_CASE("magnetization of polarized and balanced fields") {
    auto f = box_field(small_grid(), 1.0);
    normalize(f);
    CHECK(magnetization(f) == Catch::Approx(1.0).margin(1e-12));

    SpinorField bal(small_grid());
    for (int j = 0; j < bal.n(); ++j) bal.up[j] = bal.down[j] = f.up[j] / std::sqrt(2.0);
    CHECK(magnetization(bal) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("Parseval identity and transform round trip") {
    const Grid g = small_grid();
    auto f = box_field(g, 1.1);
    normalize(f);

    detail::Fft1D fft(g.n());
    std::copy(f.up.begin(), f.up.end(), fft.data());
    fft.forward();
    double spectral = 0.0;
    for (int j = 0; j < g.n(); ++j) spectral += std::norm(fft.data()[j]);
    spectral *= g.dx() / g.n();
    CHECK(spectral == Catch::Approx(norm(f)).margin(1e-12));

    fft.backward();
    double max_err = 0.0;
    for (int j = 0; j < g.n(); ++j)
        max_err = std::max(max_err,
                           std::abs(fft.data()[j] / static_cast<double>(g.n()) - f.up[j]));
    CHECK(max_err < 1e-12);
}

TEST_CASE("field CSV snapshot has the documented columns") {
    testsupport::TempDir dir;
    const Grid g(-0.5, 0.5, 8);
    SpinorField f(g);
    f.up[3] = Complex(0.25, -0.5);
    f.down[3] = Complex(-1.0, 2.0);
    write_field_csv(dir.file("field.csv"), f, {"# probe"});

    std::ifstream in(dir.file("field.csv"));
    std::string line;
    std::getline(in, line);
    CHECK(line == "# probe");
    std::getline(in, line);
    CHECK(line == "x,re_up,im_up,re_down,im_down");
    for (int i = 0; i < 4; ++i) std::getline(in, line);
    double x, ru, iu, rd, id;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf", &x, &ru, &iu, &rd, &id) == 5);
    CHECK(x == Catch::Approx(g.x(3)));
    CHECK(ru == Catch::Approx(0.25));
    CHECK(iu == Catch::Approx(-0.5));
    CHECK(rd == Catch::Approx(-1.0));
    CHECK(id == Catch::Approx(2.0));
}

TEST_CASE("boundary density reports edge leakage") {
    const Grid g = small_grid();
    SpinorField f(g);
    f.up[0] = 3.0;
    f.down[g.n() - 1] = Complex(0.0, 2.0);
    CHECK(boundary_density(f) == Catch::Approx(13.0));
}
