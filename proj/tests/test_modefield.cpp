#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/modefield.hpp"
#include "sfwm/units.hpp"

using namespace sfwm;

namespace {

const FiberParams kFitted{1.45, 0.20, 2.38e-4, 4.57e-4, 0.145};

const LPMode k01x{0, 1, Polarization::x, Parity::even};
const LPMode k11ex{1, 1, Polarization::x, Parity::even};
const LPMode k11ox{1, 1, Polarization::x, Parity::odd};

/// Power of a field by a fine midpoint rule on a polar grid, independent of
/// the library's Gauss-Legendre panels.
double brute_force_power(const TransverseField& f, double r_max)
{
    const int nr = 6000;
    const int nphi = 64;
    const double dr = r_max / nr;
    const double dphi = 2.0 * kPi / nphi;
    double sum = 0.0;
    for (int i = 0; i < nr; ++i) {
        const double r = (i + 0.5) * dr;
        for (int j = 0; j < nphi; ++j) {
            const double g = f(r, j * dphi);
            sum += g * g * r;
        }
    }
    return sum * dr * dphi;
}

}  // namespace

TEST_CASE("fields carry unit power")
{
    for (const auto& mode : {k01x, k11ex, k11ox}) {
        const TransverseField f(kFitted, mode, 705.0);
        CHECK(brute_force_power(f, 25.0) == doctest::Approx(1.0).epsilon(1e-5));
        CHECK(field_inner_product(f, f) == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("distinct modes are orthogonal")
{
    const TransverseField a(kFitted, k01x, 705.0);
    const TransverseField b(kFitted, k11ex, 705.0);
    const TransverseField c(kFitted, k11ox, 705.0);
    CHECK(std::abs(field_inner_product(a, b)) < 1e-14);
    CHECK(std::abs(field_inner_product(b, c)) < 1e-14);
    const FiberParams wide{4.0, 0.2, 0.0, 0.0, 0.1};
    const TransverseField lp01(wide, k01x, 705.0);
    const TransverseField lp02(wide, LPMode{0, 2, Polarization::x, Parity::even}, 705.0);
    // Radially orthogonal solutions of the same l; limited by the solver.
    CHECK(std::abs(field_inner_product(lp01, lp02)) < 1e-6);
}

TEST_CASE("azimuthal parity")
{
    const TransverseField even(kFitted, k11ex, 705.0);
    const TransverseField odd(kFitted, k11ox, 705.0);
    for (double phi : {0.1, 0.7, 2.0, 3.0}) {
        CHECK(even(1.0, -phi) == doctest::Approx(even(1.0, phi)));
        CHECK(odd(1.0, -phi) == doctest::Approx(-odd(1.0, phi)));
        // A rotation by pi/2 turns the even lobe into the odd one.
        CHECK(even(1.0, phi) == doctest::Approx(odd(1.0, phi + kPi / 2.0)));
    }
    CHECK(azimuthal_norm_squared(0) == doctest::Approx(2.0 * kPi));
    CHECK(azimuthal_norm_squared(2) == doctest::Approx(kPi));
    CHECK_THROWS_AS(azimuthal_field(0, Parity::odd, 0.3), InvalidMode);
}

TEST_CASE("field and slope are continuous at the core boundary")
{
    for (const auto& mode : {k01x, k11ex}) {
        const auto s = solve_mode(kFitted, mode, 705.0);
        const double r0 = kFitted.core_radius_um;
        const double eps = 1e-9;
        CHECK(radial_field(s, r0 - eps) == doctest::Approx(radial_field(s, r0 + eps)).epsilon(1e-7));
        CHECK(radial_field_derivative(s, r0 - eps) ==
              doctest::Approx(radial_field_derivative(s, r0 + eps)).epsilon(1e-6));
        // Derivative agrees with a central difference inside the core.
        const double h = 1e-6;
        const double fd = (radial_field(s, 0.7 + h) - radial_field(s, 0.7 - h)) / (2.0 * h);
        CHECK(radial_field_derivative(s, 0.7) == doctest::Approx(fd).epsilon(1e-6));
    }
}

TEST_CASE("field decays outside the core")
{
    const TransverseField f(kFitted, k01x, 705.0);
    double previous = f.radial(kFitted.core_radius_um);
    for (double r = 1.6; r < 10.0; r += 0.5) {
        const double value = f.radial(r);
        CHECK(value < previous);
        CHECK(value > 0.0);
        previous = value;
    }
}

TEST_CASE("grid dump has one line per sample")
{
    const TransverseField f(kFitted, k11ex, 705.0);
    const std::string text = dump_field_grid(f, 5, 4, 3.0);
    std::istringstream in(text);
    std::string line;
    std::getline(in, line);
    CHECK(line == "r_um,phi_rad,re_g_per_um");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == 20);
}

TEST_CASE("radial and azimuthal factors at special points")
{
    const auto s0 = solve_mode(kFitted, k01x, 705.0);
    const auto s1 = solve_mode(kFitted, k11ex, 705.0);
    CHECK(radial_field(s0, 0.0) == 1.0);
    CHECK(radial_field(s1, 0.0) == 0.0);
    CHECK(azimuthal_field(1, Parity::even, 0.0) == 1.0);
    CHECK(azimuthal_field(1, Parity::odd, 0.0) == 0.0);
    CHECK(azimuthal_field(0, Parity::even, 1.234) == 1.0);
}

TEST_CASE("fundamental field is azimuthally uniform; LP11 has two lobes")
{
    const TransverseField lp01(kFitted, k01x, 705.0);
    for (double phi = 0.0; phi < 6.28; phi += 0.3) CHECK(lp01(0.8, phi) == lp01(0.8, 0.0));
    const TransverseField lp11(kFitted, k11ex, 705.0);
    const int n = 720;
    int maxima = 0;
    for (int i = 0; i < n; ++i) {
        const auto mag = [&](int j) { return std::abs(lp11(1.0, 2.0 * kPi * ((j + n) % n) / n)); };
        if (mag(i) > mag(i - 1) && mag(i) >= mag(i + 1)) ++maxima;
    }
    CHECK(maxima == 2);
    CHECK(evaluate_field(lp11, 1.0, 0.3) == lp11(1.0, 0.3));
}
