#include <doctest.h>

#include <cmath>

#include "sfwm/errors.hpp"
#include "sfwm/material.hpp"
#include "sfwm/units.hpp"

using namespace sfwm;

namespace {

// Three-term Malitson fit of fused silica, written out independently.
double silica_reference(double lambda_nm)
{
    const double l2 = (lambda_nm / 1000.0) * (lambda_nm / 1000.0);
    const double n2 = 1.0 + 0.6961663 * l2 / (l2 - 0.0684043 * 0.0684043) +
                      0.4079426 * l2 / (l2 - 0.1162414 * 0.1162414) + 0.8974794 * l2 / (l2 - 9.896161 * 9.896161);
    return std::sqrt(n2);
}

}  // namespace

TEST_CASE("silica index matches tabulated values")
{
    // Handbook values for fused silica.
    CHECK(cladding_index(632.8) == doctest::Approx(1.45702).epsilon(1e-5));
    CHECK(cladding_index(1550.0) == doctest::Approx(1.44402).epsilon(1e-5));
    CHECK(cladding_index(587.6) == doctest::Approx(1.45846).epsilon(1e-5));
}

TEST_CASE("silica index agrees with an independent evaluation across the window")
{
    for (double lambda = 250.0; lambda < 2500.0; lambda += 37.5) {
        CHECK(std::abs(cladding_index(lambda) - silica_reference(lambda)) < 1e-14);
    }
}

TEST_CASE("silica index is normally dispersive in the visible and near infrared")
{
    double previous = cladding_index(400.0);
    for (double lambda = 410.0; lambda <= 1600.0; lambda += 10.0) {
        const double n = cladding_index(lambda);
        CHECK(n < previous);
        previous = n;
    }
}

TEST_CASE("cladding index rejects wavelengths outside the fit window")
{
    CHECK_THROWS_AS(cladding_index(150.0), DomainError);
    CHECK_THROWS_AS(cladding_index(3000.0), DomainError);
    CHECK_THROWS_AS(cladding_index(-705.0), DomainError);
}

TEST_CASE("core index follows the numerical aperture")
{
    for (double na : {0.05, 0.1, 0.2, 0.3}) {
        const double n2 = cladding_index(705.0);
        CHECK(core_index(705.0, na) == doctest::Approx(std::sqrt(n2 * n2 + na * na)).epsilon(1e-15));
    }
    const FiberParams fiber{1.45, 0.2, 0.0, 0.0, 0.1};
    CHECK(core_index(705.0, fiber) == core_index(705.0, 0.2));
}

TEST_CASE("unit conversions are mutually inverse")
{
    for (double lambda : {600.0, 705.0, 800.0}) {
        CHECK(wavelength_nm(angular_frequency(lambda)) == doctest::Approx(lambda).epsilon(1e-14));
        CHECK(vacuum_wavenumber(lambda) == doctest::Approx(2.0 * kPi / (lambda * 1e-3)).epsilon(1e-14));
    }
    // Energy conservation: 2/lp = 1/ls + 1/li.
    const double li = conjugate_wavelength(705.0, 800.0);
    CHECK(1.0 / 800.0 + 1.0 / li == doctest::Approx(2.0 / 705.0).epsilon(1e-14));
}

TEST_CASE("core index limits")
{
    CHECK(core_index(705.0, 0.0) == cladding_index(705.0));
    // First-order expansion of the index step.
    const double n2 = cladding_index(705.0);
    const double step = core_index(705.0, 0.167) - n2;
    CHECK(step == doctest::Approx(0.167 * 0.167 / (2.0 * n2)).epsilon(0.01));
    CHECK(n2 > 1.45);
    CHECK(n2 < 1.46);
}
