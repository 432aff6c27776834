#include "sfwm/material.hpp"

#include <cmath>
#include <string>

#include "sfwm/errors.hpp"

namespace sfwm {

namespace {

// Malitson (1965) three-term Sellmeier coefficients for fused silica,
// wavelength in um.
constexpr double kSilicaB[3] = {0.6961663, 0.4079426, 0.8974794};
constexpr double kSilicaC[3] = {0.0684043, 0.1162414, 9.896161};

double silica_index(double wavelength_um)
{
    const double l2 = wavelength_um * wavelength_um;
    double n2 = 1.0;
    for (int i = 0; i < 3; ++i) {
        n2 += kSilicaB[i] * l2 / (l2 - kSilicaC[i] * kSilicaC[i]);
    }
    return std::sqrt(n2);
}

}  // namespace

double cladding_index(double wavelength_nm, CladdingMaterial material)
{
    if (!(wavelength_nm > kSellmeierMinNm && wavelength_nm < kSellmeierMaxNm)) {
        throw DomainError("wavelength " + std::to_string(wavelength_nm) +
                          " nm outside the Sellmeier validity window (200, 2500) nm");
    }
    switch (material) {
    case CladdingMaterial::fused_silica:
        return silica_index(wavelength_nm * 1e-3);
    }
    throw DomainError("unknown cladding material");
}

double core_index(double wavelength_nm, double numerical_aperture, CladdingMaterial material)
{
    if (!(numerical_aperture >= 0.0 && numerical_aperture < 1.0)) {
        throw DomainError("numerical aperture must lie in [0, 1)");
    }
    const double n2 = cladding_index(wavelength_nm, material);
    return std::sqrt(n2 * n2 + numerical_aperture * numerical_aperture);
}

double core_index(double wavelength_nm, const FiberParams& fiber)
{
    return core_index(wavelength_nm, fiber.numerical_aperture, fiber.cladding);
}

}  // namespace sfwm
