#pragma once

#include "sfwm/fiber.hpp"

namespace sfwm {

inline constexpr double kSellmeierMinNm = 200.0;
inline constexpr double kSellmeierMaxNm = 2500.0;

/// Cladding refractive index n2 from the material's Sellmeier formula.
/// Throws DomainError outside (200 nm, 2500 nm).
double cladding_index(double wavelength_nm, CladdingMaterial material = CladdingMaterial::fused_silica);

/// Core index n1 = sqrt(n2^2 + NA^2). NA is wavelength independent.
double core_index(double wavelength_nm, double numerical_aperture,
                  CladdingMaterial material = CladdingMaterial::fused_silica);
double core_index(double wavelength_nm, const FiberParams& fiber);

}  // namespace sfwm
