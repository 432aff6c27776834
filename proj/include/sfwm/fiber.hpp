#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace sfwm {

enum class Polarization { x, y };
enum class Parity { even, odd };
enum class CladdingMaterial { fused_silica };

std::string_view to_string(Polarization p);
std::string_view to_string(Parity p);
std::string_view to_string(CladdingMaterial m);
CladdingMaterial parse_cladding_material(std::string_view name);

/// Transverse mode label LP_lm^{pq} of a weakly guiding birefringent fiber.
struct LPMode {
    int l = 0;
    int m = 1;
    Polarization polarization = Polarization::x;
    Parity parity = Parity::even;

    /// Parity as the signed integer q (+1 even, -1 odd).
    int q() const noexcept { return parity == Parity::even ? 1 : -1; }

    /// Throws InvalidMode for l < 0, m < 1 or an odd l = 0 mode.
    void validate() const;

    /// Compact label in the style "01x", "11ey", "21oy". Indices of 10 or
    /// more are separated as "12_3ex".
    std::string label() const;

    friend auto operator<=>(const LPMode&, const LPMode&) = default;
};

/// Parses labels produced by LPMode::label(); an optional "LP" prefix is
/// accepted. Throws InvalidMode on malformed text.
LPMode parse_mode(std::string_view text);

/// Four-parameter birefringent step-index fiber model plus length and
/// cladding dispersion.
struct FiberParams {
    double core_radius_um = 1.45;
    double numerical_aperture = 0.20;
    double delta = 0.0;    // polarization birefringence
    double delta_p = 0.0;  // parity birefringence
    double length_m = 0.145;
    CladdingMaterial cladding = CladdingMaterial::fused_silica;

    /// Throws DomainError when any invariant is violated.
    void validate() const;

    friend bool operator==(const FiberParams&, const FiberParams&) = default;
};

}  // namespace sfwm
