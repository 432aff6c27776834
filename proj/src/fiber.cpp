#include "sfwm/fiber.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <string>

#include "sfwm/errors.hpp"

namespace sfwm {

std::string_view to_string(Polarization p)
{
    return p == Polarization::x ? "x" : "y";
}

std::string_view to_string(Parity p)
{
    return p == Parity::even ? "even" : "odd";
}

std::string_view to_string(CladdingMaterial m)
{
    switch (m) {
    case CladdingMaterial::fused_silica:
        return "fused_silica";
    }
    return "unknown";
}

CladdingMaterial parse_cladding_material(std::string_view name)
{
    if (name == "fused_silica" || name == "fused-silica" || name == "silica") {
        return CladdingMaterial::fused_silica;
    }
    throw DomainError("unknown cladding material '" + std::string(name) + "'");
}

ModeNotGuided::ModeNotGuided(int l, int m, double wavelength_nm)
    : Error("LP" + std::to_string(l) + std::to_string(m) + " is not guided at " +
            std::to_string(wavelength_nm) + " nm"),
      l_(l), m_(m), wavelength_nm_(wavelength_nm)
{
}

void LPMode::validate() const
{
    if (l < 0 || m < 1) {
        throw InvalidMode("LP mode indices require l >= 0 and m >= 1");
    }
    if (l == 0 && parity == Parity::odd) {
        throw InvalidMode("l = 0 modes have even parity only");
    }
}

std::string LPMode::label() const
{
    std::string out;
    if (l < 10 && m < 10) {
        out = std::to_string(l) + std::to_string(m);
    } else {
        out = std::to_string(l) + "_" + std::to_string(m);
    }
    if (l > 0) {
        out += parity == Parity::even ? 'e' : 'o';
    }
    out += polarization == Polarization::x ? 'x' : 'y';
    return out;
}

LPMode parse_mode(std::string_view text)
{
    const auto fail = [&] { return InvalidMode("malformed mode label '" + std::string(text) + "'"); };
    std::string_view s = text;
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    if (s.size() >= 2 && (s[0] == 'L' || s[0] == 'l') && (s[1] == 'P' || s[1] == 'p')) {
        s.remove_prefix(2);
    }
    std::size_t digits = 0;
    while (digits < s.size() && (std::isdigit(static_cast<unsigned char>(s[digits])) || s[digits] == '_')) {
        ++digits;
    }
    const std::string_view indices = s.substr(0, digits);
    std::string_view tail = s.substr(digits);

    LPMode mode;
    const auto parse_int = [&](std::string_view v) {
        int value = 0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc{} || ptr != v.data() + v.size() || v.empty()) throw fail();
        return value;
    };
    if (const auto us = indices.find('_'); us != std::string_view::npos) {
        mode.l = parse_int(indices.substr(0, us));
        mode.m = parse_int(indices.substr(us + 1));
    } else if (indices.size() == 2) {
        mode.l = indices[0] - '0';
        mode.m = indices[1] - '0';
    } else {
        throw fail();
    }

    if (tail.size() == 2) {
        if (tail[0] == 'e') {
            mode.parity = Parity::even;
        } else if (tail[0] == 'o') {
            mode.parity = Parity::odd;
        } else {
            throw fail();
        }
        tail.remove_prefix(1);
    } else if (tail.size() != 1 || mode.l != 0) {
        throw fail();
    }
    if (tail[0] == 'x') {
        mode.polarization = Polarization::x;
    } else if (tail[0] == 'y') {
        mode.polarization = Polarization::y;
    } else {
        throw fail();
    }
    mode.validate();
    return mode;
}

void FiberParams::validate() const
{
    if (!(core_radius_um > 0.0) || !std::isfinite(core_radius_um)) {
        throw DomainError("core radius must be positive");
    }
    if (!(numerical_aperture > 0.0 && numerical_aperture < 1.0)) {
        throw DomainError("numerical aperture must lie in (0, 1)");
    }
    if (!(length_m > 0.0) || !std::isfinite(length_m)) {
        throw DomainError("fiber length must be positive");
    }
    if (!(std::abs(delta) < 1e-2) || !(std::abs(delta_p) < 1e-2)) {
        throw DomainError("birefringence offsets must satisfy |delta|, |delta_p| < 1e-2");
    }
}

}  // namespace sfwm
