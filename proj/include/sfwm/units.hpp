#pragma once

#include <numbers>

namespace sfwm {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299'792'458.0;  // m/s

/// Vacuum wavelength (nm) to angular frequency (rad/s).
inline constexpr double angular_frequency(double wavelength_nm)
{
    return 2.0 * kPi * kSpeedOfLight / (wavelength_nm * 1e-9);
}

/// Angular frequency (rad/s) to vacuum wavelength (nm).
inline constexpr double wavelength_nm(double omega)
{
    return 2.0 * kPi * kSpeedOfLight / omega * 1e9;
}

/// Vacuum wavenumber in 1/um.
inline constexpr double vacuum_wavenumber(double wavelength_nm)
{
    return 2.0 * kPi / (wavelength_nm * 1e-3);
}

/// Wavelength of the partner photon fixed by energy conservation with two
/// spectrally degenerate pump photons: 1/ls + 1/li = 2/lp.
inline constexpr double conjugate_wavelength(double pump_nm, double partner_nm)
{
    return 1.0 / (2.0 / pump_nm - 1.0 / partner_nm);
}

}  // namespace sfwm
