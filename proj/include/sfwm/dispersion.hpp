#pragma once

#include <vector>

#include "sfwm/fiber.hpp"

namespace sfwm {

/// Guided-mode solution of the scalar LP problem, unfolded by polarization
/// and parity. Transverse parameters u, v and k are in 1/um.
struct ModeSolution {
    LPMode mode;
    double wavelength_nm = 0.0;
    double core_radius_um = 0.0;
    double n1 = 0.0;
    double n2 = 0.0;
    double n0 = 0.0;     // scalar (circularly symmetric) effective index
    double n_eff = 0.0;  // after birefringent unfolding
    double u = 0.0;
    double v = 0.0;
    double k = 0.0;

    double U() const noexcept { return u * core_radius_um; }
    double W() const noexcept { return v * core_radius_um; }
};

/// Normalized frequency V = 2 pi r0 NA / lambda.
double v_number(const FiberParams& fiber, double wavelength_nm);

/// Cutoff V of LP_lm: the (m-1)-th zero of J_1 for l = 0 (0 for LP01),
/// otherwise the m-th zero of J_{l-1}.
double lp_cutoff_v(int l, int m);

/// Upper edge of the bracket holding the LP_lm root in U: the m-th zero of J_l.
double lp_bracket_upper(int l, int m);

/// Pole-free form of the LP characteristic equation,
///   U J_{l+1}(U) - W K_{l+1}(W)/K_l(W) J_l(U),  W = sqrt(V^2 - U^2),
/// obtained from continuity of F and dF/dr at the core boundary. Defined on
/// 0 < U < V.
double characteristic_residual(int l, double U, double V);

/// Scalar effective index n0 of LP_lm, the m-th root in descending n0.
/// Throws ModeNotGuided when no root exists in (n2, n1).
double solve_lp_scalar_index(const FiberParams& fiber, int l, int m, double wavelength_nm);

/// Polarization/parity unfolding: n_ey = n0, n_oy = n0 + Dp, n_ex = n0 + D,
/// n_ox = n0 + D + Dp.
double unfold_index(double n0, const LPMode& mode, const FiberParams& fiber);

ModeSolution solve_mode(const FiberParams& fiber, const LPMode& mode, double wavelength_nm);

/// k = n_eff * omega / c in 1/um. omega in rad/s.
double wavenumber(const LPMode& mode, const FiberParams& fiber, double omega);

/// Every unfolded LP mode whose scalar mode is guided, sorted by
/// (l, m, polarization, parity).
std::vector<LPMode> supported_modes(const FiberParams& fiber, double wavelength_nm);

enum class MfdDefinition {
    petermann_i,   // near-field second-moment diameter
    petermann_ii,  // derivative (far-field) definition
};

/// Mode field diameter of LP01 in um.
double mode_field_diameter(const FiberParams& fiber, double wavelength_nm,
                           MfdDefinition definition = MfdDefinition::petermann_i);

}  // namespace sfwm
