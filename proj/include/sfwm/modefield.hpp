#pragma once

#include <string>

#include "sfwm/dispersion.hpp"

namespace sfwm {

/// Radial factor F(r) of a guided LP mode, before normalization:
/// J_l(u r) inside the core and J_l(u r0)/K_l(v r0) K_l(v r) outside.
double radial_field(const ModeSolution& mode, double r_um);

/// dF/dr of radial_field.
double radial_field_derivative(const ModeSolution& mode, double r_um);

/// Azimuthal factor G: cos(l phi) for even, sin(l phi) for odd, 1 for l = 0.
/// Throws InvalidMode for an odd l = 0 mode.
double azimuthal_field(int l, Parity parity, double phi);

/// Integral of G^2 over [0, 2 pi): 2 pi for l = 0, pi otherwise.
double azimuthal_norm_squared(int l);

/// Outer edge of the radial integration domain, r0 + 12 / v.
double radial_cutoff_um(const ModeSolution& mode);

/// Unit-power transverse field g(r, phi) = c F(r) G(phi).
class TransverseField {
public:
    TransverseField(const FiberParams& fiber, const LPMode& mode, double wavelength_nm);
    explicit TransverseField(const ModeSolution& solution);

    const LPMode& mode() const noexcept { return solution_.mode; }
    const ModeSolution& solution() const noexcept { return solution_; }

    /// Scale c such that the integral of |g|^2 over the plane is one.
    double normalization() const noexcept { return normalization_; }

    /// Normalized radial factor c F(r).
    double radial(double r_um) const { return normalization_ * radial_field(solution_, r_um); }

    double operator()(double r_um, double phi) const;

private:
    ModeSolution solution_;
    double normalization_;
};

double evaluate_field(const TransverseField& field, double r_um, double phi);

/// Integral of g_a g_b over the transverse plane. Separable, so evaluated
/// as a radial quadrature times the closed-form azimuthal integral.
double field_inner_product(const TransverseField& a, const TransverseField& b);

/// CSV grid dump with header r_um,phi_rad,re_g_per_um; one line per sample.
std::string dump_field_grid(const TransverseField& field, int radial_points, int azimuthal_points,
                            double r_max_um);

}  // namespace sfwm
