#include "sfwm/dispersion.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/tools/roots.hpp>

#include "sfwm/errors.hpp"
#include "sfwm/material.hpp"
#include "sfwm/modefield.hpp"
#include "sfwm/quadrature.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr int kZeroTableOrders = 16;
constexpr int kZeroTableRoots = 16;

/// m-th positive zero of J_order, tabulated for small indices.
double bessel_j_zero(int order, int m)
{
    struct Table {
        std::array<std::array<double, kZeroTableRoots>, kZeroTableOrders> zeros{};
        Table()
        {
            for (int n = 0; n < kZeroTableOrders; ++n) {
                for (int k = 1; k <= kZeroTableRoots; ++k) {
                    zeros[n][k - 1] = boost::math::cyl_bessel_j_zero(static_cast<double>(n), k);
                }
            }
        }
    };
    static const Table table;
    if (order < kZeroTableOrders && m <= kZeroTableRoots) {
        return table.zeros[order][m - 1];
    }
    return boost::math::cyl_bessel_j_zero(static_cast<double>(order), m);
}

struct ScalarRoot {
    double U = 0.0;
    double V = 0.0;
    double n0 = 0.0;
    double n1 = 0.0;
    double n2 = 0.0;
};

ScalarRoot solve_scalar(const FiberParams& fiber, int l, int m, double wavelength_nm)
{
    if (l < 0 || m < 1) {
        throw InvalidMode("LP mode indices require l >= 0 and m >= 1");
    }
    fiber.validate();
    ScalarRoot root;
    root.n2 = cladding_index(wavelength_nm, fiber.cladding);
    const double na = fiber.numerical_aperture;
    root.n1 = std::sqrt(root.n2 * root.n2 + na * na);
    root.V = v_number(fiber, wavelength_nm);
    const double cutoff = lp_cutoff_v(l, m);
    if (!(root.V > cutoff)) {
        throw ModeNotGuided(l, m, wavelength_nm);
    }

    // Between the cutoff zero and the m-th zero of J_l the residual changes
    // sign exactly once.
    const double lo = cutoff;
    const double hi = std::min(root.V, lp_bracket_upper(l, m));
    const double V = root.V;
    const auto residual = [l, V](double U) { return characteristic_residual(l, U, V); };
    const double f_lo = residual(lo);
    const double f_hi = residual(hi);
    if (f_lo == 0.0) {
        root.U = lo;
    } else if (f_hi == 0.0) {
        root.U = hi;
    } else if ((f_lo < 0.0) == (f_hi < 0.0)) {
        throw NumericalError("LP characteristic equation not bracketed");
    } else {
        std::uintmax_t max_iter = 200;
        const auto [a, b] = boost::math::tools::toms748_solve(
            residual, lo, hi, f_lo, f_hi, boost::math::tools::eps_tolerance<double>(), max_iter);
        const double fa = std::abs(residual(a));
        const double fb = std::abs(residual(b));
        root.U = fa <= fb ? a : b;
    }
    const double ratio = root.U / V;
    root.n0 = std::sqrt(root.n2 * root.n2 + na * na * (1.0 - ratio * ratio));
    return root;
}

}  // namespace

double v_number(const FiberParams& fiber, double wavelength_nm)
{
    return vacuum_wavenumber(wavelength_nm) * fiber.core_radius_um * fiber.numerical_aperture;
}

double lp_cutoff_v(int l, int m)
{
    if (l < 0 || m < 1) {
        throw InvalidMode("LP mode indices require l >= 0 and m >= 1");
    }
    if (l == 0) {
        return m == 1 ? 0.0 : bessel_j_zero(1, m - 1);
    }
    return bessel_j_zero(l - 1, m);
}

double lp_bracket_upper(int l, int m)
{
    return bessel_j_zero(l, m);
}

double characteristic_residual(int l, double U, double V)
{
    const double w2 = V * V - U * U;
    const double jl = boost::math::cyl_bessel_j(l, U);
    const double jl1 = boost::math::cyl_bessel_j(l + 1, U);
    if (w2 <= 0.0) {
        // W -> 0: W K_{l+1}(W)/K_l(W) tends to 2l (and to 0 for l = 0).
        return U * jl1 - 2.0 * l * jl;
    }
    const double W = std::sqrt(w2);
    // Upward recurrence from K0, K1 is stable.
    double k_prev = boost::math::cyl_bessel_k(0, W);
    double k_curr = boost::math::cyl_bessel_k(1, W);
    for (int n = 1; n <= l; ++n) {
        const double k_next = k_prev + 2.0 * n / W * k_curr;
        k_prev = k_curr;
        k_curr = k_next;
    }
    // k_prev = K_l, k_curr = K_{l+1}
    return U * jl1 - W * (k_curr / k_prev) * jl;
}

double solve_lp_scalar_index(const FiberParams& fiber, int l, int m, double wavelength_nm)
{
    return solve_scalar(fiber, l, m, wavelength_nm).n0;
}

double unfold_index(double n0, const LPMode& mode, const FiberParams& fiber)
{
    mode.validate();
    double n = n0;
    if (mode.polarization == Polarization::x) n += fiber.delta;
    if (mode.parity == Parity::odd) n += fiber.delta_p;
    return n;
}

ModeSolution solve_mode(const FiberParams& fiber, const LPMode& mode, double wavelength_nm)
{
    mode.validate();
    const ScalarRoot root = solve_scalar(fiber, mode.l, mode.m, wavelength_nm);
    ModeSolution s;
    s.mode = mode;
    s.wavelength_nm = wavelength_nm;
    s.core_radius_um = fiber.core_radius_um;
    s.n1 = root.n1;
    s.n2 = root.n2;
    s.n0 = root.n0;
    s.n_eff = unfold_index(root.n0, mode, fiber);
    s.u = root.U / fiber.core_radius_um;
    s.v = std::sqrt(std::max(0.0, root.V * root.V - root.U * root.U)) / fiber.core_radius_um;
    s.k = s.n_eff * vacuum_wavenumber(wavelength_nm);
    return s;
}

double wavenumber(const LPMode& mode, const FiberParams& fiber, double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega)) {
        throw DomainError("angular frequency must be positive");
    }
    mode.validate();
    const double lambda = wavelength_nm(omega);
    const double n0 = solve_lp_scalar_index(fiber, mode.l, mode.m, lambda);
    return unfold_index(n0, mode, fiber) * omega / kSpeedOfLight * 1e-6;
}

std::vector<LPMode> supported_modes(const FiberParams& fiber, double wavelength_nm)
{
    fiber.validate();
    cladding_index(wavelength_nm, fiber.cladding);
    const double V = v_number(fiber, wavelength_nm);
    std::vector<LPMode> modes;
    for (int l = 0; lp_cutoff_v(l, 1) < V; ++l) {
        for (int m = 1; lp_cutoff_v(l, m) < V; ++m) {
            for (const auto pol : {Polarization::x, Polarization::y}) {
                modes.push_back({l, m, pol, Parity::even});
                if (l > 0) modes.push_back({l, m, pol, Parity::odd});
            }
        }
    }
    std::sort(modes.begin(), modes.end());
    return modes;
}

double mode_field_diameter(const FiberParams& fiber, double wavelength_nm, MfdDefinition definition)
{
    const ModeSolution s = solve_mode(fiber, {0, 1, Polarization::y, Parity::even}, wavelength_nm);
    const double r0 = fiber.core_radius_um;
    const double r_max = radial_cutoff_um(s);
    const GaussLegendre& rule = gauss_legendre(64);

    const auto integral = [&](auto&& f) {
        return rule.integrate(f, 0.0, r0, 2) + rule.integrate(f, r0, r_max, 8);
    };
    const double power = integral([&](double r) {
        const double F = radial_field(s, r);
        return F * F * r;
    });
    double ratio = 0.0;
    if (definition == MfdDefinition::petermann_i) {
        const double second_moment = integral([&](double r) {
            const double F = radial_field(s, r);
            return F * F * r * r * r;
        });
        ratio = second_moment / power;
    } else {
        const double slope = integral([&](double r) {
            const double dF = radial_field_derivative(s, r);
            return dF * dF * r;
        });
        ratio = power / slope;
    }
    return 2.0 * std::sqrt(2.0) * std::sqrt(ratio);
}

}  // namespace sfwm
