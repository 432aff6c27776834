#include "sfwm/modefield.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"
#include "sfwm/quadrature.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr std::size_t kRadialOrder = 96;
constexpr std::size_t kCorePanels = 2;
constexpr std::size_t kCladdingPanels = 8;

double bessel_j(int n, double x)
{
    return boost::math::cyl_bessel_j(n, x);
}

double bessel_k(int n, double x)
{
    return boost::math::cyl_bessel_k(n < 0 ? -n : n, x);
}

// Integral of f over [0, r_max] split at the core boundary, where the
// profile's second derivative jumps.
template <class F>
double radial_integral(F&& f, double r0, double r_max)
{
    const GaussLegendre& rule = gauss_legendre(kRadialOrder);
    return rule.integrate(f, 0.0, r0, kCorePanels) + rule.integrate(f, r0, r_max, kCladdingPanels);
}

}  // namespace

double radial_field(const ModeSolution& s, double r_um)
{
    const int l = s.mode.l;
    if (r_um < s.core_radius_um) {
        return bessel_j(l, s.u * r_um);
    }
    const double scale = bessel_j(l, s.U()) / bessel_k(l, s.W());
    return scale * bessel_k(l, s.v * r_um);
}

double radial_field_derivative(const ModeSolution& s, double r_um)
{
    const int l = s.mode.l;
    if (r_um < s.core_radius_um) {
        const double x = s.u * r_um;
        const double jm = l == 0 ? -bessel_j(1, x) : bessel_j(l - 1, x);
        return 0.5 * s.u * (jm - bessel_j(l + 1, x));
    }
    const double scale = bessel_j(l, s.U()) / bessel_k(l, s.W());
    const double x = s.v * r_um;
    return -0.5 * scale * s.v * (bessel_k(l - 1, x) + bessel_k(l + 1, x));
}

double azimuthal_field(int l, Parity parity, double phi)
{
    if (l == 0) {
        if (parity == Parity::odd) {
            throw InvalidMode("azimuthal factor undefined for odd l = 0 modes");
        }
        return 1.0;
    }
    return parity == Parity::even ? std::cos(l * phi) : std::sin(l * phi);
}

double azimuthal_norm_squared(int l)
{
    return l == 0 ? 2.0 * kPi : kPi;
}

double radial_cutoff_um(const ModeSolution& s)
{
    return s.core_radius_um + 12.0 / s.v;
}

TransverseField::TransverseField(const FiberParams& fiber, const LPMode& mode, double wavelength_nm)
    : TransverseField(solve_mode(fiber, mode, wavelength_nm))
{
}

TransverseField::TransverseField(const ModeSolution& solution) : solution_(solution), normalization_(0.0)
{
    solution_.mode.validate();
    const double power = radial_integral(
        [this](double r) {
            const double F = radial_field(solution_, r);
            return F * F * r;
        },
        solution_.core_radius_um, radial_cutoff_um(solution_));
    normalization_ = 1.0 / std::sqrt(power * azimuthal_norm_squared(solution_.mode.l));
}

double TransverseField::operator()(double r_um, double phi) const
{
    return radial(r_um) * azimuthal_field(solution_.mode.l, solution_.mode.parity, phi);
}

double evaluate_field(const TransverseField& field, double r_um, double phi)
{
    return field(r_um, phi);
}

double field_inner_product(const TransverseField& a, const TransverseField& b)
{
    const LPMode& ma = a.mode();
    const LPMode& mb = b.mode();
    double angular = 0.0;
    if (ma.l == mb.l && ma.parity == mb.parity) {
        angular = azimuthal_norm_squared(ma.l);
    }
    if (angular == 0.0) {
        return 0.0;
    }
    const double r_max = std::max(radial_cutoff_um(a.solution()), radial_cutoff_um(b.solution()));
    const double radial = radial_integral([&](double r) { return a.radial(r) * b.radial(r) * r; },
                                          a.solution().core_radius_um, r_max);
    return radial * angular;
}

std::string dump_field_grid(const TransverseField& field, int radial_points, int azimuthal_points,
                            double r_max_um)
{
    if (radial_points < 1 || azimuthal_points < 1 || !(r_max_um > 0.0)) {
        throw DomainError("field grid needs positive sizes and extent");
    }
    std::ostringstream out;
    out << "r_um,phi_rad,re_g_per_um\n";
    for (int i = 0; i < radial_points; ++i) {
        const double r = radial_points == 1 ? 0.0 : r_max_um * i / (radial_points - 1);
        for (int j = 0; j < azimuthal_points; ++j) {
            const double phi = 2.0 * kPi * j / azimuthal_points;
            out << format_double(r) << ',' << format_double(phi) << ',' << format_double(field(r, phi))
                << '\n';
        }
    }
    return out.str();
}

}  // namespace sfwm
