#include "sfwm/processes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <map>
#include <set>
#include <tuple>

#include "sfwm/errors.hpp"
#include "sfwm/modefield.hpp"
#include "sfwm/quadrature.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

ProcessSpec ProcessSpec::canonical() const
{
    ProcessSpec c = *this;
    if (c.pump2 < c.pump1) std::swap(c.pump1, c.pump2);
    return c;
}

std::string ProcessSpec::label() const
{
    return pump1.label() + "+" + pump2.label() + "->" + signal.label() + "+" + idler.label();
}

std::strong_ordering operator<=>(const ProcessSpec& a, const ProcessSpec& b) noexcept
{
    return std::tie(a.pump1, a.pump2, a.signal, a.idler) <=> std::tie(b.pump1, b.pump2, b.signal, b.idler);
}

ProcessSpec parse_process(std::string_view text)
{
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    }
    const auto arrow = s.find("->");
    if (arrow == std::string::npos) {
        throw InvalidMode("process '" + std::string(text) + "' lacks '->'");
    }
    const auto split_pair = [&](const std::string& part) {
        const auto plus = part.find('+');
        if (plus == std::string::npos) {
            throw InvalidMode("process '" + std::string(text) + "' needs two modes on each side");
        }
        return std::pair{parse_mode(part.substr(0, plus)), parse_mode(part.substr(plus + 1))};
    };
    const auto [p1, p2] = split_pair(s.substr(0, arrow));
    const auto [sig, idl] = split_pair(s.substr(arrow + 2));
    return ProcessSpec{p1, p2, sig, idl, std::nullopt};
}

int ConservationReport::min_abs_delta_l() const
{
    int best = std::abs(delta_l_family[0]);
    for (int d : delta_l_family) best = std::min(best, std::abs(d));
    return best;
}

int delta_q(const ProcessSpec& p)
{
    return p.pump1.q() * p.pump2.q() - p.signal.q() * p.idler.q();
}

std::array<int, 8> delta_l_family(const ProcessSpec& p)
{
    std::array<int, 8> family{};
    for (int bits = 0; bits < 8; ++bits) {
        const int s2 = (bits & 4) ? -1 : 1;
        const int ss = (bits & 2) ? -1 : 1;
        const int si = (bits & 1) ? -1 : 1;
        family[bits] = p.pump1.l + s2 * p.pump2.l + ss * p.signal.l + si * p.idler.l;
    }
    return family;
}

ConservationReport conservation_report(const ProcessSpec& p)
{
    ConservationReport r;
    r.delta_q = delta_q(p);
    r.delta_l_family = delta_l_family(p);
    const bool oam = std::any_of(r.delta_l_family.begin(), r.delta_l_family.end(), [](int d) { return d == 0; });
    r.viable = r.delta_q == 0 && oam;
    return r;
}

namespace {

struct Harmonic {
    int charge;
    std::complex<double> coefficient;
};

// G as a sum of exp(i n phi): cos = (e+ + e-)/2, sin = (e+ - e-)/(2i).
int harmonics(const LPMode& mode, Harmonic out[2])
{
    mode.validate();
    if (mode.l == 0) {
        out[0] = {0, 1.0};
        return 1;
    }
    if (mode.parity == Parity::even) {
        out[0] = {mode.l, 0.5};
        out[1] = {-mode.l, 0.5};
    } else {
        out[0] = {mode.l, std::complex<double>(0.0, -0.5)};
        out[1] = {-mode.l, std::complex<double>(0.0, 0.5)};
    }
    return 2;
}

}  // namespace

double azimuthal_overlap(const ProcessSpec& p)
{
    // G is real, so the conjugates on signal and idler change nothing.
    Harmonic h[4][2];
    const int n[4] = {harmonics(p.pump1, h[0]), harmonics(p.pump2, h[1]), harmonics(p.signal, h[2]),
                      harmonics(p.idler, h[3])};
    std::complex<double> sum = 0.0;
    for (int a = 0; a < n[0]; ++a)
        for (int b = 0; b < n[1]; ++b)
            for (int c = 0; c < n[2]; ++c)
                for (int d = 0; d < n[3]; ++d) {
                    if (h[0][a].charge + h[1][b].charge + h[2][c].charge + h[3][d].charge == 0) {
                        sum += h[0][a].coefficient * h[1][b].coefficient * h[2][c].coefficient *
                               h[3][d].coefficient;
                    }
                }
    return 2.0 * kPi * sum.real();
}

namespace {

class RadialFieldCache {
public:
    RadialFieldCache(const FiberParams& fiber, double wavelength_nm) : fiber_(fiber), wavelength_nm_(wavelength_nm) {}

    const TransverseField& get(const LPMode& mode)
    {
        // The radial profile depends on (l, m) only.
        const auto key = std::pair{mode.l, mode.m};
        auto it = fields_.find(key);
        if (it == fields_.end()) {
            it = fields_.emplace(key, TransverseField(fiber_, {mode.l, mode.m, Polarization::y, Parity::even},
                                                      wavelength_nm_)).first;
        }
        return it->second;
    }

private:
    FiberParams fiber_;
    double wavelength_nm_;
    std::map<std::pair<int, int>, TransverseField> fields_;
};

double radial_overlap_cached(const ProcessSpec& p, RadialFieldCache& cache, std::size_t gauss_points)
{
    const TransverseField* f[4] = {&cache.get(p.pump1), &cache.get(p.pump2), &cache.get(p.signal),
                                   &cache.get(p.idler)};
    const double r0 = f[0]->solution().core_radius_um;
    double r_max = r0;
    for (const auto* field : f) r_max = std::max(r_max, radial_cutoff_um(field->solution()));
    const auto integrand = [&](double r) {
        return r * f[0]->radial(r) * f[1]->radial(r) * f[2]->radial(r) * f[3]->radial(r);
    };
    const GaussLegendre& rule = gauss_legendre(gauss_points);
    return rule.integrate(integrand, 0.0, r0, 2) + rule.integrate(integrand, r0, r_max, 8);
}

}  // namespace

double radial_overlap(const ProcessSpec& p, const FiberParams& fiber, double wavelength_nm,
                      std::size_t gauss_points)
{
    RadialFieldCache cache(fiber, wavelength_nm);
    return radial_overlap_cached(p, cache, gauss_points);
}

std::vector<OverlapTerms> total_overlap(std::span<const ProcessSpec> processes, const FiberParams& fiber,
                                        double wavelength_nm, const OverlapOptions& options)
{
    RadialFieldCache cache(fiber, wavelength_nm);
    std::vector<OverlapTerms> terms(processes.size());
    double norm2 = 0.0;
    for (std::size_t j = 0; j < processes.size(); ++j) {
        const ProcessSpec& p = processes[j];
        terms[j].azimuthal = azimuthal_overlap(p);
        terms[j].radial = radial_overlap_cached(p, cache, options.gauss_points);
        double raw = terms[j].azimuthal * terms[j].radial;
        if (options.nondegenerate_pump_factor && !p.degenerate_pumps()) raw *= 2.0;
        terms[j].total = raw;
        norm2 += raw * raw;
    }
    if (!(norm2 > 0.0)) {
        throw NormalizationError("no process in the declared set has a non-zero overlap");
    }
    const double scale = 1.0 / std::sqrt(norm2);
    for (auto& t : terms) t.total *= scale;
    return terms;
}

Enumeration enumerate_processes(std::span<const LPMode> modes, PolarizationFilter filter)
{
    for (const auto& m : modes) m.validate();
    Enumeration result;
    const std::size_t n = modes.size();
    result.total_ordered = n * n * n * n;
    std::set<ProcessSpec> viable;
    for (const auto& a : modes)
        for (const auto& b : modes)
            for (const auto& s : modes)
                for (const auto& i : modes) {
                    if (filter == PolarizationFilter::xx_yy &&
                        !(a.polarization == Polarization::x && b.polarization == Polarization::x &&
                          s.polarization == Polarization::y && i.polarization == Polarization::y)) {
                        continue;
                    }
                    ProcessSpec p{a, b, s, i, std::nullopt};
                    const ConservationReport report = conservation_report(p);
                    if (report.viable) viable.insert(p.canonical());
                    result.ordered.push_back({p, report});
                }
    result.filtered_ordered = result.ordered.size();
    result.viable.assign(viable.begin(), viable.end());
    return result;
}

std::vector<LPMode> six_mode_basis()
{
    std::vector<LPMode> modes;
    for (const auto pol : {Polarization::x, Polarization::y}) {
        modes.push_back({0, 1, pol, Parity::even});
        modes.push_back({1, 1, pol, Parity::even});
        modes.push_back({1, 1, pol, Parity::odd});
    }
    std::sort(modes.begin(), modes.end());
    return modes;
}

std::vector<ProcessSpec> six_mode_viable_xx_yy()
{
    const auto modes = six_mode_basis();
    return enumerate_processes(modes, PolarizationFilter::xx_yy).viable;
}

}  // namespace sfwm
