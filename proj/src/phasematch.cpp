#include "sfwm/phasematch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double k_per_m(const LPMode& mode, const FiberParams& fiber, double omega)
{
    return wavenumber(mode, fiber, omega) * 1e6;
}

double sinc(double x)
{
    return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x;
}

}  // namespace

double phase_mismatch(const ProcessSpec& process, const FiberParams& fiber, double omega_pump,
                      double omega_signal, double omega_idler, const NonlinearPhase& phi_nl)
{
    const double omega_pump2 = omega_signal + omega_idler - omega_pump;
    return k_per_m(process.pump1, fiber, omega_pump) + k_per_m(process.pump2, fiber, omega_pump2) -
           k_per_m(process.signal, fiber, omega_signal) - k_per_m(process.idler, fiber, omega_idler) -
           phi_nl.value_per_m();
}

WavenumberTable::WavenumberTable(const FiberParams& fiber, std::span<const LPMode> modes, double omega_lo,
                                 double omega_hi, std::size_t nodes)
    : fiber_(fiber)
{
    fiber.validate();
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || nodes < 4) {
        throw DomainError("wavenumber table needs 0 < omega_lo < omega_hi and at least 4 nodes");
    }
    for (const auto& mode : modes) {
        mode.validate();
        const auto key = std::pair{mode.l, mode.m};
        if (tables_.count(key)) continue;
        // V is linear in omega because NA is wavelength independent.
        const double omega_cutoff =
            lp_cutoff_v(mode.l, mode.m) * kSpeedOfLight / (fiber.core_radius_um * 1e-6 * fiber.numerical_aperture);
        const double start = std::max(omega_lo, omega_cutoff * (1.0 + 1e-9));
        if (!(start < omega_hi)) continue;
        const double h = (omega_hi - start) / static_cast<double>(nodes - 1);
        std::vector<double> n0(nodes);
        for (std::size_t i = 0; i < nodes; ++i) {
            const double omega = i + 1 == nodes ? omega_hi : start + h * static_cast<double>(i);
            n0[i] = solve_lp_scalar_index(fiber, mode.l, mode.m, wavelength_nm(omega));
        }
        tables_.emplace(key, Table{start, omega_hi,
                                   boost::math::interpolators::cardinal_cubic_b_spline<double>(
                                       n0.begin(), n0.end(), start, h)});
    }
}

double WavenumberTable::k_per_m(const LPMode& mode, double omega) const
{
    const auto it = tables_.find(std::pair{mode.l, mode.m});
    if (it == tables_.end()) return kNaN;
    const Table& t = it->second;
    const double slack = 1e-12 * t.omega_end;
    if (omega < t.omega_start - slack || omega > t.omega_end + slack) return kNaN;
    const double n0 = t.spline(std::clamp(omega, t.omega_start, t.omega_end));
    double n = n0;
    if (mode.polarization == Polarization::x) n += fiber_.delta;
    if (mode.parity == Parity::odd) n += fiber_.delta_p;
    return n * omega / kSpeedOfLight;
}

double WavenumberTable::phase_mismatch(const ProcessSpec& process, double omega_pump, double omega_signal,
                                       double omega_idler, double phi_nl_per_m) const
{
    return k_per_m(process.pump1, omega_pump) + k_per_m(process.pump2, omega_signal + omega_idler - omega_pump) -
           k_per_m(process.signal, omega_signal) - k_per_m(process.idler, omega_idler) - phi_nl_per_m;
}

void PumpEnvelope::validate() const
{
    if (!(center_nm > 0.0)) {
        throw DomainError("pump centre wavelength must be positive");
    }
    if (!(bandwidth_fwhm_nm >= 0.0)) {
        throw DomainError("pump bandwidth must be non-negative");
    }
    if ((shape == PumpShape::monochromatic) != (bandwidth_fwhm_nm == 0.0)) {
        throw DomainError("a pump is monochromatic exactly when its bandwidth is zero");
    }
}

double PumpEnvelope::center_omega() const
{
    return angular_frequency(center_nm);
}

double PumpEnvelope::sigma_omega() const
{
    const double fwhm_omega = 2.0 * kPi * kSpeedOfLight * (bandwidth_fwhm_nm * 1e-9) / std::pow(center_nm * 1e-9, 2);
    return fwhm_omega / (2.0 * std::sqrt(2.0 * std::log(2.0)));
}

double PumpEnvelope::amplitude(double omega) const
{
    const double w0 = center_omega();
    if (shape == PumpShape::monochromatic) {
        return omega == w0 ? 1.0 : 0.0;
    }
    const double s = sigma_omega();
    const double x = (omega - w0) / s;
    return std::exp(-0.5 * x * x);
}

std::vector<PMPoint> pm_roots(const ProcessSpec& process, const FiberParams& fiber, double pump_nm,
                              const PMSearchOptions& options)
{
    if (!(options.window_nm > 0.0) || !(options.window_nm < pump_nm / 2.0) || options.scan_points < 2) {
        throw DomainError("phasematching search window must lie in (0, pump/2) with >= 2 scan points");
    }
    const double wp = angular_frequency(pump_nm);
    const double w_red = angular_frequency(pump_nm + options.window_nm);
    const double w_blue = angular_frequency(pump_nm - options.window_nm);
    const double lo = std::min(w_red, 2.0 * wp - w_blue);
    const double hi = std::max(w_blue, 2.0 * wp - w_red);
    const LPMode modes[4] = {process.pump1, process.pump2, process.signal, process.idler};
    const WavenumberTable table(fiber, modes, lo * (1.0 - 1e-6), hi * (1.0 + 1e-6));
    const double phi = options.phi_nl.value_per_m();

    const auto approx = [&](double ws) { return table.phase_mismatch(process, wp, ws, 2.0 * wp - ws, phi); };

    // Exact mismatch with both pumps at wp; the pump terms are shared.
    double pump_terms = kNaN;
    try {
        pump_terms = k_per_m(process.pump1, fiber, wp) + k_per_m(process.pump2, fiber, wp);
    } catch (const ModeNotGuided&) {
        return {};
    }
    const auto exact = [&](double ws) {
        return pump_terms - k_per_m(process.signal, fiber, ws) - k_per_m(process.idler, fiber, 2.0 * wp - ws) - phi;
    };

    std::vector<PMPoint> points;
    const auto refine = [&](double wa, double wb) {
        double fa = 0.0;
        double fb = 0.0;
        try {
            fa = exact(wa);
            fb = exact(wb);
        } catch (const ModeNotGuided&) {
            return;
        }
        if ((fa < 0.0) == (fb < 0.0)) return;
        for (int iter = 0; iter < 200; ++iter) {
            const double wm = 0.5 * (wa + wb);
            if (wm == wa || wm == wb) break;
            const double fm = exact(wm);
            if (fm == 0.0) {
                wa = wb = wm;
                fa = fb = 0.0;
                break;
            }
            if ((fm < 0.0) == (fa < 0.0)) {
                wa = wm;
                fa = fm;
            } else {
                wb = wm;
                fb = fm;
            }
        }
        const double ws = std::abs(fa) <= std::abs(fb) ? wa : wb;
        const double residual = std::min(std::abs(fa), std::abs(fb));
        if (residual > options.residual_tolerance_per_m) return;
        PMPoint pt;
        pt.pump_nm = pump_nm;
        pt.signal_nm = wavelength_nm(ws);
        pt.idler_nm = wavelength_nm(2.0 * wp - ws);
        pt.process = process;
        pt.residual_per_m = residual;
        points.push_back(pt);
    };

    // Scan the signal wavelength outward from the pump on each side.
    for (const double side : {-1.0, 1.0}) {
        double prev_w = kNaN;
        double prev_f = kNaN;
        for (std::size_t j = 1; j <= options.scan_points; ++j) {
            const double lambda = pump_nm + side * options.window_nm * static_cast<double>(j) /
                                                static_cast<double>(options.scan_points);
            const double ws = angular_frequency(lambda);
            const double f = approx(ws);
            if (std::isfinite(f) && std::isfinite(prev_f) && ((f < 0.0) != (prev_f < 0.0) || f == 0.0)) {
                refine(std::min(prev_w, ws), std::max(prev_w, ws));
            }
            prev_w = ws;
            prev_f = f;
        }
    }
    std::sort(points.begin(), points.end(),
              [](const PMPoint& a, const PMPoint& b) { return a.signal_nm < b.signal_nm; });
    // A root landing exactly on a scan node is bracketed twice.
    points.erase(std::unique(points.begin(), points.end(),
                             [](const PMPoint& a, const PMPoint& b) {
                                 return std::abs(a.signal_nm - b.signal_nm) < 1e-9 * a.signal_nm;
                             }),
                 points.end());
    return points;
}

std::vector<PMPoint> pm_curve(const ProcessSpec& process, const FiberParams& fiber, double pump_lo_nm,
                              double pump_hi_nm, std::size_t n_points, const PMSearchOptions& options)
{
    if (n_points == 0 || pump_hi_nm < pump_lo_nm) {
        throw DomainError("pump range must be non-empty");
    }
    std::vector<PMPoint> curve;
    for (std::size_t i = 0; i < n_points; ++i) {
        const double lp = n_points == 1 ? pump_lo_nm
                                        : pump_lo_nm + (pump_hi_nm - pump_lo_nm) * static_cast<double>(i) /
                                                           static_cast<double>(n_points - 1);
        auto roots = pm_roots(process, fiber, lp, options);
        curve.insert(curve.end(), roots.begin(), roots.end());
    }
    return curve;
}

namespace {

std::vector<double> uniform(double a, double b, std::size_t n)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = n == 1 ? 0.5 * (a + b) : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    }
    return v;
}

}  // namespace

SpectralGrid SpectralGrid::centered(double signal_nm, double idler_nm, double half_span_omega,
                                    std::size_t n_signal, std::size_t n_idler)
{
    if (n_signal == 0 || n_idler == 0 || !(half_span_omega > 0.0)) {
        throw DomainError("spectral grid needs positive span and sizes");
    }
    const double ws = angular_frequency(signal_nm);
    const double wi = angular_frequency(idler_nm);
    return {uniform(ws - half_span_omega, ws + half_span_omega, n_signal),
            uniform(wi - half_span_omega, wi + half_span_omega, n_idler)};
}

SpectralGrid SpectralGrid::spanning(double signal_lo_nm, double signal_hi_nm, double idler_lo_nm,
                                    double idler_hi_nm, std::size_t n_signal, std::size_t n_idler)
{
    if (n_signal == 0 || n_idler == 0 || !(signal_hi_nm > signal_lo_nm) || !(idler_hi_nm > idler_lo_nm)) {
        throw DomainError("spectral grid needs increasing wavelength limits and positive sizes");
    }
    return {uniform(angular_frequency(signal_hi_nm), angular_frequency(signal_lo_nm), n_signal),
            uniform(angular_frequency(idler_hi_nm), angular_frequency(idler_lo_nm), n_idler)};
}

double SpectralGrid::signal_step() const
{
    return signal_omega.size() < 2 ? 0.0 : signal_omega[1] - signal_omega[0];
}

double SpectralGrid::idler_step() const
{
    return idler_omega.size() < 2 ? 0.0 : idler_omega[1] - idler_omega[0];
}

JointSpectrum jsa(const ProcessSpec& process, const FiberParams& fiber, const PumpEnvelope& pump,
                  const SpectralGrid& grid, const JsaOptions& options)
{
    pump.validate();
    fiber.validate();
    if (grid.rows() == 0 || grid.cols() == 0) {
        throw ShapeError("empty spectral grid");
    }
    const bool mono = pump.shape == PumpShape::monochromatic;
    const double wp = pump.center_omega();
    const double sigma = mono ? 0.0 : pump.sigma_omega();
    const double half_window = options.window_sigmas * sigma;
    const std::size_t nq = mono ? 1 : std::max<std::size_t>(3, options.quadrature_points | 1);

    const auto [s_lo, s_hi] = std::minmax_element(grid.signal_omega.begin(), grid.signal_omega.end());
    const auto [i_lo, i_hi] = std::minmax_element(grid.idler_omega.begin(), grid.idler_omega.end());
    const double sum_lo = *s_lo + *i_lo;
    const double sum_hi = *s_hi + *i_hi;
    const double w_lo = std::min({*s_lo, *i_lo, wp - half_window, sum_lo - wp - half_window});
    const double w_hi = std::max({*s_hi, *i_hi, wp + half_window, sum_hi - wp + half_window});
    const LPMode modes[4] = {process.pump1, process.pump2, process.signal, process.idler};
    const WavenumberTable table(fiber, modes, w_lo * (1.0 - 1e-6), w_hi * (1.0 + 1e-6));

    // Composite Simpson nodes over wp +/- half_window.
    std::vector<double> nodes(nq);
    std::vector<double> weights(nq);
    std::vector<double> k_pump1(nq);
    std::vector<double> env(nq);
    if (mono) {
        nodes[0] = wp;
        weights[0] = 1.0;
    } else {
        const double h = 2.0 * half_window / static_cast<double>(nq - 1);
        for (std::size_t q = 0; q < nq; ++q) {
            nodes[q] = wp - half_window + h * static_cast<double>(q);
            const double simpson = (q == 0 || q + 1 == nq) ? 1.0 : (q % 2 == 1 ? 4.0 : 2.0);
            weights[q] = simpson * h / 3.0;
        }
    }
    for (std::size_t q = 0; q < nq; ++q) {
        k_pump1[q] = table.k_per_m(process.pump1, nodes[q]);
        env[q] = pump.amplitude(nodes[q]);
    }
    std::vector<double> k_signal(grid.rows());
    std::vector<double> k_idler(grid.cols());
    for (std::size_t is = 0; is < grid.rows(); ++is) k_signal[is] = table.k_per_m(process.signal, grid.signal_omega[is]);
    for (std::size_t ii = 0; ii < grid.cols(); ++ii) k_idler[ii] = table.k_per_m(process.idler, grid.idler_omega[ii]);

    const double half_length = 0.5 * fiber.length_m;
    const double phi = options.phi_nl.value_per_m();
    const double cell = std::max(std::abs(grid.signal_step()), std::abs(grid.idler_step()));

    JointSpectrum out;
    out.process = process;
    out.grid = grid;
    out.amplitude.assign(grid.rows() * grid.cols(), 0.0);
    out.intensity.assign(grid.rows() * grid.cols(), 0.0);
    for (std::size_t is = 0; is < grid.rows(); ++is) {
        const double ws = grid.signal_omega[is];
        for (std::size_t ii = 0; ii < grid.cols(); ++ii) {
            const double wi = grid.idler_omega[ii];
            const double sum = ws + wi;
            double value = 0.0;
            if (mono) {
                const double tri = cell > 0.0 ? 1.0 - std::abs(sum - 2.0 * wp) / cell : (sum == 2.0 * wp ? 1.0 : 0.0);
                if (tri <= 0.0) continue;
                const double dk = k_pump1[0] + table.k_per_m(process.pump2, sum - wp) - k_signal[is] - k_idler[ii] - phi;
                if (!std::isfinite(dk)) continue;
                if (std::abs(fiber.length_m * dk) <= 2.0 * kPi) out.phasematched_in_grid = true;
                value = tri * sinc(half_length * dk);
            } else {
                if (std::abs(sum - 2.0 * wp) > 4.0 * half_window) continue;
                for (std::size_t q = 0; q < nq; ++q) {
                    const double w2 = sum - nodes[q];
                    const double a2 = pump.amplitude(w2);
                    if (a2 < 1e-16) continue;
                    const double dk = k_pump1[q] + table.k_per_m(process.pump2, w2) - k_signal[is] - k_idler[ii] - phi;
                    if (!std::isfinite(dk)) continue;
                    if (std::abs(fiber.length_m * dk) <= 2.0 * kPi) out.phasematched_in_grid = true;
                    value += weights[q] * env[q] * a2 * sinc(half_length * dk);
                }
            }
            out.amplitude[is * grid.cols() + ii] = value;
            out.intensity[is * grid.cols() + ii] = value * value;
        }
    }
    return out;
}

CompositeState assemble_state(std::span<const JointSpectrum> spectra, std::span<const double> overlaps,
                              std::span<const PumpPowers> powers)
{
    if (spectra.size() != overlaps.size() || spectra.size() != powers.size()) {
        throw ShapeError("spectra, overlaps and powers must have equal lengths");
    }
    if (spectra.empty()) {
        throw ShapeError("no spectra to assemble");
    }
    CompositeState state;
    state.grid = spectra.front().grid;
    const std::size_t rows = state.grid.rows();
    const std::size_t cols = state.grid.cols();
    for (const auto& s : spectra) {
        if (!(s.grid == state.grid) || s.amplitude.size() != rows * cols) {
            throw ShapeError("joint spectra are not on a common frequency grid");
        }
    }
    const double ds = std::abs(state.grid.signal_step()) > 0.0 ? std::abs(state.grid.signal_step()) : 1.0;
    const double di = std::abs(state.grid.idler_step()) > 0.0 ? std::abs(state.grid.idler_step()) : 1.0;
    state.signal_marginal.assign(rows, 0.0);
    state.idler_marginal.assign(cols, 0.0);
    for (std::size_t j = 0; j < spectra.size(); ++j) {
        if (!(powers[j].pump1_w >= 0.0 && powers[j].pump2_w >= 0.0)) {
            throw DomainError("pump powers must be non-negative");
        }
        const std::complex<double> w = std::sqrt(powers[j].pump1_w * powers[j].pump2_w) * overlaps[j];
        JointSpectrum f = spectra[j];
        double norm2 = 0.0;
        for (double v : f.intensity) norm2 += v;
        norm2 *= ds * di;
        if (norm2 > 0.0) {
            const double scale = 1.0 / std::sqrt(norm2);
            for (auto& a : f.amplitude) a *= scale;
            for (auto& v : f.intensity) v *= scale * scale;
        }
        const double w2 = std::norm(w);
        for (std::size_t is = 0; is < rows; ++is) {
            for (std::size_t ii = 0; ii < cols; ++ii) {
                const double v = w2 * f.intensity[is * cols + ii];
                state.signal_marginal[is] += v * di;
                state.idler_marginal[ii] += v * ds;
            }
        }
        state.processes.push_back(f.process);
        state.weights.push_back(w);
        state.spectra.push_back(std::move(f));
    }
    return state;
}

CompositeState assemble_state(std::span<const ProcessSpec> processes, const FiberParams& fiber,
                              const PumpEnvelope& pump, const SpectralGrid& grid, std::span<const PumpPowers> powers,
                              const JsaOptions& options, const OverlapOptions& overlap_options)
{
    std::vector<PumpPowers> unit(processes.size());
    if (powers.empty()) powers = unit;
    const auto terms = total_overlap(processes, fiber, pump.center_nm, overlap_options);
    std::vector<double> overlaps;
    std::vector<JointSpectrum> spectra;
    for (std::size_t j = 0; j < processes.size(); ++j) {
        overlaps.push_back(terms[j].total);
        spectra.push_back(jsa(processes[j], fiber, pump, grid, options));
    }
    return assemble_state(spectra, overlaps, powers);
}

double sampled_fwhm(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 3) {
        throw ShapeError("FWHM needs matching samples, at least three");
    }
    const auto peak = static_cast<std::size_t>(std::max_element(y.begin(), y.end()) - y.begin());
    const double half = 0.5 * y[peak];
    if (!(half > 0.0)) return 0.0;
    std::size_t left = peak;
    while (left > 0 && y[left] >= half) --left;
    std::size_t right = peak;
    while (right + 1 < y.size() && y[right] >= half) ++right;
    if (y[left] >= half || y[right] >= half) return 0.0;
    const auto crossing = [&](std::size_t a, std::size_t b) {
        return x[a] + (half - y[a]) * (x[b] - x[a]) / (y[b] - y[a]);
    };
    return std::abs(crossing(right - 1, right) - crossing(left, left + 1));
}

}  // namespace sfwm
