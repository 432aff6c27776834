#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "sfwm/fiber.hpp"
#include "sfwm/processes.hpp"

namespace sfwm {

/// Nonlinear phase phi_NL of one process: a constant plus an optional
/// gamma (W1 + W2) term. Units 1/m.
struct NonlinearPhase {
    double constant_per_m = 0.0;
    double gamma_per_w_m = 0.0;
    double pump1_power_w = 0.0;
    double pump2_power_w = 0.0;

    double value_per_m() const noexcept
    {
        return constant_per_m + gamma_per_w_m * (pump1_power_w + pump2_power_w);
    }
};

/// Delta k = k(w; a) + k(ws + wi - w; b) - k(ws; mu) - k(wi; nu) - phi_NL
/// in 1/m, with w the pump-1 frequency. Frequencies in rad/s.
double phase_mismatch(const ProcessSpec& process, const FiberParams& fiber, double omega_pump,
                      double omega_signal, double omega_idler, const NonlinearPhase& phi_nl = {});

/// Cubic-spline tables of the scalar index n0(omega) for a set of modes on
/// a frequency interval; used where the exact solver would be evaluated
/// millions of times. Frequencies below a mode's cutoff yield NaN.
class WavenumberTable {
public:
    WavenumberTable(const FiberParams& fiber, std::span<const LPMode> modes, double omega_lo,
                    double omega_hi, std::size_t nodes = 1024);

    /// Wavenumber in 1/m, NaN outside the guided band or the table range.
    double k_per_m(const LPMode& mode, double omega) const;

    double phase_mismatch(const ProcessSpec& process, double omega_pump, double omega_signal,
                          double omega_idler, double phi_nl_per_m = 0.0) const;

private:
    struct Table {
        double omega_start = 0.0;
        double omega_end = 0.0;
        boost::math::interpolators::cardinal_cubic_b_spline<double> spline;
    };

    FiberParams fiber_;
    std::map<std::pair<int, int>, Table> tables_;
};

enum class PumpShape { gaussian, monochromatic };

/// Spectral envelope A(omega) shared by both (spectrally degenerate) pumps.
/// Gaussian in amplitude with the given FWHM in wavelength.
struct PumpEnvelope {
    double center_nm = 705.0;
    double bandwidth_fwhm_nm = 0.5;
    PumpShape shape = PumpShape::gaussian;

    void validate() const;
    double center_omega() const;
    /// Standard deviation of the amplitude envelope in rad/s.
    double sigma_omega() const;
    /// Peak-normalized amplitude.
    double amplitude(double omega) const;
};

/// One point on a phasematching curve. The signal wavelength belongs to the
/// process' signal (mu) mode.
struct PMPoint {
    double pump_nm = 0.0;
    double signal_nm = 0.0;
    double idler_nm = 0.0;
    ProcessSpec process;
    double residual_per_m = 0.0;

    /// Signal at lambda > lambda_p, the usual labelling.
    bool signal_is_red() const noexcept { return signal_nm > pump_nm; }
};

struct PMSearchOptions {
    double window_nm = 150.0;
    std::size_t scan_points = 10000;
    double residual_tolerance_per_m = 1e-3;
    NonlinearPhase phi_nl;
};

/// Roots of Delta k(ws, 2wp - ws) = 0 for one pump wavelength; both pumps at
/// wp. The signal wavelength is scanned on both sides of the pump.
std::vector<PMPoint> pm_roots(const ProcessSpec& process, const FiberParams& fiber, double pump_nm,
                              const PMSearchOptions& options = {});

/// pm_roots for n_points pump wavelengths evenly spaced on [pump_lo, pump_hi].
std::vector<PMPoint> pm_curve(const ProcessSpec& process, const FiberParams& fiber, double pump_lo_nm,
                              double pump_hi_nm, std::size_t n_points, const PMSearchOptions& options = {});

/// Rectangular grid of signal and idler angular frequencies (rad/s).
struct SpectralGrid {
    std::vector<double> signal_omega;
    std::vector<double> idler_omega;

    /// n_signal x n_idler grid centred on the given wavelengths, spanning
    /// +/- half_span_omega in each axis.
    static SpectralGrid centered(double signal_nm, double idler_nm, double half_span_omega,
                                 std::size_t n_signal, std::size_t n_idler);
    /// Uniform in frequency between the given wavelength limits.
    static SpectralGrid spanning(double signal_lo_nm, double signal_hi_nm, double idler_lo_nm,
                                 double idler_hi_nm, std::size_t n_signal, std::size_t n_idler);

    std::size_t rows() const noexcept { return signal_omega.size(); }
    std::size_t cols() const noexcept { return idler_omega.size(); }
    double signal_step() const;
    double idler_step() const;

    friend bool operator==(const SpectralGrid&, const SpectralGrid&) = default;
};

/// f(ws, wi) on a grid, stored row-major with rows indexing the signal.
struct JointSpectrum {
    ProcessSpec process;
    SpectralGrid grid;
    std::vector<std::complex<double>> amplitude;
    std::vector<double> intensity;
    /// False when no grid cell satisfies |L Delta k| <= 2 pi.
    bool phasematched_in_grid = false;

    std::complex<double> amplitude_at(std::size_t is, std::size_t ii) const
    {
        return amplitude[is * grid.cols() + ii];
    }
    double intensity_at(std::size_t is, std::size_t ii) const { return intensity[is * grid.cols() + ii]; }
};

struct JsaOptions {
    std::size_t quadrature_points = 201;
    double window_sigmas = 3.0;
    NonlinearPhase phi_nl;
};

/// Joint spectral amplitude
///   f(ws, wi) = int dw A(w) A(ws + wi - w) sinc(L Delta k / 2).
/// A monochromatic pump keeps only w = wp and enforces ws + wi = 2 wp by a
/// unit-height triangle one grid cell wide in the sum frequency.
JointSpectrum jsa(const ProcessSpec& process, const FiberParams& fiber, const PumpEnvelope& pump,
                  const SpectralGrid& grid, const JsaOptions& options = {});

struct PumpPowers {
    double pump1_w = 1.0;
    double pump2_w = 1.0;
};

/// Multi-process two-photon state: per-process weights sqrt(W1 W2) O_j, unit
/// norm JSAs and incoherent marginal spectra.
struct CompositeState {
    std::vector<ProcessSpec> processes;
    std::vector<std::complex<double>> weights;
    std::vector<JointSpectrum> spectra;  // each normalized to unit sum of |f|^2 dws dwi
    SpectralGrid grid;
    std::vector<double> signal_marginal;
    std::vector<double> idler_marginal;
};

/// Combines precomputed spectra. Throws ShapeError if the grids differ or
/// the argument lengths disagree.
CompositeState assemble_state(std::span<const JointSpectrum> spectra, std::span<const double> overlaps,
                              std::span<const PumpPowers> powers);

/// Computes overlaps (normalized over `processes`, at the pump centre) and
/// JSAs on a common grid, then assembles. Empty `powers` means unit powers.
CompositeState assemble_state(std::span<const ProcessSpec> processes, const FiberParams& fiber,
                              const PumpEnvelope& pump, const SpectralGrid& grid,
                              std::span<const PumpPowers> powers = {}, const JsaOptions& options = {},
                              const OverlapOptions& overlap_options = {});

/// Full width at half maximum of a sampled profile, with linear
/// interpolation of the half-maximum crossings around the peak. Returns 0
/// when the profile does not fall below half maximum on both sides.
double sampled_fwhm(std::span<const double> x, std::span<const double> y);

}  // namespace sfwm
