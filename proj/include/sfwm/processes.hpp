#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sfwm/fiber.hpp"

namespace sfwm {

/// One SFWM process: transverse modes of pump 1, pump 2, signal and idler.
struct ProcessSpec {
    LPMode pump1;
    LPMode pump2;
    LPMode signal;
    LPMode idler;
    std::optional<double> overlap;

    /// Copy with pumps sorted so that (a, b) and (b, a) compare equal.
    ProcessSpec canonical() const;
    bool degenerate_pumps() const noexcept { return pump1 == pump2; }

    /// "01x+11ex->01y+11ey"
    std::string label() const;

    /// Ordering and equality on the mode quadruple only.
    friend bool operator==(const ProcessSpec& a, const ProcessSpec& b) noexcept
    {
        return a.pump1 == b.pump1 && a.pump2 == b.pump2 && a.signal == b.signal && a.idler == b.idler;
    }
    friend std::strong_ordering operator<=>(const ProcessSpec& a, const ProcessSpec& b) noexcept;
};

/// Parses "01x+11ex->01y+11ey" (whitespace tolerated).
ProcessSpec parse_process(std::string_view text);

struct ConservationReport {
    int delta_q = 0;
    std::array<int, 8> delta_l_family{};
    bool viable = false;

    int min_abs_delta_l() const;
};

/// q1 q2 - qs qi, in {-2, 0, 2}.
int delta_q(const ProcessSpec& p);

/// The eight signed sums l1 +/- l2 +/- ls +/- li. Entry index bits select
/// a minus sign on l2 (bit 2), ls (bit 1) and li (bit 0).
std::array<int, 8> delta_l_family(const ProcessSpec& p);

ConservationReport conservation_report(const ProcessSpec& p);

/// Exact value of the integral of G1 G2 Gs Gi over [0, 2 pi).
double azimuthal_overlap(const ProcessSpec& p);

/// Integral of r F1 F2 Fs Fi dr with unit-power radial factors, all evaluated
/// at one reference wavelength. Units 1/um^2.
double radial_overlap(const ProcessSpec& p, const FiberParams& fiber, double wavelength_nm,
                      std::size_t gauss_points = 96);

struct OverlapOptions {
    /// Doubles the amplitude of processes with distinct pump modes.
    bool nondegenerate_pump_factor = true;
    std::size_t gauss_points = 96;
};

struct OverlapTerms {
    double azimuthal = 0.0;
    double radial = 0.0;
    double total = 0.0;  // normalized over the declared set
};

/// Overlaps O_j = M O^r_j O^phi_j for a declared set of competing processes,
/// with M chosen so that the sum of |O_j|^2 is one. Throws NormalizationError
/// when every process in the set has zero overlap.
std::vector<OverlapTerms> total_overlap(std::span<const ProcessSpec> processes, const FiberParams& fiber,
                                        double wavelength_nm, const OverlapOptions& options = {});

enum class PolarizationFilter {
    none,
    xx_yy,  // pumps x-polarized, signal and idler y-polarized
};

struct EnumeratedProcess {
    ProcessSpec process;
    ConservationReport report;
};

struct Enumeration {
    std::size_t total_ordered = 0;     // M^4
    std::size_t filtered_ordered = 0;  // after the polarization filter
    std::vector<EnumeratedProcess> ordered;   // every ordered quadruple passing the filter
    std::vector<ProcessSpec> viable;          // canonical, unique, sorted
};

Enumeration enumerate_processes(std::span<const LPMode> modes,
                                PolarizationFilter filter = PolarizationFilter::none);

/// LP01 and LP11 unfolded: 01x, 01y, 11ex, 11ey, 11ox, 11oy.
std::vector<LPMode> six_mode_basis();

/// The xx-yy processes allowed by parity and OAM conservation among the
/// six LP01/LP11 modes.
std::vector<ProcessSpec> six_mode_viable_xx_yy();

}  // namespace sfwm
