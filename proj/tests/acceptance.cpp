// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sfwm/dispersion.hpp"
#include "sfwm/gafit.hpp"
#include "sfwm/phasematch.hpp"
#include "sfwm/processes.hpp"
#include "sfwm/units.hpp"

using namespace sfwm;
namespace fs = std::filesystem;

namespace {

const FiberParams kTruth{1.45, 0.20, 2.38e-4, 4.57e-4, 0.145};
const std::vector<double> kPumps{690.0, 695.0, 700.0, 705.0, 710.0, 715.0, 720.0};

Assignment bold_processes()
{
    return {{"A", parse_process("01x+11ex->01y+11ey")},
            {"B", parse_process("01x+11ox->01y+11oy")},
            {"C", parse_process("01x+01x->01y+01y")}};
}

struct Outcome {
    bool pass = false;
    std::string detail;
};

class Timer {
public:
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* format, double a)
{
    char buf[128];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

// ---- 1 ----------------------------------------------------------------------

Outcome process_counts()
{
    const char* const table[15] = {
        "01x+11ex->01y+11ey",  "01x+11ox->01y+11oy",  "01x+01x->01y+01y",     "11ex+11ex->01y+01y",
        "11ox+11ox->01y+01y",  "01x+01x->11ey+11ey",  "01x+01x->11oy+11oy",   "01x+11ex->11ey+01y",
        "01x+11ox->11oy+01y",  "11ex+11ex->11ey+11ey", "11ex+11ex->11oy+11oy", "11ex+11ox->11ey+11oy",
        "11ex+11ox->11oy+11ey", "11ox+11ox->11ey+11ey", "11ox+11ox->11oy+11oy"};
    std::set<ProcessSpec> expected;
    for (const char* t : table) expected.insert(parse_process(t).canonical());

    const Timer timer;
    const auto e = enumerate_processes(six_mode_basis(), PolarizationFilter::xx_yy);
    const double elapsed = timer.seconds();
    const bool set_ok = std::set<ProcessSpec>(e.viable.begin(), e.viable.end()) == expected &&
                        e.viable.size() == expected.size();
    Outcome o;
    o.pass = e.total_ordered == 1296 && e.filtered_ordered == 81 && set_ok && elapsed < 1.0;
    o.detail = std::to_string(e.total_ordered) + " ordered, " + std::to_string(e.filtered_ordered) + " xx-yy, " +
               std::to_string(e.viable.size()) + " viable, set " + (set_ok ? "equal to" : "differs from") +
               " the reference table, " + fmt("%.3f s", elapsed);
    return o;
}

// ---- 2 ----------------------------------------------------------------------

/// cos(l phi) or sin(l phi), written out here rather than taken from the
/// library.
double harmonic(const LPMode& m, double phi)
{
    return m.parity == Parity::even ? std::cos(m.l * phi) : std::sin(m.l * phi);
}

double brute_force_azimuthal(const ProcessSpec& p)
{
    constexpr int kSamples = 4096;
    double sum = 0.0;
    for (int i = 0; i < kSamples; ++i) {
        const double phi = 2.0 * kPi * (i + 0.5) / kSamples;
        sum += harmonic(p.pump1, phi) * harmonic(p.pump2, phi) * harmonic(p.signal, phi) * harmonic(p.idler, phi);
    }
    return sum * 2.0 * kPi / kSamples;
}

struct RuleCheck {
    std::size_t combinations = 0;
    double max_error = 0.0;
    std::size_t mismatches = 0;
    std::string example;
};

RuleCheck check_rule(const std::vector<LPMode>& modes)
{
    RuleCheck c;
    for (const auto& a : modes)
        for (const auto& b : modes)
            for (const auto& s : modes)
                for (const auto& i : modes) {
                    const ProcessSpec p{a, b, s, i, {}};
                    const double analytic = azimuthal_overlap(p);
                    c.max_error = std::max(c.max_error, std::abs(analytic - brute_force_azimuthal(p)));
                    const bool nonzero = std::abs(analytic) > 1e-10;
                    if (nonzero != conservation_report(p).viable) {
                        if (c.mismatches == 0) c.example = p.label();
                        ++c.mismatches;
                    }
                    ++c.combinations;
                }
    return c;
}

Outcome conservation_rule()
{
    const Timer timer;
    const auto six = check_rule(six_mode_basis());
    std::vector<LPMode> extended;
    for (int l = 0; l <= 2; ++l) {
        for (auto pol : {Polarization::x, Polarization::y}) {
            extended.push_back({l, 1, pol, Parity::even});
            if (l > 0) extended.push_back({l, 1, pol, Parity::odd});
        }
    }
    const auto ext = check_rule(extended);
    const double elapsed = timer.seconds();
    Outcome o;
    o.pass = six.combinations == 1296 && six.max_error <= 1e-10 && six.mismatches == 0 && ext.max_error <= 1e-10 &&
             ext.mismatches == 0 && elapsed < 10.0;
    o.detail = "six-mode: " + std::to_string(six.combinations) + " combinations, max |analytic - numeric| " +
               fmt("%.1e", six.max_error) + ", " + std::to_string(six.mismatches) + " rule mismatches; l<=2: " +
               std::to_string(ext.combinations) + " combinations, max error " + fmt("%.1e", ext.max_error) + ", " +
               std::to_string(ext.mismatches) + " rule mismatches" +
               (ext.example.empty() ? "" : " (e.g. " + ext.example + ": rule allows it, overlap is zero)") + ", " +
               fmt("%.2f s", elapsed);
    return o;
}

// ---- 3 ----------------------------------------------------------------------

struct RoundTrip {
    std::vector<PeakObservation> observations;
    FitSolution best;
};

Outcome round_trip(RoundTrip& rt)
{
    const Timer timer;
    rt.observations = simulate_peaks(kTruth, bold_processes(), kPumps);
    GAConfig config;
    config.seed = 1;
    const auto result = ga_run(rt.observations, config);
    const double elapsed = timer.seconds();
    rt.best = result.ranked.front();
    const auto& p = rt.best.params;
    const double err_delta = std::abs(p.delta - kTruth.delta) / kTruth.delta;
    const double err_delta_p = std::abs(p.delta_p - kTruth.delta_p) / kTruth.delta_p;
    const bool assignment_ok = rt.best.assignment == bold_processes();
    Outcome o;
    o.pass = err_delta < 0.01 && err_delta_p < 0.10 && assignment_ok && rt.best.max_peak_deviation_nm <= 0.1 &&
             elapsed < 300.0;
    o.detail = fmt("r0 %.4f um", p.core_radius_um) + fmt(", NA %.4f", p.numerical_aperture) +
               fmt(", delta err %.3g%%", 100.0 * err_delta) + fmt(", delta_p err %.3g%%", 100.0 * err_delta_p) +
               ", assignment " + (assignment_ok ? "correct" : "wrong") +
               fmt(", max peak deviation %.2e nm", rt.best.max_peak_deviation_nm) + fmt(", %.1f s", elapsed);
    return o;
}

// ---- 4 ----------------------------------------------------------------------

Outcome degenerate_manifold(const std::vector<PeakObservation>& observations)
{
    const Timer timer;
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(1.30 + 0.06 * i);
    GAConfig config;
    config.population_size = 100;
    config.generations = 100;
    const auto family = solution_family(observations, grid, config);
    bool decreasing = true;
    double worst = 0.0;
    double dmin = family.front().params.delta;
    double dmax = dmin;
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (i > 0 && !(family[i].params.numerical_aperture < family[i - 1].params.numerical_aperture)) {
            decreasing = false;
        }
        worst = std::max(worst, family[i].max_peak_deviation_nm);
        dmin = std::min(dmin, family[i].params.delta);
        dmax = std::max(dmax, family[i].params.delta);
    }
    Outcome o;
    o.pass = family.size() >= 8 && decreasing && worst <= 1.5;
    o.detail = std::to_string(family.size()) + " r0 points 1.30-1.72 um, NA " +
               fmt("%.4f", family.front().params.numerical_aperture) + " -> " +
               fmt("%.4f", family.back().params.numerical_aperture) +
               (decreasing ? " strictly decreasing" : " NOT monotone") + fmt(", worst peak deviation %.3f nm", worst) +
               fmt(", delta spread %.2f%%", 100.0 * (dmax - dmin) / dmin) + fmt(", %.1f s", timer.seconds());
    return o;
}

// ---- 5 ----------------------------------------------------------------------

Outcome mfd_checks()
{
    const FiberParams a{1.742, 0.167, 0.0, 0.0, 0.145};
    const FiberParams b{1.45, 0.20, 0.0, 0.0, 0.145};
    const double ma = mode_field_diameter(a, 705.0);
    const double mb = mode_field_diameter(b, 705.0);
    Outcome o;
    o.pass = std::abs(ma - 4.0) <= 0.4 && std::abs(mb - 3.27) <= 0.327;
    o.detail = fmt("(1.742 um, 0.167): %.3f um", ma) + fmt(" (%+.1f%% vs 4.0)", 100.0 * (ma - 4.0) / 4.0) +
               fmt("; (1.45 um, 0.20): %.3f um", mb) + fmt(" (%+.1f%% vs 3.27)", 100.0 * (mb - 3.27) / 3.27);
    return o;
}

// ---- 6 ----------------------------------------------------------------------

/// Ridge profile of a monochromatic JSI: per signal row, the largest
/// intensity and its column.
struct Ridge {
    std::vector<double> omega_s;
    std::vector<double> peak;
    std::vector<std::size_t> column;
};

Ridge ridge_of(const JointSpectrum& f)
{
    Ridge r;
    for (std::size_t is = 0; is < f.grid.rows(); ++is) {
        std::size_t best = 0;
        for (std::size_t ii = 1; ii < f.grid.cols(); ++ii) {
            if (f.intensity_at(is, ii) > f.intensity_at(is, best)) best = ii;
        }
        r.omega_s.push_back(f.grid.signal_omega[is]);
        r.peak.push_back(f.intensity_at(is, best));
        r.column.push_back(best);
    }
    return r;
}

Outcome jsa_properties()
{
    const Timer timer;
    const auto c = bold_processes().at("C");
    const double pump_nm = 705.0;
    const PumpEnvelope mono{pump_nm, 0.0, PumpShape::monochromatic};
    const double wp = mono.center_omega();

    const PMPoint* root = nullptr;
    const auto roots = pm_curve(c, kTruth, pump_nm, pump_nm, 1);
    for (const auto& r : roots) {
        if (r.signal_is_red() && (!root || r.signal_nm < root->signal_nm)) root = &r;
    }
    if (!root) return {false, "no phasematched root for process C"};

    const std::size_t n = 401;
    const double half_span = 2e13;
    const auto grid = SpectralGrid::centered(root->signal_nm, root->idler_nm, half_span, n, n);
    const double cell = std::abs(grid.idler_step());

    FiberParams fiber = kTruth;
    const auto f1 = jsa(c, fiber, mono, grid);
    fiber.length_m = 2.0 * kTruth.length_m;
    const auto f2 = jsa(c, fiber, mono, grid);
    const auto r1 = ridge_of(f1);
    const auto r2 = ridge_of(f2);

    // Ridge on ws + wi = 2 wp.
    double worst_offset = 0.0;
    for (std::size_t is = 0; is < n; ++is) {
        if (r1.peak[is] <= 0.0) continue;
        worst_offset = std::max(worst_offset, std::abs(grid.signal_omega[is] + grid.idler_omega[r1.column[is]] - 2.0 * wp));
    }
    const bool ridge_ok = worst_offset <= cell;

    // Central sinc lobe width along the ridge.
    const double w1 = sampled_fwhm(r1.omega_s, r1.peak);
    const double w2 = sampled_fwhm(r2.omega_s, r2.peak);
    const double ratio = w1 / w2;
    const bool scaling_ok = w1 > 0.0 && w2 > 0.0 && std::abs(ratio - 2.0) <= 0.05 * 2.0;

    // Ridge maximum against the phasematching root.
    const auto top = static_cast<std::size_t>(std::max_element(r1.peak.begin(), r1.peak.end()) - r1.peak.begin());
    const double ws_root = angular_frequency(root->signal_nm);
    const double wi_root = angular_frequency(root->idler_nm);
    const bool coincide = std::abs(grid.signal_omega[top] - ws_root) <= std::abs(grid.signal_step()) &&
                          std::abs(grid.idler_omega[r1.column[top]] - wi_root) <= cell;

    const double elapsed = timer.seconds();
    Outcome o;
    o.pass = ridge_ok && scaling_ok && coincide && elapsed < 30.0;
    o.detail = fmt("ridge offset %.2f cells", worst_offset / cell) + fmt(", lobe width ratio L/2L %.4f", ratio) +
               " (target 2 +/- 5%), JSI maximum " + (coincide ? "within" : "outside") +
               " one cell of the root" + fmt(", %.1f s", elapsed);
    return o;
}

// ---- 7 ----------------------------------------------------------------------

Outcome feasibility(const FiberParams& fitted)
{
    const double pump = 705.0;
    const auto a = bold_processes().at("A");
    const auto c = bold_processes().at("C");
    const auto peak_a = predict_peak(fitted, a, pump, 821.0);
    const auto peak_c = predict_peak(fitted, c, pump, 795.0);
    if (!peak_a || !peak_c) return {false, "fitted fiber has no peaks for A or C at 705 nm"};
    const GridAxis r0{1.0, 2.5, 61};
    const GridAxis na{0.10, 0.30, 61};
    const auto map_a = feasibility_map(a, pump, (*peak_a)[0], (*peak_a)[1], r0, na, fitted.delta, fitted.delta_p,
                                       fitted.length_m);
    const auto map_c = feasibility_map(c, pump, (*peak_c)[0], (*peak_c)[1], r0, na, fitted.delta, fitted.delta_p,
                                       fitted.length_m);
    const std::size_t pm_a = map_a.count(Feasibility::phasematched);
    const std::size_t pm_c = map_c.count(Feasibility::phasematched);

    // Process A carries LP11 on pump 2 (at the pump) and on the idler.
    std::size_t misclassified = 0;
    std::size_t expected_unsupported = 0;
    for (std::size_t ir = 0; ir < r0.n; ++ir) {
        for (std::size_t ia = 0; ia < na.n; ++ia) {
            const double v_pump = 2.0 * kPi * r0.at(ir) * na.at(ia) / (pump * 1e-3);
            const double v_idler = 2.0 * kPi * r0.at(ir) * na.at(ia) / ((*peak_a)[1] * 1e-3);
            const bool cut = std::min(v_pump, v_idler) < 2.404825557695773;
            expected_unsupported += cut ? 1 : 0;
            if (cut != (map_a.at(ir, ia) == Feasibility::unsupported)) ++misclassified;
            if (map_c.at(ir, ia) == Feasibility::unsupported) ++misclassified;
        }
    }
    Outcome o;
    o.pass = pm_c > pm_a && misclassified == 0;
    o.detail = "61x61 cells over r0 1.0-2.5 um, NA 0.10-0.30: phasematched C " + std::to_string(pm_c) + " vs A " +
               std::to_string(pm_a) + "; LP11-unsupported cells " + std::to_string(map_a.count(Feasibility::unsupported)) +
               " (V-cutoff expects " + std::to_string(expected_unsupported) + "), misclassified " +
               std::to_string(misclassified);
    return o;
}

// ---- 8 ----------------------------------------------------------------------

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome determinism()
{
    const fs::path dir = fs::temp_directory_path() / ("sfwm_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    const fs::path config = dir / "fiber.conf";
    std::ofstream(config) << "core_radius_um = 1.45\nna = 0.20\ndelta = 2.38e-4\ndelta_p = 4.57e-4\n"
                             "length_m = 0.145\npump_center_nm = 705\nga_seed = 42\n";
    const fs::path observations = dir / "obs.csv";
    const std::string base = std::string("env -u SFWM_CONFIG ") + SFWM_CLI_PATH + " -c " + config.string();
    if (std::system((base + " simulate-peaks --pumps 695 705 715 -o " + observations.string()).c_str()) != 0) {
        return {false, "simulate-peaks failed"};
    }
    const std::vector<std::pair<std::string, std::string>> commands{
        {"modes", "modes"},
        {"enumerate", "enumerate 2>/dev/null"},
        {"enumerate-json", "--format json enumerate 2>/dev/null"},
        {"phasematch", "phasematch --points 4"},
        {"jsi", "jsi --rows 41 --cols 41"},
        {"jsi-json", "--format json --pump-shape monochromatic jsi --rows 21 --cols 21"},
        {"simulate-peaks", "simulate-peaks"},
        {"fit", "fit " + observations.string() + " --pop 24 --gens 6"},
        {"fit-threads", "fit " + observations.string() + " --pop 24 --gens 6 --workers 2"},
        {"field", "field --mode 11ex --radial-points 8 --azimuthal-points 8"},
        {"feasibility", "feasibility --r0-points 9 --na-points 9"},
    };
    std::size_t identical = 0;
    std::string failures;
    std::string fit_single;
    for (const auto& [name, args] : commands) {
        const fs::path a = dir / (name + ".1");
        const fs::path b = dir / (name + ".2");
        const int ca = std::system((base + " -o " + a.string() + " " + args).c_str());
        const int cb = std::system((base + " -o " + b.string() + " " + args).c_str());
        const std::string ta = slurp(a);
        if (ca == 0 && cb == 0 && !ta.empty() && ta == slurp(b)) {
            ++identical;
        } else {
            failures += " " + name;
        }
        if (name == "fit") fit_single = ta;
        if (name == "fit-threads" && ta.find("\"ga_seed\": \"42\"") == std::string::npos) failures += " seed-missing";
    }
    fs::remove_all(dir);
    Outcome o;
    o.pass = failures.empty();
    o.detail = std::to_string(identical) + "/" + std::to_string(commands.size()) +
               " subcommand runs byte-identical on repeat" + (failures.empty() ? "" : "; differing:" + failures);
    return o;
}

}  // namespace

int main()
{
    int failed = 0;
    const auto report = [&](int id, const char* title, const Outcome& o) {
        std::printf("[%s] %d. %s: %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
        std::fflush(stdout);
        failed += o.pass ? 0 : 1;
    };
    const auto guarded = [](const std::function<Outcome()>& f) {
        try {
            return f();
        } catch (const std::exception& e) {
            return Outcome{false, std::string("exception: ") + e.what()};
        }
    };

    report(1, "process-count reproduction", guarded(process_counts));
    report(2, "conservation-rule oracle", guarded(conservation_rule));
    RoundTrip rt;
    report(3, "round-trip fiber characterization", guarded([&] { return round_trip(rt); }));
    report(4, "degenerate-manifold property", guarded([&] {
               if (rt.observations.empty()) rt.observations = simulate_peaks(kTruth, bold_processes(), kPumps);
               return degenerate_manifold(rt.observations);
           }));
    report(5, "MFD checks", guarded(mfd_checks));
    report(6, "JSA properties", guarded(jsa_properties));
    report(7, "feasibility-map property", guarded([&] {
               const FiberParams fitted = rt.best.params.core_radius_um > 0.0 && !rt.best.assignment.empty()
                                              ? rt.best.params
                                              : kTruth;
               return feasibility(fitted);
           }));
    report(8, "determinism", guarded(determinism));
    std::printf("%d of 8 criteria passed\n", 8 - failed);
    return failed == 0 ? 0 : 1;
}
