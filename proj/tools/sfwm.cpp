// Command-line front end: modes, enumerate, phasematch, jsi, fit,
// simulate-peaks, field and feasibility.

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "sfwm/dispersion.hpp"
#include "sfwm/errors.hpp"
#include "sfwm/gafit.hpp"
#include "sfwm/io.hpp"
#include "sfwm/modefield.hpp"
#include "sfwm/phasematch.hpp"
#include "sfwm/processes.hpp"
#include "sfwm/units.hpp"

using json = nlohmann::ordered_json;
using namespace sfwm;

namespace {

constexpr int kExitCompute = 1;
constexpr int kExitInput = 2;

const char* const kDefaultProcesses[3][2] = {
    {"A", "01x+11ex->01y+11ey"}, {"B", "01x+11ox->01y+11oy"}, {"C", "01x+01x->01y+01y"}};

/// Options shared by every subcommand; unset flags leave the config alone.
struct GlobalOptions {
    std::string config_path;
    std::vector<std::string> overrides;  // key=value
    std::optional<double> r0, na, delta, delta_p, length, pump_nm, pump_bw;
    std::optional<std::string> pump_shape, format, output;
    int verbosity = 0;
};

RunConfig resolve_config(const GlobalOptions& g)
{
    RunConfig config;
    std::string path = g.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("SFWM_CONFIG")) path = env;
    }
    std::vector<KeyValue> values;
    if (!path.empty()) {
        std::ifstream in(path);
        if (!in) throw ConfigError("cannot open config file '" + path + "'");
        values = parse_key_values(in, path);
    }
    const auto add = [&](const char* key, const std::string& value) { values.push_back({key, value, 0}); };
    for (const auto& o : g.overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + o + "'");
        values.push_back({o.substr(0, eq), o.substr(eq + 1), 0});
    }
    if (g.r0) add("core_radius_um", format_double(*g.r0));
    if (g.na) add("na", format_double(*g.na));
    if (g.delta) add("delta", format_double(*g.delta));
    if (g.delta_p) add("delta_p", format_double(*g.delta_p));
    if (g.length) add("length_m", format_double(*g.length));
    if (g.pump_nm) add("pump_center_nm", format_double(*g.pump_nm));
    if (g.pump_shape) add("pump_shape", *g.pump_shape);
    if (g.pump_bw) add("pump_bandwidth_nm", format_double(*g.pump_bw));
    if (g.format) add("output_format", *g.format);
    if (g.output) add("output_path", *g.output);
    apply_key_values(config, values);
    config.verbosity = std::max(config.verbosity, g.verbosity);
    return config;
}

json config_json(const RunConfig& config)
{
    json j = json::object();
    for (const auto& [k, v] : describe(config)) j[k] = v;
    return j;
}

/// Writes the finished output in one go, to the configured path or stdout.
void emit(const RunConfig& config, const std::string& text)
{
    if (config.output_path.empty()) {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(config.output_path, std::ios::binary);
    if (!out) throw ConfigError("cannot write output file '" + config.output_path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing output file '" + config.output_path + "'");
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string_view feasibility_text(Feasibility f)
{
    switch (f) {
    case Feasibility::phasematched: return "phasematched";
    case Feasibility::mismatched: return "mismatched";
    case Feasibility::unsupported: return "unsupported";
    }
    return "";
}

std::vector<ProcessSpec> parse_processes(const std::vector<std::string>& texts)
{
    std::vector<ProcessSpec> out;
    for (const auto& t : texts) out.push_back(parse_process(t));
    return out;
}

json process_json(const ProcessSpec& p)
{
    return {{"pump1", p.pump1.label()}, {"pump2", p.pump2.label()}, {"signal", p.signal.label()},
            {"idler", p.idler.label()}};
}

// ---- modes ----------------------------------------------------------------

struct ModesOptions {
    std::optional<double> wavelength_nm;
    bool include_cut_off = false;
    std::string mfd_definition = "petermann_i";
};

std::string cmd_modes(const RunConfig& config, const ModesOptions& opt)
{
    const double lambda = opt.wavelength_nm.value_or(config.pump.center_nm);
    const auto definition =
        opt.mfd_definition == "petermann_ii" ? MfdDefinition::petermann_ii : MfdDefinition::petermann_i;
    const double v = v_number(config.fiber, lambda);
    const double mfd = mode_field_diameter(config.fiber, lambda, definition);

    struct Row {
        LPMode mode;
        bool guided;
        double n0, n_eff;
    };
    std::vector<Row> rows;
    if (opt.include_cut_off) {
        // Scalar modes up to the first one past cutoff in each family.
        for (int l = 0; l <= 4; ++l) {
            for (int m = 1; m <= 3; ++m) {
                for (auto pol : {Polarization::x, Polarization::y}) {
                    for (auto par : {Parity::even, Parity::odd}) {
                        if (l == 0 && par == Parity::odd) continue;
                        const LPMode mode{l, m, pol, par};
                        try {
                            const auto s = solve_mode(config.fiber, mode, lambda);
                            rows.push_back({mode, true, s.n0, s.n_eff});
                        } catch (const ModeNotGuided&) {
                            rows.push_back({mode, false, std::nan(""), std::nan("")});
                        }
                    }
                }
            }
        }
    } else {
        for (const auto& mode : supported_modes(config.fiber, lambda)) {
            const auto s = solve_mode(config.fiber, mode, lambda);
            rows.push_back({mode, true, s.n0, s.n_eff});
        }
    }
    std::size_t guided = 0;
    for (const auto& r : rows) guided += r.guided ? 1 : 0;

    if (config.output_format == OutputFormat::json) {
        json j;
        j["command"] = "modes";
        j["config"] = config_json(config);
        j["wavelength_nm"] = lambda;
        j["v_number"] = v;
        j["mfd_definition"] = opt.mfd_definition;
        j["mfd_um"] = mfd;
        j["guided_count"] = guided;
        j["modes"] = json::array();
        for (const auto& r : rows) {
            j["modes"].push_back({{"mode", r.mode.label()},
                                  {"l", r.mode.l},
                                  {"m", r.mode.m},
                                  {"polarization", to_string(r.mode.polarization)},
                                  {"parity", to_string(r.mode.parity)},
                                  {"guided", r.guided},
                                  {"cutoff_v", lp_cutoff_v(r.mode.l, r.mode.m)},
                                  {"n0", r.guided ? json(r.n0) : json(nullptr)},
                                  {"n_eff", r.guided ? json(r.n_eff) : json(nullptr)}});
        }
        return dump(j);
    }
    const std::vector<std::pair<std::string, std::string>> extra{
        {"wavelength_nm", format_double(lambda)},
        {"v_number", format_double(v)},
        {"mfd_definition", opt.mfd_definition},
        {"mfd_um", format_double(mfd)},
        {"guided_modes", std::to_string(guided)}};
    std::ostringstream out;
    out << comment_header("modes", config, extra);
    out << "mode,l,m,polarization,parity,guided,cutoff_v,n0,n_eff\n";
    for (const auto& r : rows) {
        out << r.mode.label() << ',' << r.mode.l << ',' << r.mode.m << ',' << to_string(r.mode.polarization) << ','
            << to_string(r.mode.parity) << ',' << (r.guided ? "true" : "false") << ','
            << format_double(lp_cutoff_v(r.mode.l, r.mode.m)) << ',' << format_double(r.n0) << ','
            << format_double(r.n_eff) << '\n';
    }
    return out.str();
}

// ---- enumerate ------------------------------------------------------------

struct EnumerateOptions {
    std::string filter = "xx_yy";
    bool six_mode = false;
};

std::string cmd_enumerate(const RunConfig& config, const EnumerateOptions& opt, std::string& summary)
{
    const double lambda = config.pump.center_nm;
    const auto filter = opt.filter == "none" ? PolarizationFilter::none : PolarizationFilter::xx_yy;
    const std::vector<LPMode> modes = opt.six_mode ? six_mode_basis() : supported_modes(config.fiber, lambda);
    const auto e = enumerate_processes(modes, filter);

    // One row per canonical process of the filtered set.
    std::vector<EnumeratedProcess> rows;
    for (const auto& item : e.ordered) {
        const ProcessSpec c = item.process.canonical();
        if (std::none_of(rows.begin(), rows.end(), [&](const EnumeratedProcess& r) { return r.process == c; })) {
            rows.push_back({c, item.report});
        }
    }
    std::sort(rows.begin(), rows.end(),
              [](const EnumeratedProcess& a, const EnumeratedProcess& b) { return a.process < b.process; });
    std::vector<OverlapTerms> totals;
    if (!e.viable.empty()) totals = total_overlap(e.viable, config.fiber, lambda);

    summary = std::to_string(e.total_ordered) + " total, " + std::to_string(e.filtered_ordered) +
              (filter == PolarizationFilter::xx_yy ? " xx-yy, " : " unfiltered, ") + std::to_string(e.viable.size()) +
              " viable";

    struct Out {
        ProcessSpec p;
        ConservationReport r;
        double o_phi, o_r, o_total;
    };
    std::vector<Out> table;
    for (const auto& row : rows) {
        const double o_phi = azimuthal_overlap(row.process);
        const double o_r = radial_overlap(row.process, config.fiber, lambda);
        double o_total = 0.0;
        for (std::size_t i = 0; i < e.viable.size(); ++i) {
            if (e.viable[i] == row.process) o_total = totals[i].total;
        }
        table.push_back({row.process, row.report, o_phi, o_r, o_total});
    }

    if (config.output_format == OutputFormat::json) {
        json j;
        j["command"] = "enumerate";
        j["config"] = config_json(config);
        j["filter"] = opt.filter;
        j["modes"] = json::array();
        for (const auto& m : modes) j["modes"].push_back(m.label());
        j["total_ordered"] = e.total_ordered;
        j["filtered_ordered"] = e.filtered_ordered;
        j["viable_count"] = e.viable.size();
        j["summary"] = summary;
        j["processes"] = json::array();
        for (const auto& t : table) {
            json row = process_json(t.p);
            row["delta_q"] = t.r.delta_q;
            row["min_abs_delta_l"] = t.r.min_abs_delta_l();
            row["O_phi"] = t.o_phi;
            row["O_r_per_um2"] = t.o_r;
            row["O_total"] = t.o_total;
            row["viable"] = t.r.viable;
            j["processes"].push_back(row);
        }
        return dump(j);
    }
    std::ostringstream out;
    const std::vector<std::pair<std::string, std::string>> extra{{"filter", opt.filter}, {"summary", summary}};
    out << comment_header("enumerate", config, extra);
    out << "pump1,pump2,signal,idler,delta_q,min_abs_delta_l,O_phi,O_r_per_um2,O_total,viable\n";
    for (const auto& t : table) {
        out << t.p.pump1.label() << ',' << t.p.pump2.label() << ',' << t.p.signal.label() << ','
            << t.p.idler.label() << ',' << t.r.delta_q << ',' << t.r.min_abs_delta_l() << ','
            << format_double(t.o_phi) << ',' << format_double(t.o_r) << ',' << format_double(t.o_total) << ','
            << (t.r.viable ? "true" : "false") << '\n';
    }
    return out.str();
}

// ---- phasematch -----------------------------------------------------------

struct PhasematchOptions {
    std::vector<std::string> processes;
    double pump_min_nm = 690.0;
    double pump_max_nm = 720.0;
    std::size_t points = 31;
    double window_nm = 150.0;
};

std::string cmd_phasematch(const RunConfig& config, const PhasematchOptions& opt)
{
    std::vector<ProcessSpec> processes = parse_processes(opt.processes);
    if (processes.empty()) processes = six_mode_viable_xx_yy();
    PMSearchOptions search;
    search.window_nm = opt.window_nm;
    std::vector<PMPoint> points;
    for (const auto& p : processes) {
        auto curve = pm_curve(p, config.fiber, opt.pump_min_nm, opt.pump_max_nm, opt.points, search);
        points.insert(points.end(), curve.begin(), curve.end());
    }
    if (config.output_format == OutputFormat::json) {
        json j;
        j["command"] = "phasematch";
        j["config"] = config_json(config);
        j["points"] = json::array();
        for (const auto& pt : points) {
            j["points"].push_back({{"pump_nm", pt.pump_nm},
                                   {"signal_nm", pt.signal_nm},
                                   {"idler_nm", pt.idler_nm},
                                   {"process_id", pt.process.label()},
                                   {"residual_per_m", pt.residual_per_m}});
        }
        return dump(j);
    }
    std::ostringstream out;
    const std::vector<std::pair<std::string, std::string>> extra{{"pump_min_nm", format_double(opt.pump_min_nm)},
                                                                 {"pump_max_nm", format_double(opt.pump_max_nm)},
                                                                 {"pump_points", std::to_string(opt.points)},
                                                                 {"window_nm", format_double(opt.window_nm)}};
    out << comment_header("phasematch", config, extra);
    out << "pump_nm,signal_nm,idler_nm,process_id,residual_per_m\n";
    for (const auto& pt : points) {
        out << format_double(pt.pump_nm) << ',' << format_double(pt.signal_nm) << ',' << format_double(pt.idler_nm)
            << ',' << pt.process.label() << ',' << format_double(pt.residual_per_m) << '\n';
    }
    return out.str();
}

// ---- jsi ------------------------------------------------------------------

struct JsiOptions {
    std::vector<std::string> processes;
    std::optional<double> signal_nm;
    std::optional<double> idler_nm;
    double half_span_omega = 2e12;
    std::size_t rows = 201;
    std::size_t cols = 201;
};

std::string cmd_jsi(const RunConfig& config, const JsiOptions& opt, std::string& warning)
{
    std::vector<ProcessSpec> processes = parse_processes(opt.processes);
    if (processes.empty()) processes.push_back(parse_process(kDefaultProcesses[2][1]));
    double signal_nm = 0.0;
    double idler_nm = 0.0;
    if (opt.signal_nm) {
        signal_nm = *opt.signal_nm;
        idler_nm = opt.idler_nm.value_or(conjugate_wavelength(config.pump.center_nm, signal_nm));
    } else {
        // Centre on the red-side root of the first process closest to the pump.
        const auto roots = pm_roots(processes.front(), config.fiber, config.pump.center_nm);
        const PMPoint* best = nullptr;
        for (const auto& r : roots) {
            if (r.signal_is_red() && (!best || r.signal_nm < best->signal_nm)) best = &r;
        }
        if (!best) throw NumericalError("no phasematched pair for " + processes.front().label() + "; pass --signal-nm");
        signal_nm = best->signal_nm;
        idler_nm = best->idler_nm;
    }
    const auto grid = SpectralGrid::centered(signal_nm, idler_nm, opt.half_span_omega, opt.rows, opt.cols);

    std::vector<double> intensity(grid.rows() * grid.cols(), 0.0);
    bool phasematched = false;
    if (processes.size() == 1) {
        const auto spectrum = jsa(processes.front(), config.fiber, config.pump, grid);
        intensity = spectrum.intensity;
        phasematched = spectrum.phasematched_in_grid;
    } else {
        const auto state = assemble_state(processes, config.fiber, config.pump, grid);
        for (std::size_t i = 0; i < intensity.size(); ++i) {
            std::complex<double> sum = 0.0;
            for (std::size_t j = 0; j < state.spectra.size(); ++j) sum += state.weights[j] * state.spectra[j].amplitude[i];
            intensity[i] = std::norm(sum);
        }
        for (const auto& s : state.spectra) phasematched = phasematched || s.phasematched_in_grid;
    }
    if (!phasematched) warning = "no grid cell satisfies |L dk| <= 2 pi";

    std::string labels;
    for (const auto& p : processes) labels += (labels.empty() ? "" : ";") + p.label();
    if (config.output_format == OutputFormat::json) {
        json j;
        j["command"] = "jsi";
        j["config"] = config_json(config);
        j["processes"] = labels;
        j["phasematched_in_grid"] = phasematched;
        j["signal_omega_rad_per_s"] = grid.signal_omega;
        j["idler_omega_rad_per_s"] = grid.idler_omega;
        json rows = json::array();
        for (std::size_t is = 0; is < grid.rows(); ++is) {
            rows.push_back(std::vector<double>(intensity.begin() + static_cast<std::ptrdiff_t>(is * grid.cols()),
                                               intensity.begin() + static_cast<std::ptrdiff_t>((is + 1) * grid.cols())));
        }
        j["intensity_per_signal_row"] = rows;
        return dump(j);
    }
    std::ostringstream out;
    const std::vector<std::pair<std::string, std::string>> extra{
        {"processes", labels},
        {"center_signal_nm", format_double(signal_nm)},
        {"center_idler_nm", format_double(idler_nm)},
        {"half_span_omega_rad_per_s", format_double(opt.half_span_omega)},
        {"phasematched_in_grid", phasematched ? "true" : "false"},
        {"layout", "first row: idler omega axis; following rows: signal omega then intensity per idler column"}};
    out << comment_header("jsi", config, extra);
    out << "signal_omega_rad_per_s\\idler_omega_rad_per_s";
    for (double wi : grid.idler_omega) out << ',' << format_double(wi);
    out << '\n';
    for (std::size_t is = 0; is < grid.rows(); ++is) {
        out << format_double(grid.signal_omega[is]);
        for (std::size_t ii = 0; ii < grid.cols(); ++ii) out << ',' << format_double(intensity[is * grid.cols() + ii]);
        out << '\n';
    }
    return out.str();
}

// ---- fit ------------------------------------------------------------------

struct FitOptions {
    std::string observations;
    std::optional<std::size_t> population, generations, workers;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> fitness_variant;
    bool ignore_modes = false;
    std::vector<double> family_r0_um;
};

json solution_json(const FitSolution& s)
{
    json j;
    j["core_radius_um"] = s.params.core_radius_um;
    j["na"] = s.params.numerical_aperture;
    j["delta"] = s.params.delta;
    j["delta_p"] = s.params.delta_p;
    j["fitness_per_m"] = s.fitness_per_m;
    if (!s.assignment.empty()) {
        json a = json::object();
        for (const auto& [label, p] : s.assignment) a[label] = p.label();
        j["assignment"] = a;
        j["max_peak_deviation_nm"] = s.max_peak_deviation_nm;
        json d = json::array();
        for (const auto& dev : s.deviations) {
            d.push_back({{"peak_label", dev.label},
                         {"pump_nm", dev.pump_nm},
                         {"signal_observed_nm", dev.signal_observed_nm},
                         {"signal_predicted_nm", dev.signal_predicted_nm},
                         {"idler_observed_nm", dev.idler_observed_nm},
                         {"idler_predicted_nm", dev.idler_predicted_nm}});
        }
        j["deviations"] = d;
    }
    return j;
}

std::string cmd_fit(RunConfig config, const FitOptions& opt)
{
    std::ifstream in(opt.observations);
    if (!in) throw ConfigError("cannot open observation file '" + opt.observations + "'");
    const auto observations = read_observations_csv(in);
    if (observations.empty()) throw ConfigError("observation file '" + opt.observations + "' has no rows");
    std::vector<KeyValue> values;
    if (opt.population) values.push_back({"ga_population", std::to_string(*opt.population), 0});
    if (opt.generations) values.push_back({"ga_generations", std::to_string(*opt.generations), 0});
    if (opt.workers) values.push_back({"ga_workers", std::to_string(*opt.workers), 0});
    if (opt.seed) values.push_back({"ga_seed", std::to_string(*opt.seed), 0});
    if (opt.fitness_variant) values.push_back({"ga_fitness_variant", *opt.fitness_variant, 0});
    if (opt.ignore_modes) values.push_back({"ga_use_mode_constraints", "false", 0});
    apply_key_values(config, values);

    json j;
    j["command"] = "fit";
    j["config"] = config_json(config);
    j["observations"] = opt.observations;
    if (!opt.family_r0_um.empty()) {
        const auto family = solution_family(observations, opt.family_r0_um, config.ga);
        j["family"] = json::array();
        for (const auto& s : family) j["family"].push_back(solution_json(s));
    } else {
        const auto result = ga_run(observations, config.ga);
        j["best_fitness_history_per_m"] = result.best_fitness_history;
        j["solutions"] = json::array();
        for (const auto& s : result.ranked) {
            if (j["solutions"].size() >= config.ga.report_count) break;
            j["solutions"].push_back(solution_json(s));
        }
    }
    return dump(j);
}

// ---- simulate-peaks -------------------------------------------------------

struct SimulateOptions {
    std::vector<std::string> processes;  // LABEL=process
    std::vector<double> pumps_nm{690, 695, 700, 705, 710, 715, 720};
    bool record_modes = true;
};

std::string cmd_simulate(const RunConfig& config, const SimulateOptions& opt)
{
    Assignment processes;
    if (opt.processes.empty()) {
        for (const auto& [label, text] : kDefaultProcesses) processes[label] = parse_process(text);
    }
    for (const auto& entry : opt.processes) {
        const auto eq = entry.find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("--process expects LABEL=process, got '" + entry + "'");
        processes[entry.substr(0, eq)] = parse_process(entry.substr(eq + 1));
    }
    SimulationOptions sim;
    sim.record_modes = opt.record_modes;
    sim.pump_bandwidth_nm = config.pump.bandwidth_fwhm_nm;
    const auto observations = simulate_peaks(config.fiber, processes, opt.pumps_nm, sim);
    std::ostringstream out;
    std::vector<std::pair<std::string, std::string>> extra;
    for (const auto& [label, p] : processes) extra.emplace_back("process_" + label, p.label());
    out << comment_header("simulate-peaks", config, extra);
    write_observations_csv(out, observations);
    return out.str();
}

// ---- field ----------------------------------------------------------------

struct FieldOptions {
    std::string mode = "01x";
    std::optional<double> wavelength_nm;
    int radial_points = 64;
    int azimuthal_points = 64;
    double r_max_um = 4.0;
};

std::string cmd_field(const RunConfig& config, const FieldOptions& opt)
{
    const double lambda = opt.wavelength_nm.value_or(config.pump.center_nm);
    const TransverseField field(config.fiber, parse_mode(opt.mode), lambda);
    const std::vector<std::pair<std::string, std::string>> extra{
        {"mode", opt.mode}, {"wavelength_nm", format_double(lambda)}, {"normalization", format_double(field.normalization())}};
    return comment_header("field", config, extra) +
           dump_field_grid(field, opt.radial_points, opt.azimuthal_points, opt.r_max_um);
}

// ---- feasibility ----------------------------------------------------------

struct FeasibilityOptions {
    std::string process = kDefaultProcesses[2][1];
    std::optional<double> signal_nm;
    double r0_min = 1.0, r0_max = 2.5;
    double na_min = 0.10, na_max = 0.30;
    std::size_t r0_points = 61, na_points = 61;
};

std::string cmd_feasibility(const RunConfig& config, const FeasibilityOptions& opt)
{
    const ProcessSpec process = parse_process(opt.process);
    const double pump = config.pump.center_nm;
    double signal_nm = 0.0;
    if (opt.signal_nm) {
        signal_nm = *opt.signal_nm;
    } else {
        const auto roots = pm_roots(process, config.fiber, pump);
        const PMPoint* best = nullptr;
        for (const auto& r : roots) {
            if (r.signal_is_red() && (!best || r.signal_nm < best->signal_nm)) best = &r;
        }
        if (!best) throw NumericalError("no phasematched pair for " + process.label() + "; pass --signal-nm");
        signal_nm = best->signal_nm;
    }
    const double idler_nm = conjugate_wavelength(pump, signal_nm);
    const auto map = feasibility_map(process, pump, signal_nm, idler_nm, {opt.r0_min, opt.r0_max, opt.r0_points},
                                     {opt.na_min, opt.na_max, opt.na_points}, config.fiber.delta,
                                     config.fiber.delta_p, config.fiber.length_m, config.fiber.cladding);
    std::ostringstream out;
    const std::vector<std::pair<std::string, std::string>> extra{
        {"process", process.label()},
        {"signal_nm", format_double(signal_nm)},
        {"idler_nm", format_double(idler_nm)},
        {"phasematched_cells", std::to_string(map.count(Feasibility::phasematched))},
        {"mismatched_cells", std::to_string(map.count(Feasibility::mismatched))},
        {"unsupported_cells", std::to_string(map.count(Feasibility::unsupported))}};
    if (config.output_format == OutputFormat::json) {
        json j;
        j["command"] = "feasibility";
        j["config"] = config_json(config);
        for (const auto& [k, v] : extra) j[k] = v;
        j["cells"] = json::array();
        for (std::size_t ir = 0; ir < map.r0_um.n; ++ir) {
            for (std::size_t ia = 0; ia < map.na.n; ++ia) {
                const double ldk = map.l_delta_k[ir * map.na.n + ia];
                j["cells"].push_back({{"r0_um", map.r0_um.at(ir)},
                                      {"na", map.na.at(ia)},
                                      {"class", feasibility_text(map.at(ir, ia))},
                                      {"abs_l_delta_k_rad", std::isfinite(ldk) ? json(ldk) : json(nullptr)}});
            }
        }
        return dump(j);
    }
    out << comment_header("feasibility", config, extra);
    out << "r0_um,na,class,abs_l_delta_k_rad\n";
    for (std::size_t ir = 0; ir < map.r0_um.n; ++ir) {
        for (std::size_t ia = 0; ia < map.na.n; ++ia) {
            out << format_double(map.r0_um.at(ir)) << ',' << format_double(map.na.at(ia)) << ','
                << feasibility_text(map.at(ir, ia)) << ',' << format_double(map.l_delta_k[ir * map.na.n + ia]) << '\n';
        }
    }
    return out.str();
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Spontaneous four-wave mixing in birefringent few-mode fibers"};
    app.require_subcommand(1);
    app.fallthrough();
    GlobalOptions g;
    app.add_option("-c,--config", g.config_path, "Key-value config file (default: $SFWM_CONFIG)");
    app.add_option("--set", g.overrides, "Override a config key, key=value (repeatable)");
    app.add_option("--r0", g.r0, "Core radius in um");
    app.add_option("--na", g.na, "Numerical aperture");
    app.add_option("--delta", g.delta, "Polarization birefringence");
    app.add_option("--delta-p", g.delta_p, "Parity birefringence");
    app.add_option("--length", g.length, "Fiber length in m");
    app.add_option("--pump-nm", g.pump_nm, "Pump centre wavelength in nm");
    app.add_option("--pump-bw", g.pump_bw, "Pump amplitude FWHM in nm");
    app.add_option("--pump-shape", g.pump_shape, "gaussian or monochromatic");
    app.add_option("--format", g.format, "csv or json");
    app.add_option("-o,--output", g.output, "Output file (default: stdout)");
    app.add_flag("-v,--verbose", g.verbosity, "Diagnostics on stderr");

    ModesOptions modes_opt;
    auto* modes = app.add_subcommand("modes", "Guided modes, effective indices and MFD");
    modes->add_option("--wavelength-nm", modes_opt.wavelength_nm, "Wavelength (default: pump centre)");
    modes->add_flag("--all", modes_opt.include_cut_off, "Also list modes beyond cutoff");
    modes->add_option("--mfd", modes_opt.mfd_definition, "petermann_i or petermann_ii")
        ->check(CLI::IsMember({"petermann_i", "petermann_ii"}));

    EnumerateOptions enum_opt;
    auto* enumerate = app.add_subcommand("enumerate", "Process enumeration with conservation diagnostics");
    enumerate->add_option("--filter", enum_opt.filter, "xx_yy or none")->check(CLI::IsMember({"xx_yy", "none"}));
    enumerate->add_flag("--six-mode", enum_opt.six_mode, "Use the LP01/LP11 basis regardless of guidance");

    PhasematchOptions pm_opt;
    auto* phasematch = app.add_subcommand("phasematch", "Phasematching curves over a pump range");
    phasematch->add_option("--process", pm_opt.processes, "Process, e.g. 01x+01x->01y+01y (default: all viable)");
    phasematch->add_option("--pump-min", pm_opt.pump_min_nm, "Lowest pump wavelength in nm");
    phasematch->add_option("--pump-max", pm_opt.pump_max_nm, "Highest pump wavelength in nm");
    phasematch->add_option("--points", pm_opt.points, "Number of pump wavelengths")->check(CLI::PositiveNumber);
    phasematch->add_option("--window-nm", pm_opt.window_nm, "Signal search window either side of the pump");

    JsiOptions jsi_opt;
    auto* jsi_cmd = app.add_subcommand("jsi", "Joint spectral intensity on a frequency grid");
    jsi_cmd->add_option("--process", jsi_opt.processes, "Process (repeatable; several give the composite state)");
    jsi_cmd->add_option("--signal-nm", jsi_opt.signal_nm, "Grid centre for the signal");
    jsi_cmd->add_option("--idler-nm", jsi_opt.idler_nm, "Grid centre for the idler");
    jsi_cmd->add_option("--half-span", jsi_opt.half_span_omega, "Half grid span in rad/s");
    jsi_cmd->add_option("--rows", jsi_opt.rows, "Signal samples")->check(CLI::PositiveNumber);
    jsi_cmd->add_option("--cols", jsi_opt.cols, "Idler samples")->check(CLI::PositiveNumber);

    FitOptions fit_opt;
    auto* fit_cmd = app.add_subcommand("fit", "Genetic-algorithm fiber characterization");
    fit_cmd->add_option("observations", fit_opt.observations, "Peak observation CSV")->required();
    fit_cmd->add_option("--pop", fit_opt.population, "Population size");
    fit_cmd->add_option("--gens", fit_opt.generations, "Generations");
    fit_cmd->add_option("--seed", fit_opt.seed, "Random seed");
    fit_cmd->add_option("--workers", fit_opt.workers, "Fitness evaluation threads");
    fit_cmd->add_option("--fitness-variant", fit_opt.fitness_variant, "sum_of_abs or abs_of_sum")
        ->check(CLI::IsMember({"sum_of_abs", "abs_of_sum"}));
    fit_cmd->add_flag("--ignore-modes", fit_opt.ignore_modes, "Do not restrict processes by measured modes");
    fit_cmd->add_option("--family", fit_opt.family_r0_um, "Fit with r0 pinned at each of these values (um)");

    SimulateOptions sim_opt;
    bool no_modes = false;
    auto* simulate = app.add_subcommand("simulate-peaks", "Synthetic peak observations from a known fiber");
    simulate->add_option("--process", sim_opt.processes, "LABEL=process (default: the A, B, C processes)");
    simulate->add_option("--pumps", sim_opt.pumps_nm, "Pump wavelengths in nm");
    simulate->add_flag("--no-modes", no_modes, "Leave the mode columns empty");

    FieldOptions field_opt;
    auto* field = app.add_subcommand("field", "Normalized transverse field on a polar grid");
    field->add_option("--mode", field_opt.mode, "Mode label, e.g. 11ex");
    field->add_option("--wavelength-nm", field_opt.wavelength_nm, "Wavelength (default: pump centre)");
    field->add_option("--radial-points", field_opt.radial_points)->check(CLI::PositiveNumber);
    field->add_option("--azimuthal-points", field_opt.azimuthal_points)->check(CLI::PositiveNumber);
    field->add_option("--r-max", field_opt.r_max_um, "Outer radius in um");

    FeasibilityOptions feas_opt;
    auto* feasibility = app.add_subcommand("feasibility", "Phasematching feasibility over (r0, NA)");
    feasibility->add_option("--process", feas_opt.process, "Process");
    feasibility->add_option("--signal-nm", feas_opt.signal_nm, "Signal wavelength (default: root at the config fiber)");
    feasibility->add_option("--r0-min", feas_opt.r0_min);
    feasibility->add_option("--r0-max", feas_opt.r0_max);
    feasibility->add_option("--r0-points", feas_opt.r0_points)->check(CLI::PositiveNumber);
    feasibility->add_option("--na-min", feas_opt.na_min);
    feasibility->add_option("--na-max", feas_opt.na_max);
    feasibility->add_option("--na-points", feas_opt.na_points)->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }
    sim_opt.record_modes = !no_modes;

    try {
        const RunConfig config = resolve_config(g);
        std::string text;
        if (modes->parsed()) {
            text = cmd_modes(config, modes_opt);
        } else if (enumerate->parsed()) {
            std::string summary;
            text = cmd_enumerate(config, enum_opt, summary);
            std::cerr << summary << '\n';
        } else if (phasematch->parsed()) {
            text = cmd_phasematch(config, pm_opt);
        } else if (jsi_cmd->parsed()) {
            std::string warning;
            text = cmd_jsi(config, jsi_opt, warning);
            if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
        } else if (fit_cmd->parsed()) {
            text = cmd_fit(config, fit_opt);
        } else if (simulate->parsed()) {
            text = cmd_simulate(config, sim_opt);
        } else if (field->parsed()) {
            text = cmd_field(config, field_opt);
        } else if (feasibility->parsed()) {
            text = cmd_feasibility(config, feas_opt);
        }
        emit(config, text);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitInput;
    } catch (const InvalidMode& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const AssignmentError& e) {
        std::cerr << "input error: " << e.what() << '\n';
        return kExitInput;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCompute;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitCompute;
    }
    return 0;
}
