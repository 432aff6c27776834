#include "sfwm/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <istream>
#include <ostream>
#include <sstream>

#include "sfwm/errors.hpp"

namespace sfwm {

namespace {

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double require_double(const KeyValue& kv)
{
    const auto v = parse_double(kv.value);
    if (!v || !std::isfinite(*v)) {
        throw ConfigError("config key '" + kv.key + "' (line " + std::to_string(kv.line) + "): '" + kv.value +
                          "' is not a number");
    }
    return *v;
}

std::size_t require_count(const KeyValue& kv)
{
    const double v = require_double(kv);
    if (v < 0.0 || v != std::floor(v) || v > 1e12) {
        throw ConfigError("config key '" + kv.key + "': '" + kv.value + "' is not a non-negative integer");
    }
    return static_cast<std::size_t>(v);
}

bool require_bool(const KeyValue& kv)
{
    std::string v = kv.value;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("config key '" + kv.key + "': '" + kv.value + "' is not a boolean");
}

[[noreturn]] void bad_value(const KeyValue& kv, const std::string& why)
{
    throw ConfigError("config key '" + kv.key + "': " + why);
}

std::string bool_text(bool b) { return b ? "true" : "false"; }

std::string_view variant_text(FitnessVariant v)
{
    return v == FitnessVariant::sum_of_abs ? "sum_of_abs" : "abs_of_sum";
}

constexpr const char* kBoundKeys[4] = {"ga_core_radius_um", "ga_na", "ga_delta", "ga_delta_p"};

}  // namespace

std::string format_double(double value)
{
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::optional<double> parse_double(std::string_view text)
{
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    const char* first = t.data();
    if (*first == '+') ++first;
    double v = 0.0;
    const auto res = std::from_chars(first, t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) return std::nullopt;
    return v;
}

std::vector<KeyValue> parse_key_values(std::istream& in, std::string_view source)
{
    std::vector<KeyValue> out;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        auto sep = body.find('=');
        if (sep == std::string::npos) sep = body.find(':');
        if (sep == std::string::npos) {
            throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": expected 'key = value', got '" +
                              body + "'");
        }
        KeyValue kv{trim(body.substr(0, sep)), trim(body.substr(sep + 1)), number};
        if (kv.key.empty()) {
            throw ConfigError(std::string(source) + ":" + std::to_string(number) + ": empty key");
        }
        out.push_back(std::move(kv));
    }
    return out;
}

void apply_key_values(RunConfig& config, std::span<const KeyValue> values)
{
    for (const auto& kv : values) {
        const std::string& k = kv.key;
        if (k == "core_radius_um") {
            config.fiber.core_radius_um = require_double(kv);
        } else if (k == "na") {
            config.fiber.numerical_aperture = require_double(kv);
        } else if (k == "delta") {
            config.fiber.delta = require_double(kv);
        } else if (k == "delta_p") {
            config.fiber.delta_p = require_double(kv);
        } else if (k == "length_m") {
            config.fiber.length_m = require_double(kv);
        } else if (k == "cladding_material") {
            try {
                config.fiber.cladding = parse_cladding_material(kv.value);
            } catch (const Error&) {
                bad_value(kv, "unknown material '" + kv.value + "'");
            }
        } else if (k == "pump_center_nm") {
            config.pump.center_nm = require_double(kv);
        } else if (k == "pump_bandwidth_nm") {
            config.pump.bandwidth_fwhm_nm = require_double(kv);
        } else if (k == "pump_shape") {
            if (kv.value == "gaussian") {
                config.pump.shape = PumpShape::gaussian;
            } else if (kv.value == "monochromatic") {
                config.pump.shape = PumpShape::monochromatic;
                config.pump.bandwidth_fwhm_nm = 0.0;
            } else {
                bad_value(kv, "expected gaussian or monochromatic");
            }
        } else if (k == "output_format") {
            if (kv.value == "csv") {
                config.output_format = OutputFormat::csv;
            } else if (kv.value == "json") {
                config.output_format = OutputFormat::json;
            } else {
                bad_value(kv, "expected csv or json");
            }
        } else if (k == "output_path") {
            config.output_path = kv.value;
        } else if (k == "verbosity") {
            config.verbosity = static_cast<int>(require_count(kv));
        } else if (k == "ga_population") {
            config.ga.population_size = require_count(kv);
        } else if (k == "ga_generations") {
            config.ga.generations = require_count(kv);
        } else if (k == "ga_elite_fraction") {
            config.ga.elite_fraction = require_double(kv);
        } else if (k == "ga_tournament_size") {
            config.ga.tournament_size = require_count(kv);
        } else if (k == "ga_mutation_rate") {
            config.ga.mutation_rate = require_double(kv);
        } else if (k == "ga_mutation_scale") {
            config.ga.mutation_scale.fill(require_double(kv));
        } else if (k == "ga_seed") {
            config.ga.seed = require_count(kv);
        } else if (k == "ga_fitness_variant") {
            if (kv.value == "sum_of_abs") {
                config.ga.fitness_variant = FitnessVariant::sum_of_abs;
            } else if (kv.value == "abs_of_sum") {
                config.ga.fitness_variant = FitnessVariant::abs_of_sum;
            } else {
                bad_value(kv, "expected sum_of_abs or abs_of_sum");
            }
        } else if (k == "ga_use_mode_constraints") {
            config.ga.use_mode_constraints = require_bool(kv);
        } else if (k == "ga_merge_tolerance") {
            config.ga.merge_tolerance = require_double(kv);
        } else if (k == "ga_workers") {
            config.ga.workers = std::max<std::size_t>(1, require_count(kv));
        } else if (k == "ga_report_count") {
            config.ga.report_count = require_count(kv);
        } else {
            bool matched = false;
            for (std::size_t g = 0; g < 4; ++g) {
                const std::string base = kBoundKeys[g];
                if (k == base + "_min") {
                    config.ga.bounds[g].lo = require_double(kv);
                    matched = true;
                } else if (k == base + "_max") {
                    config.ga.bounds[g].hi = require_double(kv);
                    matched = true;
                }
            }
            if (!matched) throw ConfigError("unknown config key '" + k + "' (line " + std::to_string(kv.line) + ")");
        }
    }
    config.ga.length_m = config.fiber.length_m;
    config.ga.cladding = config.fiber.cladding;
    try {
        config.fiber.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid fiber parameters: ") + e.what());
    }
    try {
        config.pump.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid pump settings: ") + e.what());
    }
    try {
        config.ga.validate();
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid GA settings: ") + e.what());
    }
}

RunConfig load_run_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    const auto kv = parse_key_values(in, path);
    RunConfig config;
    apply_key_values(config, kv);
    return config;
}

std::vector<std::pair<std::string, std::string>> describe(const RunConfig& c)
{
    std::vector<std::pair<std::string, std::string>> out{
        {"core_radius_um", format_double(c.fiber.core_radius_um)},
        {"na", format_double(c.fiber.numerical_aperture)},
        {"delta", format_double(c.fiber.delta)},
        {"delta_p", format_double(c.fiber.delta_p)},
        {"length_m", format_double(c.fiber.length_m)},
        {"cladding_material", std::string(to_string(c.fiber.cladding))},
        {"pump_center_nm", format_double(c.pump.center_nm)},
        {"pump_bandwidth_nm", format_double(c.pump.bandwidth_fwhm_nm)},
        {"pump_shape", c.pump.shape == PumpShape::gaussian ? "gaussian" : "monochromatic"},
        {"output_format", c.output_format == OutputFormat::csv ? "csv" : "json"},
        {"ga_population", std::to_string(c.ga.population_size)},
        {"ga_generations", std::to_string(c.ga.generations)},
        {"ga_elite_fraction", format_double(c.ga.elite_fraction)},
        {"ga_tournament_size", std::to_string(c.ga.tournament_size)},
        {"ga_mutation_rate", format_double(c.ga.mutation_rate)},
        {"ga_mutation_scale", format_double(c.ga.mutation_scale[0])},
        {"ga_seed", std::to_string(c.ga.seed)},
        {"ga_fitness_variant", std::string(variant_text(c.ga.fitness_variant))},
        {"ga_use_mode_constraints", bool_text(c.ga.use_mode_constraints)},
        {"ga_merge_tolerance", format_double(c.ga.merge_tolerance)},
    };
    for (std::size_t g = 0; g < 4; ++g) {
        out.emplace_back(std::string(kBoundKeys[g]) + "_min", format_double(c.ga.bounds[g].lo));
        out.emplace_back(std::string(kBoundKeys[g]) + "_max", format_double(c.ga.bounds[g].hi));
    }
    return out;
}

std::string comment_header(std::string_view command, const RunConfig& config,
                           std::span<const std::pair<std::string, std::string>> extra)
{
    std::string out = "# sfwm " + std::string(command) + "\n";
    for (const auto& [k, v] : describe(config)) out += "# " + k + " = " + v + "\n";
    for (const auto& [k, v] : extra) out += "# " + k + " = " + v + "\n";
    return out;
}

std::vector<PeakObservation> read_observations_csv(std::istream& in)
{
    std::string line;
    std::vector<std::string> header;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        header = split_csv(t);
        break;
    }
    if (header.empty()) throw ConfigError("observation file has no header row");
    const auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw ConfigError("observation file lacks column '" + name + "'");
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_pump = *column("pump_nm", true);
    const auto c_label = *column("peak_label", true);
    const auto c_signal = *column("signal_nm", true);
    const auto c_idler = *column("idler_nm", true);
    const auto c_smode = column("signal_mode", false);
    const auto c_imode = column("idler_mode", false);
    const auto c_sw = column("signal_width_nm", false);
    const auto c_iw = column("idler_width_nm", false);
    const auto c_bw = column("pump_bw_nm", false);

    std::vector<PeakObservation> out;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto cells = split_csv(t);
        const auto cell = [&](std::size_t i) -> std::string { return i < cells.size() ? cells[i] : std::string(); };
        const auto number_at = [&](std::size_t i, const char* name) {
            const auto v = parse_double(cell(i));
            if (!v || !std::isfinite(*v)) {
                throw ConfigError("observation line " + std::to_string(number) + ": bad " + name + " '" + cell(i) + "'");
            }
            return *v;
        };
        PeakObservation o;
        o.pump_nm = number_at(c_pump, "pump_nm");
        o.label = cell(c_label);
        if (o.label.empty()) throw ConfigError("observation line " + std::to_string(number) + ": empty peak_label");
        o.signal_nm = number_at(c_signal, "signal_nm");
        o.idler_nm = number_at(c_idler, "idler_nm");
        if (!(o.pump_nm > 0.0 && o.signal_nm > 0.0 && o.idler_nm > 0.0)) {
            throw ConfigError("observation line " + std::to_string(number) + ": wavelengths must be positive");
        }
        try {
            if (c_smode && !cell(*c_smode).empty()) o.signal_mode = parse_mode(cell(*c_smode));
            if (c_imode && !cell(*c_imode).empty()) o.idler_mode = parse_mode(cell(*c_imode));
        } catch (const InvalidMode& e) {
            throw ConfigError("observation line " + std::to_string(number) + ": " + e.what());
        }
        if (c_sw && !cell(*c_sw).empty()) o.signal_width_nm = number_at(*c_sw, "signal_width_nm");
        if (c_iw && !cell(*c_iw).empty()) o.idler_width_nm = number_at(*c_iw, "idler_width_nm");
        if (c_bw && !cell(*c_bw).empty()) o.pump_bandwidth_nm = number_at(*c_bw, "pump_bw_nm");
        out.push_back(std::move(o));
    }
    return out;
}

void write_observations_csv(std::ostream& out, std::span<const PeakObservation> observations)
{
    out << "pump_nm,peak_label,signal_nm,idler_nm,signal_mode,idler_mode,signal_width_nm,idler_width_nm,pump_bw_nm\n";
    for (const auto& o : observations) {
        out << format_double(o.pump_nm) << ',' << o.label << ',' << format_double(o.signal_nm) << ','
            << format_double(o.idler_nm) << ',' << (o.signal_mode ? o.signal_mode->label() : "") << ','
            << (o.idler_mode ? o.idler_mode->label() : "") << ',' << format_double(o.signal_width_nm) << ','
            << format_double(o.idler_width_nm) << ',' << format_double(o.pump_bandwidth_nm) << '\n';
    }
}

}  // namespace sfwm
