#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sfwm/fiber.hpp"
#include "sfwm/gafit.hpp"
#include "sfwm/phasematch.hpp"

namespace sfwm {

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

/// Strict double parse of the whole string; nullopt on any trailing text.
std::optional<double> parse_double(std::string_view text);

enum class OutputFormat { csv, json };

/// Resolved settings of one CLI invocation.
struct RunConfig {
    FiberParams fiber;
    PumpEnvelope pump;
    OutputFormat output_format = OutputFormat::csv;
    std::string output_path;  // empty: standard output
    int verbosity = 0;
    GAConfig ga;
};

struct KeyValue {
    std::string key;
    std::string value;
    int line = 0;
};

/// Reads "key = value" (or "key: value") lines; '#' starts a comment.
/// Throws ConfigError on a line without a separator.
std::vector<KeyValue> parse_key_values(std::istream& in, std::string_view source = "config");

/// Applies recognised keys to `config`. Throws ConfigError naming the key on
/// an unknown key or an unparsable or out-of-range value.
void apply_key_values(RunConfig& config, std::span<const KeyValue> values);

RunConfig load_run_config(const std::string& path);

/// Every resolved setting as (key, value) text, in a fixed order.
std::vector<std::pair<std::string, std::string>> describe(const RunConfig& config);

/// '#'-prefixed header lines recording the command and the resolved config.
std::string comment_header(std::string_view command, const RunConfig& config,
                           std::span<const std::pair<std::string, std::string>> extra = {});

/// CSV with header pump_nm,peak_label,signal_nm,idler_nm,signal_mode,
/// idler_mode,signal_width_nm,idler_width_nm,pump_bw_nm. The mode columns
/// may be absent or empty. '#' lines are skipped.
std::vector<PeakObservation> read_observations_csv(std::istream& in);
void write_observations_csv(std::ostream& out, std::span<const PeakObservation> observations);

}  // namespace sfwm
