#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <sstream>

#include "sfwm/errors.hpp"
#include "sfwm/io.hpp"

using namespace sfwm;

TEST_CASE("formatted doubles parse back bit-exactly")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 5000; ++i) {
        double x = 0.0;
        const std::uint64_t bits = rng();
        std::memcpy(&x, &bits, sizeof x);
        if (!std::isfinite(x)) continue;
        const auto back = parse_double(format_double(x));
        REQUIRE(back.has_value());
        CHECK(std::memcmp(&*back, &x, sizeof x) == 0);
    }
    CHECK(format_double(0.2) == "0.2");
    CHECK(format_double(705.0) == "705");
}

TEST_CASE("strict number parsing")
{
    CHECK(parse_double(" 1.5 ") == 1.5);
    CHECK(parse_double("+2e-4") == 2e-4);
    CHECK_FALSE(parse_double("1.5nm").has_value());
    CHECK_FALSE(parse_double("").has_value());
    CHECK_FALSE(parse_double("abc").has_value());
}

TEST_CASE("key-value files")
{
    std::istringstream in("# comment\ncore_radius_um = 1.6\n\nna: 0.18   # trailing\n");
    const auto kv = parse_key_values(in);
    REQUIRE(kv.size() == 2);
    CHECK(kv[0].key == "core_radius_um");
    CHECK(kv[1].value == "0.18");
    CHECK(kv[1].line == 4);
    RunConfig config;
    apply_key_values(config, kv);
    CHECK(config.fiber.core_radius_um == 1.6);
    CHECK(config.fiber.numerical_aperture == 0.18);

    std::istringstream broken("core_radius_um 1.6\n");
    CHECK_THROWS_AS(parse_key_values(broken), ConfigError);
}

TEST_CASE("configuration errors name the offending key")
{
    const auto message = [](const std::vector<KeyValue>& kv) {
        RunConfig config;
        try {
            apply_key_values(config, kv);
        } catch (const ConfigError& e) {
            return std::string(e.what());
        }
        return std::string();
    };
    CHECK(message({{"core_radius", "1.5", 1}}).find("core_radius") != std::string::npos);
    CHECK(message({{"na", "wide", 1}}).find("'na'") != std::string::npos);
    CHECK(message({{"pump_shape", "square", 1}}).find("pump_shape") != std::string::npos);
    CHECK_FALSE(message({{"na", "1.5", 1}}).empty());
    CHECK_FALSE(message({{"ga_population", "2", 1}}).empty());
}

TEST_CASE("monochromatic pump setting clears the bandwidth")
{
    RunConfig config;
    const std::vector<KeyValue> kv{{"pump_shape", "monochromatic", 1}};
    apply_key_values(config, kv);
    CHECK(config.pump.shape == PumpShape::monochromatic);
    CHECK(config.pump.bandwidth_fwhm_nm == 0.0);
}

TEST_CASE("described configuration reapplies to the same settings")
{
    RunConfig config;
    config.fiber.core_radius_um = 1.61;
    config.fiber.delta = 2.5e-4;
    config.ga.seed = 17;
    config.ga.bounds[kDeltaP] = {1e-4, 8e-4};
    std::vector<KeyValue> kv;
    for (const auto& [k, v] : describe(config)) kv.push_back({k, v, 0});
    RunConfig again;
    apply_key_values(again, kv);
    CHECK(again.fiber == config.fiber);
    CHECK(again.ga.seed == 17);
    CHECK(again.ga.bounds[kDeltaP].hi == 8e-4);
    CHECK(describe(again) == describe(config));
    const std::string header = comment_header("modes", config);
    std::istringstream lines(header);
    std::string line;
    while (std::getline(lines, line)) CHECK(line.rfind("# ", 0) == 0);
}

TEST_CASE("observation files round trip")
{
    std::vector<PeakObservation> obs(2);
    obs[0] = {705.0, "A", 821.1354, 617.6448, parse_mode("01y"), parse_mode("11ey"), 0.4, 0.3, 0.5};
    obs[1] = {705.0, "C", 795.39, 633.06, std::nullopt, std::nullopt, 0.0, 0.0, 0.5};
    std::stringstream buffer;
    write_observations_csv(buffer, obs);
    const auto back = read_observations_csv(buffer);
    REQUIRE(back.size() == 2);
    CHECK(back[0].signal_nm == obs[0].signal_nm);
    CHECK(back[0].idler_mode == obs[0].idler_mode);
    CHECK(back[0].signal_width_nm == 0.4);
    CHECK_FALSE(back[1].signal_mode.has_value());
}

TEST_CASE("observation files without mode columns")
{
    std::istringstream in("# measured\npump_nm,peak_label,signal_nm,idler_nm\n700,A,811.7,615.3\n");
    const auto obs = read_observations_csv(in);
    REQUIRE(obs.size() == 1);
    CHECK(obs[0].label == "A");
    CHECK_FALSE(obs[0].idler_mode.has_value());
    std::istringstream missing("pump_nm,peak_label,signal_nm\n700,A,811.7\n");
    CHECK_THROWS_AS(read_observations_csv(missing), ConfigError);
    std::istringstream bad("pump_nm,peak_label,signal_nm,idler_nm\n700,A,x,615.3\n");
    CHECK_THROWS_AS(read_observations_csv(bad), ConfigError);
}
