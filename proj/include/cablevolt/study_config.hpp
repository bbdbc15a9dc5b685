#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cablevolt/annual_energy.hpp"

namespace cablevolt {

inline constexpr std::string_view kBuiltinCableProfile = "brakelmann-220kV-1000mm2";

/// 220 kV, 1000 mm2 submarine cable at 50 Hz; length set to 200 km.
CableSpec builtin_cable(std::string_view name);

struct SweepStudy {
    std::vector<double> lengths_km;
    std::vector<double> p_farm_mw;
    std::vector<double> voltages_pu;
    std::optional<std::pair<double, double>> optimal_range_pu;
};

struct AnnualStudy {
    std::vector<double> rated_power_mw;
    std::optional<std::string> curve_csv;  ///< resolved path
    SynthOptions synth;                    ///< used when no curve file is given
    std::vector<VoltageStrategy> strategies;
    double voltage_cap_pu = 1.0;
};

struct EnvelopeStudy {
    std::vector<double> lengths_km;
    std::vector<double> voltages_pu;
};

/// Everything a CLI run needs, in SI units.
struct StudyConfig {
    std::string cable_profile{kBuiltinCableProfile};
    CableSpec cable;
    Constraints constraints;
    SweepStudy sweep;
    AnnualStudy annual;
    EnvelopeStudy envelope;
};

/// Built-in cable with the default studies.
StudyConfig default_config();

/// Parses a JSON config on top of the defaults. Keys carry their units
/// (e.g. "l_mh_per_km"); unknown keys are rejected. Relative curve paths are
/// resolved against base_dir.
StudyConfig parse_config(const nlohmann::json& doc, const std::string& base_dir = ".");
StudyConfig load_config(const std::string& path);

/// Throws ConfigError on out-of-range values; run again after CLI overrides.
void validate_config(const StudyConfig& config);

/// Normalised SI view of the config, used for echoing and hashing.
nlohmann::json to_json(const StudyConfig& config);

/// FNV-1a of the normalised config dump.
std::uint64_t config_hash(const StudyConfig& config);

/// "start:stop:step" inclusive sequence with a fixed step.
std::vector<double> inclusive_range(double start, double stop, double step);

/// Parses "fixed:V", "range:LO:HI" or "tap:NOMINAL:VARIATION".
VoltageStrategy parse_strategy(std::string_view text, double cap = 1.0);

}  // namespace cablevolt
