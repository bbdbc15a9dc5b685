#include "cablevolt/study_config.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "cablevolt/errors.hpp"

namespace cablevolt {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError("'" + where + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (allowed.count(key) == 0U) {
            throw ConfigError("unknown key '" + key + "' in '" + where + "'");
        }
    }
}

double number(const json& obj, const std::string& key, const std::string& where) {
    const json& v = obj.at(key);
    if (!v.is_number()) {
        throw ConfigError("'" + where + "." + key + "' must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError("'" + where + "." + key + "' must be finite");
    }
    return d;
}

void read_number(const json& obj, const std::string& key, const std::string& where, double& out,
                 double scale = 1.0) {
    if (obj.contains(key)) {
        out = number(obj, key, where) * scale;
    }
}

/// A list of numbers, or {"start", "stop", "step"}.
std::vector<double> number_list(const json& v, const std::string& where) {
    if (v.is_array()) {
        std::vector<double> out;
        for (const json& x : v) {
            if (!x.is_number()) {
                throw ConfigError("'" + where + "' must contain numbers only");
            }
            out.push_back(x.get<double>());
        }
        if (out.empty()) {
            throw ConfigError("'" + where + "' must not be empty");
        }
        return out;
    }
    if (v.is_number()) {
        return {v.get<double>()};
    }
    reject_unknown(v, {"start", "stop", "step"}, where);
    return inclusive_range(number(v, "start", where), number(v, "stop", where), number(v, "step", where));
}

VoltageStrategy strategy_from_json(const json& v, double cap) {
    reject_unknown(v, {"fixed_pu", "range_pu", "tap"}, "annual.strategies[]");
    if (v.size() != 1) {
        throw ConfigError("each strategy needs exactly one of fixed_pu, range_pu, tap");
    }
    if (v.contains("fixed_pu")) {
        return VoltageStrategy::fixed(number(v, "fixed_pu", "strategy"));
    }
    if (v.contains("range_pu")) {
        const auto r = number_list(v.at("range_pu"), "strategy.range_pu");
        if (r.size() != 2) {
            throw ConfigError("range_pu needs [lo, hi]");
        }
        return VoltageStrategy::range(r[0], r[1]);
    }
    const json& tap = v.at("tap");
    reject_unknown(tap, {"nominal_pu", "variation"}, "strategy.tap");
    return VoltageStrategy::tap(number(tap, "nominal_pu", "tap"), number(tap, "variation", "tap"), cap);
}

json strategy_to_json(const VoltageStrategy& s) {
    if (s.kind == VoltageStrategy::Kind::Fixed) {
        return {{"fixed_pu", s.v2_lo}};
    }
    return {{"range_pu", {s.v2_lo, s.v2_hi}}};
}

}  // namespace

void validate_config(const StudyConfig& c) {
    c.cable.validate();
    c.constraints.validate();
    for (const double l : c.sweep.lengths_km) {
        if (!(l > 0.0)) {
            throw ConfigError("sweep lengths must be > 0 km");
        }
    }
    for (const double p : c.sweep.p_farm_mw) {
        if (!(p > 0.0)) {
            throw ConfigError("sweep production levels must be > 0 MW");
        }
    }
    for (const double v : c.sweep.voltages_pu) {
        if (!(v > 0.0)) {
            throw ConfigError("sweep voltages must be > 0 p.u.");
        }
    }
    if (c.sweep.optimal_range_pu) {
        const auto [lo, hi] = *c.sweep.optimal_range_pu;
        if (!(lo > 0.0 && lo <= hi)) {
            throw ConfigError("optimal range must satisfy 0 < lo <= hi");
        }
    }
    for (const double p : c.annual.rated_power_mw) {
        if (!(p > 0.0)) {
            throw ConfigError("rated farm power must be > 0 MW");
        }
    }
    for (const VoltageStrategy& s : c.annual.strategies) {
        s.validate(c.annual.voltage_cap_pu);
    }
    for (const double l : c.envelope.lengths_km) {
        if (!(l > 0.0)) {
            throw ConfigError("envelope lengths must be > 0 km");
        }
    }
    for (const double v : c.envelope.voltages_pu) {
        if (!(v > 0.0)) {
            throw ConfigError("envelope voltages must be > 0 p.u.");
        }
    }
}

CableSpec builtin_cable(std::string_view name) {
    if (name != kBuiltinCableProfile) {
        throw ConfigError("unknown cable profile '" + std::string(name) + "'");
    }
    CableSpec spec;
    spec.pul.r = 0.048;
    spec.pul.l = 0.37e-3;
    spec.pul.c = 0.18e-6;
    spec.pul.g = 0.0;
    spec.length_km = 200.0;
    spec.nominal_voltage = 220e3;
    spec.rated_current = 1055.0;
    spec.frequency = 50.0;
    return spec;
}

std::vector<double> inclusive_range(double start, double stop, double step) {
    if (!(std::isfinite(start) && std::isfinite(stop) && std::isfinite(step) && step > 0.0 && stop >= start)) {
        throw ConfigError("range needs finite start <= stop and step > 0");
    }
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    if (n > 1000000) {
        throw ConfigError("range has too many points");
    }
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = start + step * static_cast<double>(i);
    }
    return out;
}

VoltageStrategy parse_strategy(std::string_view text, double cap) {
    std::vector<std::string> parts;
    std::string cur;
    for (const char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);
    auto num = [&](std::size_t i) {
        try {
            std::size_t used = 0;
            const double d = std::stod(parts.at(i), &used);
            if (used != parts[i].size()) {
                throw ConfigError("bad number");
            }
            return d;
        } catch (const std::exception&) {
            throw ConfigError("cannot parse strategy '" + std::string(text) + "'");
        }
    };
    VoltageStrategy s;
    if (parts[0] == "fixed" && parts.size() == 2) {
        s = VoltageStrategy::fixed(num(1));
    } else if (parts[0] == "range" && parts.size() == 3) {
        s = VoltageStrategy::range(num(1), num(2));
    } else if (parts[0] == "tap" && parts.size() == 3) {
        s = VoltageStrategy::tap(num(1), num(2), cap);
    } else {
        throw ConfigError("strategy must be fixed:V, range:LO:HI or tap:NOMINAL:VARIATION");
    }
    s.validate(cap);
    return s;
}

StudyConfig default_config() {
    StudyConfig c;
    c.cable = builtin_cable(kBuiltinCableProfile);
    c.constraints = Constraints::for_cable(c.cable);
    c.sweep.lengths_km = {c.cable.length_km};
    c.sweep.p_farm_mw = inclusive_range(10.0, 400.0, 10.0);
    c.sweep.voltages_pu = {1.0};
    c.sweep.optimal_range_pu = std::pair{0.4, 1.0};
    c.annual.rated_power_mw = {320.0};
    c.annual.synth.target_uf = 0.46;
    c.annual.strategies = {VoltageStrategy::fixed(1.0), VoltageStrategy::range(0.4, 1.0),
                           VoltageStrategy::tap(0.87, 0.15)};
    c.envelope.lengths_km = inclusive_range(50.0, 400.0, 10.0);
    c.envelope.voltages_pu = {1.0, 0.8, 0.6, 0.4};
    return c;
}

StudyConfig parse_config(const json& doc, const std::string& base_dir) {
    reject_unknown(doc, {"cable", "constraints", "sweep", "annual", "envelope"}, "config");
    StudyConfig c = default_config();

    try {
        if (doc.contains("cable")) {
            const json& j = doc.at("cable");
            reject_unknown(j,
                           {"profile", "length_km", "r_ohm_per_km", "l_mh_per_km", "c_uf_per_km", "g_s_per_km",
                            "nominal_voltage_kv", "rated_current_a", "frequency_hz"},
                           "cable");
            if (j.contains("profile")) {
                c.cable_profile = j.at("profile").get<std::string>();
                c.cable = builtin_cable(c.cable_profile);
            }
            read_number(j, "length_km", "cable", c.cable.length_km);
            read_number(j, "r_ohm_per_km", "cable", c.cable.pul.r);
            read_number(j, "l_mh_per_km", "cable", c.cable.pul.l, 1e-3);
            read_number(j, "c_uf_per_km", "cable", c.cable.pul.c, 1e-6);
            read_number(j, "g_s_per_km", "cable", c.cable.pul.g);
            read_number(j, "nominal_voltage_kv", "cable", c.cable.nominal_voltage, 1e3);
            read_number(j, "rated_current_a", "cable", c.cable.rated_current);
            read_number(j, "frequency_hz", "cable", c.cable.frequency);
        }
        c.constraints.i_rated = c.cable.rated_current;
        c.sweep.lengths_km = {c.cable.length_km};

        if (doc.contains("constraints")) {
            const json& j = doc.at("constraints");
            reject_unknown(j,
                           {"v2_min_pu", "v2_max_pu", "alpha_min", "alpha_max", "rated_current_a",
                            "check_internal_current", "internal_voltage_max_pu", "profile_segments"},
                           "constraints");
            read_number(j, "v2_min_pu", "constraints", c.constraints.v2_min);
            read_number(j, "v2_max_pu", "constraints", c.constraints.v2_max);
            read_number(j, "alpha_min", "constraints", c.constraints.alpha_min);
            read_number(j, "alpha_max", "constraints", c.constraints.alpha_max);
            read_number(j, "rated_current_a", "constraints", c.constraints.i_rated);
            if (j.contains("check_internal_current")) {
                c.constraints.check_internal_current = j.at("check_internal_current").get<bool>();
            }
            if (j.contains("internal_voltage_max_pu") && !j.at("internal_voltage_max_pu").is_null()) {
                c.constraints.internal_voltage_max = number(j, "internal_voltage_max_pu", "constraints");
            }
            if (j.contains("profile_segments")) {
                c.constraints.n_profile_segments = j.at("profile_segments").get<int>();
            }
        }

        if (doc.contains("sweep")) {
            const json& j = doc.at("sweep");
            reject_unknown(j, {"lengths_km", "p_farm_mw", "voltages_pu", "optimal_range_pu"}, "sweep");
            if (j.contains("lengths_km")) {
                c.sweep.lengths_km = number_list(j.at("lengths_km"), "sweep.lengths_km");
            }
            if (j.contains("p_farm_mw")) {
                c.sweep.p_farm_mw = number_list(j.at("p_farm_mw"), "sweep.p_farm_mw");
            }
            if (j.contains("voltages_pu")) {
                c.sweep.voltages_pu = j.at("voltages_pu").empty()
                                          ? std::vector<double>{}
                                          : number_list(j.at("voltages_pu"), "sweep.voltages_pu");
            }
            if (j.contains("optimal_range_pu")) {
                if (j.at("optimal_range_pu").is_null()) {
                    c.sweep.optimal_range_pu.reset();
                } else {
                    const auto r = number_list(j.at("optimal_range_pu"), "sweep.optimal_range_pu");
                    if (r.size() != 2) {
                        throw ConfigError("sweep.optimal_range_pu needs [lo, hi]");
                    }
                    c.sweep.optimal_range_pu = std::pair{r[0], r[1]};
                }
            }
        }

        if (doc.contains("annual")) {
            const json& j = doc.at("annual");
            reject_unknown(j, {"rated_power_mw", "curve_csv", "synth", "strategies", "voltage_cap_pu"}, "annual");
            read_number(j, "voltage_cap_pu", "annual", c.annual.voltage_cap_pu);
            if (j.contains("rated_power_mw")) {
                c.annual.rated_power_mw = number_list(j.at("rated_power_mw"), "annual.rated_power_mw");
            }
            if (j.contains("curve_csv")) {
                std::filesystem::path p = j.at("curve_csv").get<std::string>();
                if (p.is_relative()) {
                    p = std::filesystem::path(base_dir) / p;
                }
                c.annual.curve_csv = p.lexically_normal().string();
            }
            if (j.contains("synth")) {
                const json& s = j.at("synth");
                reject_unknown(s,
                               {"weibull_scale_m_s", "weibull_shape", "cut_in_m_s", "rated_m_s", "cut_out_m_s",
                                "n_bins", "target_uf"},
                               "annual.synth");
                SynthOptions& o = c.annual.synth;
                read_number(s, "weibull_scale_m_s", "synth", o.wind.scale);
                read_number(s, "weibull_shape", "synth", o.wind.shape);
                read_number(s, "cut_in_m_s", "synth", o.turbine.cut_in);
                read_number(s, "rated_m_s", "synth", o.turbine.rated);
                read_number(s, "cut_out_m_s", "synth", o.turbine.cut_out);
                if (s.contains("n_bins")) {
                    o.n_bins = s.at("n_bins").get<int>();
                }
                if (s.contains("target_uf")) {
                    if (s.at("target_uf").is_null()) {
                        o.target_uf.reset();
                    } else {
                        o.target_uf = number(s, "target_uf", "synth");
                    }
                }
            }
            if (j.contains("strategies")) {
                c.annual.strategies.clear();
                for (const json& s : j.at("strategies")) {
                    c.annual.strategies.push_back(strategy_from_json(s, c.annual.voltage_cap_pu));
                }
                if (c.annual.strategies.empty()) {
                    throw ConfigError("annual.strategies must not be empty");
                }
            }
        }

        if (doc.contains("envelope")) {
            const json& j = doc.at("envelope");
            reject_unknown(j, {"lengths_km", "voltages_pu"}, "envelope");
            if (j.contains("lengths_km")) {
                c.envelope.lengths_km = number_list(j.at("lengths_km"), "envelope.lengths_km");
            }
            if (j.contains("voltages_pu")) {
                c.envelope.voltages_pu = number_list(j.at("voltages_pu"), "envelope.voltages_pu");
            }
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config type error: ") + e.what());
    }

    validate_config(c);
    return c;
}

StudyConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    const auto parent = std::filesystem::path(path).parent_path();
    return parse_config(doc, parent.empty() ? "." : parent.string());
}

json to_json(const StudyConfig& c) {
    json out;
    out["cable"] = {
        {"profile", c.cable_profile},
        {"length_m", c.cable.length_km * 1e3},
        {"r_ohm_per_m", c.cable.pul.r * 1e-3},
        {"l_h_per_m", c.cable.pul.l * 1e-3},
        {"c_f_per_m", c.cable.pul.c * 1e-3},
        {"g_s_per_m", c.cable.pul.g * 1e-3},
        {"nominal_voltage_v", c.cable.nominal_voltage},
        {"rated_current_a", c.cable.rated_current},
        {"frequency_hz", c.cable.frequency},
    };
    out["constraints"] = {
        {"v2_min_pu", c.constraints.v2_min},
        {"v2_max_pu", c.constraints.v2_max},
        {"alpha_min", c.constraints.alpha_min},
        {"alpha_max", c.constraints.alpha_max},
        {"rated_current_a", c.constraints.i_rated},
        {"check_internal_current", c.constraints.check_internal_current},
        {"internal_voltage_max_pu",
         c.constraints.internal_voltage_max ? json(*c.constraints.internal_voltage_max) : json(nullptr)},
        {"profile_segments", c.constraints.n_profile_segments},
    };
    std::vector<double> p_w;
    for (const double p : c.sweep.p_farm_mw) {
        p_w.push_back(p * 1e6);
    }
    out["sweep"] = {
        {"lengths_m", [&] {
             std::vector<double> v;
             for (const double l : c.sweep.lengths_km) {
                 v.push_back(l * 1e3);
             }
             return v;
         }()},
        {"p_farm_w", p_w},
        {"voltages_pu", c.sweep.voltages_pu},
        {"optimal_range_pu", c.sweep.optimal_range_pu
                                 ? json{c.sweep.optimal_range_pu->first, c.sweep.optimal_range_pu->second}
                                 : json(nullptr)},
    };
    json strategies = json::array();
    for (const VoltageStrategy& s : c.annual.strategies) {
        strategies.push_back(strategy_to_json(s));
    }
    std::vector<double> rated_w;
    for (const double p : c.annual.rated_power_mw) {
        rated_w.push_back(p * 1e6);
    }
    const SynthOptions& o = c.annual.synth;
    out["annual"] = {
        {"rated_power_w", rated_w},
        {"curve_csv", c.annual.curve_csv ? json(*c.annual.curve_csv) : json(nullptr)},
        {"synth",
         {{"weibull_scale_m_s", o.wind.scale},
          {"weibull_shape", o.wind.shape},
          {"cut_in_m_s", o.turbine.cut_in},
          {"rated_m_s", o.turbine.rated},
          {"cut_out_m_s", o.turbine.cut_out},
          {"n_bins", o.n_bins},
          {"target_uf", o.target_uf ? json(*o.target_uf) : json(nullptr)}}},
        {"strategies", strategies},
        {"voltage_cap_pu", c.annual.voltage_cap_pu},
    };
    std::vector<double> env_m;
    for (const double l : c.envelope.lengths_km) {
        env_m.push_back(l * 1e3);
    }
    out["envelope"] = {{"lengths_m", env_m}, {"voltages_pu", c.envelope.voltages_pu}};
    return out;
}

std::uint64_t config_hash(const StudyConfig& config) {
    const std::string text = to_json(config).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace cablevolt
