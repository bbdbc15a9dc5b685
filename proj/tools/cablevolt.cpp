// Command-line front end for the export cable studies.
//
// Exit codes: 0 success, 2 configuration error, 3 infeasible or degenerate case.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cablevolt/commands.hpp"
#include "cablevolt/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct Common {
    std::string config_path;
    std::string out_path;
    bool json = false;
    int profile = 0;
    bool allow_infeasible = false;
    bool serial = false;
    std::optional<double> length_km;
};

void add_common(CLI::App& app, Common& c) {
    app.add_option("--config", c.config_path, "JSON study config")->check(CLI::ExistingFile);
    app.add_option("--out", c.out_path, "Output file (default: standard output)");
    app.add_flag("--json", c.json, "Write JSON instead of CSV");
    app.add_option("--profile", c.profile, "Emit an internal profile with N segments")->check(CLI::NonNegativeNumber);
    app.add_flag("--allow-infeasible", c.allow_infeasible, "Keep infeasible rows, flagged");
    app.add_flag("--serial", c.serial, "Disable OpenMP parallel sweeps");
    app.add_option("--length", c.length_km, "Cable length override [km]");
}

void write_output(const Common& c, const std::vector<cablevolt::ResultTable>& tables) {
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!c.out_path.empty()) {
        file.open(c.out_path);
        if (!file) {
            throw cablevolt::ConfigError("cannot write '" + c.out_path + "'");
        }
        out = &file;
    }
    if (c.json) {
        *out << cablevolt::tables_to_json(tables).dump(2) << '\n';
    } else {
        cablevolt::write_tables_csv(*out, tables);
    }
}

/// Bad input data, as opposed to a physically infeasible case.
bool is_config_error(const cablevolt::Error& e) {
    return dynamic_cast<const cablevolt::ConfigError*>(&e) != nullptr ||
           dynamic_cast<const cablevolt::EmptyCurve*>(&e) != nullptr ||
           dynamic_cast<const cablevolt::NegativeWeight*>(&e) != nullptr ||
           dynamic_cast<const cablevolt::PowerOutOfRange*>(&e) != nullptr ||
           dynamic_cast<const cablevolt::UnreachableTarget*>(&e) != nullptr;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Loss and capability studies for HVAC offshore export cables"};
    app.set_version_flag("--version", std::string("cablevolt ") + CABLEVOLT_VERSION);
    app.require_subcommand(1);
    app.fallthrough();

    Common common;
    add_common(app, common);

    double v2 = 1.0;
    double alpha = 1.0;
    double beta_deg = 0.0;
    auto* analyze = app.add_subcommand("analyze", "Power flow at one operating point");
    analyze->add_option("--v2", v2, "Grid-side voltage [p.u.]");
    analyze->add_option("--alpha", alpha, "Voltage magnitude ratio wind/grid");
    analyze->add_option("--beta", beta_deg, "Voltage angle of the wind side [deg]");

    double p_farm_mw = 0.0;
    auto* optimize = app.add_subcommand("optimize", "Most efficient operating point for a production level");
    optimize->add_option("--p-farm", p_farm_mw, "Farm production [MW]")->required();

    std::vector<double> p_range;
    std::vector<double> voltages;
    std::vector<double> optimal_range;
    std::vector<double> sweep_lengths;
    bool no_optimal = false;
    auto* sweep = app.add_subcommand("sweep", "Efficiency against production");
    sweep->add_option("--p-farm", p_range, "START STOP STEP [MW]")->expected(3);
    sweep->add_option("--voltages", voltages, "Fixed grid-side voltages [p.u.]")->delimiter(',');
    sweep->add_option("--optimal-range", optimal_range, "LO HI voltage range [p.u.]")->expected(2);
    sweep->add_flag("--no-optimal", no_optimal, "Drop the variable-voltage policy");
    sweep->add_option("--lengths", sweep_lengths, "Cable lengths [km]")->delimiter(',');

    std::string curve_path;
    std::optional<double> target_uf;
    std::vector<double> rated;
    std::vector<std::string> strategies;
    auto* annual = app.add_subcommand("annual", "Annual efficiency of voltage strategies");
    annual->add_option("--curve", curve_path, "Duration curve CSV (power_pu,weight)")->check(CLI::ExistingFile);
    annual->add_option("--target-uf", target_uf, "Synthesise a curve with this utilization factor");
    annual->add_option("--rated", rated, "Rated farm power [MW]")->delimiter(',');
    annual->add_option("--strategy", strategies, "fixed:V, range:LO:HI or tap:NOMINAL:VARIATION; first is the reference");

    std::vector<double> env_lengths;
    std::vector<double> env_range;
    std::vector<double> env_voltages;
    auto* envelope = app.add_subcommand("envelope", "Maximum transfer against cable length");
    envelope->add_option("--lengths", env_lengths, "Cable lengths [km]")->delimiter(',');
    envelope->add_option("--length-range", env_range, "START STOP STEP [km]")->expected(3);
    envelope->add_option("--voltages", env_voltages, "Grid-side voltages [p.u.]")->delimiter(',');

    auto* config_cmd = app.add_subcommand("config", "Print the normalised config in SI units");

    std::string curve_out;
    cablevolt::SynthOptions synth;
    auto* curve_cmd = app.add_subcommand("curve", "Write a synthetic duration curve");
    curve_cmd->add_option("--target-uf", synth.target_uf, "Utilization factor to hit");
    curve_cmd->add_option("--weibull-scale", synth.wind.scale, "Weibull scale [m/s] when no target is given");
    curve_cmd->add_option("--weibull-shape", synth.wind.shape, "Weibull shape");
    curve_cmd->add_option("--bins", synth.n_bins, "Number of power levels");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        cablevolt::StudyConfig config =
            common.config_path.empty() ? cablevolt::default_config() : cablevolt::load_config(common.config_path);
        if (common.length_km) {
            config.cable.length_km = *common.length_km;
            config.sweep.lengths_km = {*common.length_km};
            cablevolt::validate_config(config);
        }
        cablevolt::RunOptions options;
        options.allow_infeasible = common.allow_infeasible;
        options.profile_segments = common.profile;
        options.exec = common.serial ? cablevolt::Execution::Serial : cablevolt::Execution::Parallel;

        std::vector<cablevolt::ResultTable> tables;
        std::string name;
        if (*analyze) {
            name = "analyze";
            tables = cablevolt::cmd_analyze(config, v2, alpha, beta_deg, options);
        } else if (*optimize) {
            name = "optimize";
            tables = cablevolt::cmd_optimize(config, p_farm_mw, options);
        } else if (*sweep) {
            name = "sweep";
            if (!p_range.empty()) {
                config.sweep.p_farm_mw = cablevolt::inclusive_range(p_range[0], p_range[1], p_range[2]);
            }
            if (!voltages.empty()) {
                config.sweep.voltages_pu = voltages;
            }
            if (!optimal_range.empty()) {
                config.sweep.optimal_range_pu = std::pair{optimal_range[0], optimal_range[1]};
            }
            if (no_optimal) {
                config.sweep.optimal_range_pu.reset();
            }
            if (!sweep_lengths.empty()) {
                config.sweep.lengths_km = sweep_lengths;
            }
            cablevolt::validate_config(config);
            tables = cablevolt::cmd_sweep(config, options);
        } else if (*annual) {
            name = "annual";
            if (!curve_path.empty()) {
                config.annual.curve_csv = curve_path;
            }
            if (target_uf) {
                config.annual.curve_csv.reset();
                config.annual.synth.target_uf = target_uf;
            }
            if (!rated.empty()) {
                config.annual.rated_power_mw = rated;
            }
            if (!strategies.empty()) {
                config.annual.strategies.clear();
                for (const std::string& s : strategies) {
                    config.annual.strategies.push_back(
                        cablevolt::parse_strategy(s, config.annual.voltage_cap_pu));
                }
            }
            cablevolt::validate_config(config);
            tables = cablevolt::cmd_annual(config, options);
        } else if (*envelope) {
            name = "envelope";
            if (!env_range.empty()) {
                config.envelope.lengths_km = cablevolt::inclusive_range(env_range[0], env_range[1], env_range[2]);
            }
            if (!env_lengths.empty()) {
                config.envelope.lengths_km = env_lengths;
            }
            if (!env_voltages.empty()) {
                config.envelope.voltages_pu = env_voltages;
            }
            cablevolt::validate_config(config);
            tables = cablevolt::cmd_envelope(config, options);
        } else if (*config_cmd) {
            std::cout << cablevolt::to_json(config).dump(2) << '\n';
            return 0;
        } else if (*curve_cmd) {
            const auto result = cablevolt::synth_duration_curve(synth);
            std::ofstream file;
            std::ostream* out = &std::cout;
            if (!common.out_path.empty()) {
                file.open(common.out_path);
                out = &file;
            }
            *out << "# synthetic weibull scale " << cablevolt::format_number(result.scale) << " m/s, shape "
                 << cablevolt::format_number(synth.wind.shape) << '\n';
            cablevolt::write_duration_curve_csv(*out, result.curve);
            return 0;
        }
        cablevolt::stamp_provenance(tables, config, name);
        for (const auto& t : tables) {
            if (t.has_non_finite() && !options.allow_infeasible) {
                throw cablevolt::Infeasible("result contains undefined values");
            }
        }
        write_output(common, tables);
        return 0;
    } catch (const cablevolt::Error& e) {
        if (is_config_error(e)) {
            std::cerr << "config error: " << e.what() << '\n';
            return kExitConfig;
        }
        const bool degenerate = dynamic_cast<const cablevolt::DegenerateCable*>(&e) != nullptr ||
                                dynamic_cast<const cablevolt::SingularSystem*>(&e) != nullptr;
        std::cerr << (degenerate ? "degenerate: " : "infeasible: ") << e.what() << '\n';
        return kExitInfeasible;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitConfig;
    }
}
