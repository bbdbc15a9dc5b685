#include "cablevolt/commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "cablevolt/errors.hpp"

namespace cablevolt {

namespace {

constexpr double kMega = 1e6;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

double flag(bool b) { return b ? 1.0 : 0.0; }

double degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

std::vector<double> flow_values(const FlowSolution& f) {
    return {f.p_farm / kMega, f.q_farm / kMega, f.p_grid / kMega, f.q_grid / kMega,
            f.p_loss / kMega, f.eta.value_or(kNaN), std::abs(f.i1), std::abs(f.i2)};
}

std::vector<Column> flow_columns() {
    return {{"p_farm", "MW"}, {"q_farm", "Mvar"}, {"p_grid", "MW"}, {"q_grid", "Mvar"},
            {"p_loss", "MW"}, {"eta", "-"},       {"i1", "A"},      {"i2", "A"}};
}

ResultTable profile_table(const CableSpec& spec, const OperatingPoint& op, int segments) {
    const double base = spec.phase_voltage_base();
    const Complex v2{op.v2 * base, 0.0};
    const SegmentProfile prof = segment_profile(spec, op.scaling.xi() * v2, v2, segments);
    ResultTable t("internal profile",
                  {{"node", "-"}, {"position", "km"}, {"v", "pu"}, {"v_angle", "deg"}, {"i", "A"},
                   {"segment_loss", "MW"}});
    const auto n = prof.segments();
    for (std::size_t k = 0; k <= n; ++k) {
        const Complex v = prof.node_voltages[k];
        t.add_row({static_cast<double>(k), spec.length_km * static_cast<double>(k) / static_cast<double>(n),
                   std::abs(v) / base, degrees(std::arg(v)), std::abs(prof.line_currents[k]),
                   k < n ? prof.segment_losses[k] / kMega : 0.0});
    }
    return t;
}

std::vector<Column> binding_columns() {
    return {{"bind_v2_max", "-"},  {"bind_v2_min", "-"},   {"bind_current", "-"},
            {"bind_alpha_max", "-"}, {"bind_alpha_min", "-"}, {"bind_internal_voltage", "-"}};
}

std::vector<double> binding_values(const BindingSet& b) {
    return {flag(b.contains(Binding::V2Max)),       flag(b.contains(Binding::V2Min)),
            flag(b.contains(Binding::CurrentLimit)), flag(b.contains(Binding::AlphaMax)),
            flag(b.contains(Binding::AlphaMin)),    flag(b.contains(Binding::InternalVoltage))};
}

std::optional<OptimumPoint> try_optimize(const CableSpec& spec, double p_farm, const Constraints& c) {
    try {
        return optimize_at_production(spec, p_farm, c);
    } catch (const Infeasible&) {
        return std::nullopt;
    }
}

std::string hex64(std::uint64_t h) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace

void stamp_provenance(std::vector<ResultTable>& tables, const StudyConfig& config, const std::string& command) {
    const std::string hash = hex64(config_hash(config));
    for (ResultTable& t : tables) {
        t.add_provenance("command", command);
        t.add_provenance("config_hash", hash);
        t.add_provenance("tool", std::string("cablevolt ") + CABLEVOLT_VERSION);
    }
}

std::vector<ResultTable> cmd_analyze(const StudyConfig& config, double v2, double alpha, double beta_deg,
                                     const RunOptions& options) {
    OperatingPoint op{v2, VoltageScaling::from_degrees(alpha, beta_deg)};
    op.validate();
    const FlowSolution f = solve_flow(config.cable, op);
    const bool no_through = !(f.p_farm > 0.0 && f.p_grid > 0.0);
    if (!f.eta && !options.allow_infeasible) {
        throw ZeroFarmPower("wind side injects no active power at this operating point");
    }

    std::vector<Column> cols{{"length", "km"}, {"v2", "pu"}, {"alpha", "-"}, {"beta", "deg"}};
    for (Column& c : flow_columns()) {
        cols.push_back(std::move(c));
    }
    cols.push_back({"no_through_power", "-"});
    ResultTable t("operating point", std::move(cols));
    std::vector<double> row{config.cable.length_km, v2, alpha, beta_deg};
    for (const double x : flow_values(f)) {
        row.push_back(x);
    }
    row.push_back(flag(no_through));
    t.add_row(std::move(row));

    std::vector<ResultTable> out{std::move(t)};
    if (options.profile_segments > 0) {
        out.push_back(profile_table(config.cable, op, options.profile_segments));
    }
    return out;
}

std::vector<ResultTable> cmd_optimize(const StudyConfig& config, double p_farm_mw, const RunOptions& options) {
    if (!(std::isfinite(p_farm_mw) && p_farm_mw > 0.0)) {
        throw ConfigError("production must be > 0 MW");
    }
    std::vector<Column> cols{{"length", "km"}, {"p_farm", "MW"}, {"v2", "pu"},  {"alpha", "-"},
                             {"beta", "deg"},  {"p_grid", "MW"}, {"p_loss", "MW"}, {"eta", "-"},
                             {"i_max", "A"},   {"feasible", "-"}};
    for (Column& c : binding_columns()) {
        cols.push_back(std::move(c));
    }
    ResultTable t("constrained optimum", std::move(cols));

    const auto best = try_optimize(config.cable, p_farm_mw * kMega, config.constraints);
    if (!best) {
        if (!options.allow_infeasible) {
            throw Infeasible("no operating point within the limits carries " + format_number(p_farm_mw) + " MW");
        }
        std::vector<double> row{config.cable.length_km, p_farm_mw, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, kNaN, 0.0};
        row.resize(row.size() + binding_columns().size(), 0.0);
        t.add_row(std::move(row));
        return {std::move(t)};
    }
    const OperatingPoint& op = best->operating_point;
    std::vector<double> row{config.cable.length_km,
                            best->flow.p_farm / kMega,
                            op.v2,
                            op.scaling.alpha,
                            op.scaling.beta_degrees(),
                            best->flow.p_grid / kMega,
                            best->flow.p_loss / kMega,
                            best->eta(),
                            best->flow.max_terminal_current(),
                            1.0};
    for (const double x : binding_values(best->binding)) {
        row.push_back(x);
    }
    t.add_row(std::move(row));

    std::vector<ResultTable> out{std::move(t)};
    if (options.profile_segments > 0) {
        out.push_back(profile_table(config.cable, op, options.profile_segments));
    }
    return out;
}

std::vector<ResultTable> cmd_sweep(const StudyConfig& config, const RunOptions& options) {
    struct Policy {
        double lo;
        double hi;
        bool range;
    };
    std::vector<Policy> policies;
    for (const double v : config.sweep.voltages_pu) {
        policies.push_back({v, v, false});
    }
    if (config.sweep.optimal_range_pu) {
        policies.push_back({config.sweep.optimal_range_pu->first, config.sweep.optimal_range_pu->second, true});
    }
    if (policies.empty()) {
        throw ConfigError("sweep needs at least one voltage or an optimal range");
    }

    const auto& lengths = config.sweep.lengths_km;
    const auto& powers = config.sweep.p_farm_mw;
    const std::size_t per_length = powers.size() * policies.size();
    const std::size_t n = lengths.size() * per_length;

    struct Row {
        std::vector<double> values;
        bool feasible = false;
    };
    auto rows = parallel_map(n, options.exec, [&](std::size_t idx) {
        const double length = lengths[idx / per_length];
        const double p_mw = powers[(idx % per_length) / policies.size()];
        const Policy& pol = policies[idx % policies.size()];
        const CableSpec spec = config.cable.with_length(length);
        const Constraints limits = config.constraints.with_v2_range(pol.lo, pol.hi);

        auto best = try_optimize(spec, p_mw * kMega, limits);
        const bool feasible = best.has_value();
        if (!feasible && options.allow_infeasible) {
            Constraints relaxed = limits;
            relaxed.i_rated = 1e30;
            relaxed.check_internal_current = false;
            best = try_optimize(spec, p_mw * kMega, relaxed);
        }
        Row r;
        r.feasible = feasible;
        r.values = {length, p_mw, flag(pol.range), pol.lo, pol.hi};
        if (best) {
            const OperatingPoint& op = best->operating_point;
            for (const double x : {best->eta(), op.v2, op.scaling.alpha, op.scaling.beta_degrees(),
                                   best->flow.p_grid / kMega, best->flow.max_terminal_current()}) {
                r.values.push_back(x);
            }
        } else {
            r.values.resize(r.values.size() + 6, kNaN);
        }
        r.values.push_back(flag(feasible));
        return r;
    });

    ResultTable t("efficiency sweep", {{"length", "km"},
                                       {"p_farm", "MW"},
                                       {"variable", "-"},
                                       {"v2_lo", "pu"},
                                       {"v2_hi", "pu"},
                                       {"eta", "-"},
                                       {"v2_used", "pu"},
                                       {"alpha", "-"},
                                       {"beta", "deg"},
                                       {"p_grid", "MW"},
                                       {"i_max", "A"},
                                       {"feasible", "-"}});
    for (Row& r : rows) {
        if (r.feasible || options.allow_infeasible) {
            t.add_row(std::move(r.values));
        }
    }
    return {std::move(t)};
}

std::vector<ResultTable> cmd_annual(const StudyConfig& config, const RunOptions& options) {
    const AnnualStudy& study = config.annual;
    if (study.strategies.empty()) {
        throw ConfigError("annual study needs at least one strategy");
    }
    DurationCurve curve;
    std::string source;
    if (study.curve_csv) {
        curve = read_duration_curve_file(*study.curve_csv);
        source = *study.curve_csv;
    } else {
        const SynthesizedCurve synth = synth_duration_curve(study.synth);
        curve = synth.curve;
        source = "synthetic weibull scale " + format_number(synth.scale) + " m/s";
    }

    ResultTable t("annual efficiency", {{"rated_power", "MW"},
                                        {"strategy", "-"},
                                        {"variable", "-"},
                                        {"v2_lo", "pu"},
                                        {"v2_hi", "pu"},
                                        {"eta_annual", "-"},
                                        {"potential", "MW"},
                                        {"delivered", "MW"},
                                        {"cable_loss", "MW"},
                                        {"curtailed", "MW"},
                                        {"loss_reduction", "%"},
                                        {"feasible", "-"}});
    for (const double rated_mw : study.rated_power_mw) {
        std::vector<std::optional<AnnualResult>> results;
        for (const VoltageStrategy& s : study.strategies) {
            try {
                results.emplace_back(annual_efficiency(config.cable, rated_mw * kMega, curve, s, config.constraints,
                                                       options.exec));
            } catch (const Infeasible&) {
                if (!options.allow_infeasible) {
                    throw;
                }
                results.emplace_back(std::nullopt);
            }
        }
        for (std::size_t i = 0; i < results.size(); ++i) {
            const VoltageStrategy& s = study.strategies[i];
            std::vector<double> row{rated_mw, static_cast<double>(i),
                                    flag(s.kind == VoltageStrategy::Kind::Range), s.v2_lo, s.v2_hi};
            const auto& r = results[i];
            if (r) {
                const double reduction =
                    results[0] ? 100.0 * loss_reduction(*results[0], *r) : kNaN;
                for (const double x : {r->eta_annual, r->energy_potential / kMega, r->energy_delivered / kMega,
                                       r->energy_lost / kMega, r->energy_curtailed / kMega, reduction, 1.0}) {
                    row.push_back(x);
                }
            } else {
                row.resize(row.size() + 6, kNaN);
                row.push_back(0.0);
            }
            t.add_row(std::move(row));
        }
    }
    t.add_provenance("curve", source);
    t.add_provenance("utilization_factor", format_number(utilization_factor(curve)));
    return {std::move(t)};
}

std::vector<ResultTable> cmd_envelope(const StudyConfig& config, const RunOptions& options) {
    const TransferEnvelope env = transfer_envelope(config.cable, config.envelope.lengths_km,
                                                   config.envelope.voltages_pu, config.constraints, options.exec);
    ResultTable t("transfer capability", {{"length", "km"},
                                          {"v2", "pu"},
                                          {"is_envelope", "-"},
                                          {"p_grid_max", "MW"},
                                          {"p_farm_at_max", "MW"},
                                          {"alpha", "-"},
                                          {"beta", "deg"},
                                          {"feasible", "-"}});
    auto add = [&](const EnvelopePoint& p, bool envelope) {
        t.add_row({p.length_km, p.v2, flag(envelope), p.p_grid_max / kMega, p.p_farm_at_max / kMega,
                   p.scaling.alpha, p.scaling.beta_degrees(), flag(p.feasible)});
    };
    const std::size_t nv = config.envelope.voltages_pu.size();
    for (std::size_t li = 0; li < env.envelope.size(); ++li) {
        for (std::size_t vi = 0; vi < nv; ++vi) {
            add(env.fixed[li * nv + vi], false);
        }
        add(env.envelope[li], true);
    }
    return {std::move(t)};
}

}  // namespace cablevolt
