#include "cablevolt/annual_energy.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "cablevolt/errors.hpp"

namespace cablevolt {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& text, int line) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last) {
        throw ConfigError("duration curve line " + std::to_string(line) + ": cannot parse '" + text + "'");
    }
    return value;
}

std::string shortest(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

double weibull_cdf(double v, const WeibullWind& w) {
    if (v <= 0.0) {
        return 0.0;
    }
    return 1.0 - std::exp(-std::pow(v / w.scale, w.shape));
}

DurationCurve discretize(const WeibullWind& wind, const TurbinePowerCurve& t, int n_bins) {
    const auto n = static_cast<std::size_t>(n_bins);
    const double span = std::pow(t.rated, 3) - std::pow(t.cut_in, 3);
    // Wind speed at which the cubic power curve reaches p (0 <= p <= 1).
    auto speed_at = [&](double p) { return std::cbrt(std::pow(t.cut_in, 3) + p * span); };

    std::vector<DurationBin> rows(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = static_cast<double>(i) / static_cast<double>(n - 1);
        const double lo = i == 0 ? 0.0 : p - 0.5 / static_cast<double>(n - 1);
        const double hi = i + 1 == n ? 1.0 : p + 0.5 / static_cast<double>(n - 1);
        rows[i] = {p, weibull_cdf(speed_at(hi), wind) - weibull_cdf(speed_at(lo), wind)};
    }
    // Idle below cut-in and above cut-out; rated between rated speed and cut-out.
    rows.front().weight += weibull_cdf(t.cut_in, wind) + (1.0 - weibull_cdf(t.cut_out, wind));
    rows.back().weight += weibull_cdf(t.cut_out, wind) - weibull_cdf(t.rated, wind);
    return load_duration_curve(rows);
}

}  // namespace

DurationCurve load_duration_curve(std::span<const DurationBin> rows) {
    if (rows.empty()) {
        throw EmptyCurve("duration curve has no bins");
    }
    DurationCurve out;
    out.bins.reserve(rows.size());
    double total = 0.0;
    for (const DurationBin& row : rows) {
        if (!std::isfinite(row.power_pu) || row.power_pu < 0.0 || row.power_pu > 1.0 + 1e-9) {
            throw PowerOutOfRange("bin power must lie in [0, 1] p.u.");
        }
        if (!std::isfinite(row.weight) || row.weight < 0.0) {
            throw NegativeWeight("bin weight must be finite and >= 0");
        }
        out.bins.push_back({std::min(row.power_pu, 1.0), row.weight});
        total += row.weight;
    }
    if (!(total > 0.0)) {
        throw EmptyCurve("duration curve has zero total weight");
    }
    // Already-normalised input is kept bit-exact.
    if (std::abs(total - 1.0) > 1e-12) {
        out.normalization = 1.0 / total;
        for (DurationBin& b : out.bins) {
            b.weight /= total;
        }
    }
    return out;
}

double utilization_factor(const DurationCurve& curve) {
    double uf = 0.0;
    for (const DurationBin& b : curve.bins) {
        uf += b.weight * b.power_pu;
    }
    return uf;
}

DurationCurve read_duration_curve_csv(std::istream& in) {
    std::vector<DurationBin> rows;
    std::string line;
    int line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') {
            continue;
        }
        const auto comma = t.find(',');
        if (comma == std::string::npos || t.find(',', comma + 1) != std::string::npos) {
            throw ConfigError("duration curve line " + std::to_string(line_no) + ": expected two columns");
        }
        const std::string first = trim(std::string_view(t).substr(0, comma));
        const std::string second = trim(std::string_view(t).substr(comma + 1));
        if (!header) {
            if (first != "power_pu" || second != "weight") {
                throw ConfigError("duration curve header must be 'power_pu,weight'");
            }
            header = true;
            continue;
        }
        rows.push_back({parse_number(first, line_no), parse_number(second, line_no)});
    }
    if (!header) {
        throw ConfigError("duration curve header 'power_pu,weight' missing");
    }
    return load_duration_curve(rows);
}

DurationCurve read_duration_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open duration curve '" + path + "'");
    }
    return read_duration_curve_csv(in);
}

void write_duration_curve_csv(std::ostream& out, const DurationCurve& curve) {
    out << "# utilization factor " << shortest(utilization_factor(curve)) << '\n';
    out << "power_pu,weight\n";
    for (const DurationBin& b : curve.bins) {
        out << shortest(b.power_pu) << ',' << shortest(b.weight) << '\n';
    }
}

SynthesizedCurve synth_duration_curve(const SynthOptions& options) {
    const TurbinePowerCurve& t = options.turbine;
    if (options.n_bins < 2) {
        throw ConfigError("synthetic curve needs at least two bins");
    }
    if (!(t.cut_in >= 0.0 && t.cut_in < t.rated && t.rated < t.cut_out)) {
        throw ConfigError("turbine speeds must satisfy cut_in < rated < cut_out");
    }
    if (!(options.wind.scale > 0.0 && options.wind.shape > 0.0)) {
        throw ConfigError("Weibull scale and shape must be > 0");
    }
    if (!options.target_uf) {
        return {discretize(options.wind, t, options.n_bins), options.wind.scale};
    }

    const double target = *options.target_uf;
    if (!(options.scale_lo > 0.0 && options.scale_lo < options.scale_hi)) {
        throw ConfigError("Weibull scale bracket must satisfy 0 < lo < hi");
    }
    auto uf_at = [&](double scale) {
        WeibullWind w = options.wind;
        w.scale = scale;
        return utilization_factor(discretize(w, t, options.n_bins));
    };
    double lo = options.scale_lo;
    double hi = options.scale_hi;
    const double uf_lo = uf_at(lo);
    const double uf_hi = uf_at(hi);
    if (target < std::min(uf_lo, uf_hi) || target > std::max(uf_lo, uf_hi)) {
        throw UnreachableTarget("utilization factor target outside the range reachable on the scale bracket");
    }
    const bool increasing = uf_hi >= uf_lo;
    double mid = 0.5 * (lo + hi);
    for (int i = 0; i < 200; ++i) {
        mid = 0.5 * (lo + hi);
        const double uf = uf_at(mid);
        if (std::abs(uf - target) < 1e-12 || hi - lo < 1e-14 * hi) {
            break;
        }
        if ((uf < target) == increasing) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    WeibullWind w = options.wind;
    w.scale = mid;
    DurationCurve curve = discretize(w, t, options.n_bins);
    if (std::abs(utilization_factor(curve) - target) >= 1e-3) {
        throw UnreachableTarget("bisection did not reach the utilization factor target");
    }
    return {std::move(curve), mid};
}

VoltageStrategy VoltageStrategy::fixed(double v2) { return {Kind::Fixed, v2, v2}; }

VoltageStrategy VoltageStrategy::range(double lo, double hi) { return {Kind::Range, lo, hi}; }

VoltageStrategy VoltageStrategy::tap(double nominal, double variation, double cap) {
    return range(nominal * (1.0 - variation), std::min(nominal * (1.0 + variation), cap));
}

void VoltageStrategy::validate(double cap) const {
    if (!(std::isfinite(v2_lo) && std::isfinite(v2_hi) && v2_lo > 0.0 && v2_lo <= v2_hi && v2_hi <= cap)) {
        throw ConfigError("strategy voltages must satisfy 0 < lo <= hi <= " + shortest(cap) + " p.u.");
    }
    if (kind == Kind::Fixed && v2_lo != v2_hi) {
        throw ConfigError("fixed strategy must have a single voltage");
    }
}

std::string VoltageStrategy::label() const {
    char buf[64];
    if (kind == Kind::Fixed) {
        std::snprintf(buf, sizeof buf, "fixed %.3f", v2_lo);
    } else {
        std::snprintf(buf, sizeof buf, "range %.3f-%.3f", v2_lo, v2_hi);
    }
    return buf;
}

AnnualResult annual_efficiency(const CableSpec& spec, double rated_farm_power, const DurationCurve& curve,
                               const VoltageStrategy& strategy, const Constraints& constraints,
                               Execution exec) {
    if (!(std::isfinite(rated_farm_power) && rated_farm_power > 0.0)) {
        throw ConfigError("rated farm power must be > 0");
    }
    strategy.validate(std::max(1.0, constraints.v2_max));
    const Constraints limits = constraints.with_v2_range(strategy.v2_lo, strategy.v2_hi);
    limits.validate();
    // Throws Infeasible when the strategy cannot energise the cable at all.
    const MaxTransfer capacity = max_feasible_power(spec, limits);

    auto per_bin = parallel_map(curve.bins.size(), exec, [&](std::size_t i) {
        BinResult r;
        r.power_pu = curve.bins[i].power_pu;
        r.p_farm = r.power_pu * rated_farm_power;
        if (r.p_farm <= 0.0) {
            return r;
        }
        try {
            const OptimumPoint opt = optimize_at_production(spec, r.p_farm, limits);
            r.p_served = r.p_farm;
            r.p_grid = opt.flow.p_grid;
            r.v2_used = opt.operating_point.v2;
            r.eta = opt.flow.eta;
            return r;
        } catch (const Infeasible&) {
        }
        if (capacity.p_farm <= 0.0) {
            r.curtailed = r.p_farm;
            return r;
        }
        if (capacity.p_farm < r.p_farm) {
            r.p_served = capacity.p_farm;
            r.p_grid = capacity.p_grid;
            r.v2_used = capacity.point.operating_point.v2;
            r.eta = capacity.point.flow.eta;
        } else {
            // Feasible productions are not an interval here; take the largest below p_farm.
            double lo = 0.0;
            double hi = r.p_farm;
            std::optional<OptimumPoint> found;
            for (int it = 0; it < 50; ++it) {
                const double mid = 0.5 * (lo + hi);
                try {
                    found = optimize_at_production(spec, mid, limits);
                    lo = mid;
                } catch (const Infeasible&) {
                    hi = mid;
                }
            }
            if (found) {
                r.p_served = lo;
                r.p_grid = found->flow.p_grid;
                r.v2_used = found->operating_point.v2;
                r.eta = found->flow.eta;
            }
        }
        r.curtailed = r.p_farm - r.p_served;
        return r;
    });

    AnnualResult out;
    out.strategy = strategy;
    for (std::size_t i = 0; i < per_bin.size(); ++i) {
        const double w = curve.bins[i].weight;
        const BinResult& r = per_bin[i];
        out.energy_potential += w * r.p_farm;
        out.energy_delivered += w * r.p_grid;
        out.energy_lost += w * (r.p_served - r.p_grid);
        out.energy_curtailed += w * r.curtailed;
    }
    out.per_bin = std::move(per_bin);
    out.eta_annual = out.energy_potential > 0.0 ? out.energy_delivered / out.energy_potential : 0.0;
    return out;
}

double loss_reduction(const AnnualResult& reference, const AnnualResult& alternative) {
    const double ref = reference.total_loss();
    if (!(ref > 0.0)) {
        return 0.0;
    }
    return (ref - alternative.total_loss()) / ref;
}

StrategyComparison compare_strategies(const CableSpec& spec, double rated_farm_power, const DurationCurve& curve,
                                      std::span<const VoltageStrategy> strategies, const Constraints& constraints,
                                      std::size_t reference, Execution exec) {
    if (strategies.empty()) {
        throw ConfigError("no strategies to compare");
    }
    if (reference >= strategies.size()) {
        throw ConfigError("reference strategy index out of range");
    }
    StrategyComparison out;
    out.reference = reference;
    for (const VoltageStrategy& s : strategies) {
        out.results.push_back(annual_efficiency(spec, rated_farm_power, curve, s, constraints, exec));
    }
    for (const AnnualResult& r : out.results) {
        out.loss_reduction.push_back(loss_reduction(out.results[reference], r));
    }
    return out;
}

}  // namespace cablevolt
