#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cablevolt/optimizer.hpp"

namespace cablevolt {

struct DurationBin {
    double power_pu = 0.0;  ///< production in p.u. of rated farm power
    double weight = 0.0;    ///< relative duration
};

/// Annual production distribution; weights sum to one.
struct DurationCurve {
    std::vector<DurationBin> bins;
    double normalization = 1.0;  ///< factor applied to the raw weights on load
};

/// Validates and normalises raw rows. Powers in (1, 1 + 1e-9] are clipped to 1.
DurationCurve load_duration_curve(std::span<const DurationBin> rows);

/// Mean production over rated production.
double utilization_factor(const DurationCurve& curve);

/// Reads `power_pu,weight` CSV ('#' comment lines allowed) and normalises it.
DurationCurve read_duration_curve_csv(std::istream& in);
DurationCurve read_duration_curve_file(const std::string& path);
/// Writes the curve so that reading it back reproduces every weight exactly.
void write_duration_curve_csv(std::ostream& out, const DurationCurve& curve);

struct WeibullWind {
    double scale = 10.0;  ///< [m/s]
    double shape = 2.0;
};

/// Generic turbine: cubic between cut-in and rated, flat to cut-out.
struct TurbinePowerCurve {
    double cut_in = 3.0;
    double rated = 12.0;
    double cut_out = 25.0;
};

struct SynthOptions {
    WeibullWind wind;
    TurbinePowerCurve turbine;
    int n_bins = 100;
    /// When set, the Weibull scale is bisected on [scale_lo, scale_hi] until
    /// the utilisation factor is within 1e-3 of the target.
    std::optional<double> target_uf;
    double scale_lo = 1.0;
    double scale_hi = 15.0;
};

struct SynthesizedCurve {
    DurationCurve curve;
    double scale = 0.0;  ///< Weibull scale actually used
};

/// Deterministic duration curve on power levels i / (n_bins - 1).
SynthesizedCurve synth_duration_curve(const SynthOptions& options);

struct VoltageStrategy {
    enum class Kind { Fixed, Range };

    Kind kind = Kind::Fixed;
    double v2_lo = 1.0;
    double v2_hi = 1.0;

    static VoltageStrategy fixed(double v2);
    static VoltageStrategy range(double lo, double hi);
    /// Tap changer of +/- variation around nominal, clipped to cap.
    static VoltageStrategy tap(double nominal, double variation, double cap = 1.0);

    /// Throws ConfigError unless 0 < v2_lo <= v2_hi <= cap.
    void validate(double cap = 1.0) const;
    [[nodiscard]] std::string label() const;
};

struct BinResult {
    double power_pu = 0.0;
    double p_farm = 0.0;     ///< potential production [W]
    double p_served = 0.0;   ///< injected into the cable [W]
    double p_grid = 0.0;     ///< delivered [W]
    double curtailed = 0.0;  ///< [W]
    double v2_used = 0.0;    ///< 0 for idle bins
    std::optional<double> eta;
};

/// Energies are duration-weighted average powers [W] (one "per-unit year").
struct AnnualResult {
    VoltageStrategy strategy;
    double eta_annual = 0.0;
    double energy_potential = 0.0;
    double energy_delivered = 0.0;
    double energy_lost = 0.0;
    double energy_curtailed = 0.0;
    std::vector<BinResult> per_bin;

    /// Potential minus delivered; includes curtailment.
    [[nodiscard]] double total_loss() const { return energy_potential - energy_delivered; }
};

AnnualResult annual_efficiency(const CableSpec& spec, double rated_farm_power, const DurationCurve& curve,
                               const VoltageStrategy& strategy, const Constraints& constraints,
                               Execution exec = Execution::Parallel);

/// (loss_ref - loss_alt) / loss_ref with loss = potential - delivered.
double loss_reduction(const AnnualResult& reference, const AnnualResult& alternative);

struct StrategyComparison {
    std::vector<AnnualResult> results;
    std::vector<double> loss_reduction;  ///< fraction, versus results[reference]
    std::size_t reference = 0;
};

StrategyComparison compare_strategies(const CableSpec& spec, double rated_farm_power, const DurationCurve& curve,
                                      std::span<const VoltageStrategy> strategies, const Constraints& constraints,
                                      std::size_t reference = 0, Execution exec = Execution::Parallel);

}  // namespace cablevolt
