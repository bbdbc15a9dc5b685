#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cablevolt/parallel.hpp"
#include "cablevolt/power_flow.hpp"

namespace cablevolt {

/// Equipment limits on an operating point.
struct Constraints {
    double v2_min = 0.4;  ///< p.u.
    double v2_max = 1.0;  ///< p.u.
    double alpha_min = 1.0;
    double alpha_max = 1.1;
    double i_rated = 0.0;  ///< [A]
    bool check_internal_current = false;
    std::optional<double> internal_voltage_max;  ///< p.u., off when empty
    int n_profile_segments = kDefaultProfileSegments;

    /// Default limits with the cable's rated current.
    static Constraints for_cable(const CableSpec& spec);

    void validate() const;
    [[nodiscard]] Constraints with_v2_range(double lo, double hi) const;
    [[nodiscard]] bool needs_profile() const {
        return check_internal_current || internal_voltage_max.has_value();
    }
};

enum class Binding : unsigned {
    V2Max = 1U << 0U,
    V2Min = 1U << 1U,
    CurrentLimit = 1U << 2U,
    AlphaMax = 1U << 3U,
    AlphaMin = 1U << 4U,
    InternalVoltage = 1U << 5U,
};

class BindingSet {
public:
    void insert(Binding b) { bits_ |= static_cast<unsigned>(b); }
    [[nodiscard]] bool contains(Binding b) const { return (bits_ & static_cast<unsigned>(b)) != 0U; }
    [[nodiscard]] bool empty() const { return bits_ == 0U; }
    [[nodiscard]] unsigned bits() const { return bits_; }
    /// e.g. "V2Max|CurrentLimit", or "none".
    [[nodiscard]] std::string to_string() const;

private:
    unsigned bits_ = 0U;
};

struct OptimumPoint {
    OperatingPoint operating_point;
    FlowSolution flow;
    BindingSet binding;

    [[nodiscard]] double eta() const { return flow.eta.value_or(0.0); }
};

struct ScalingOptimum {
    VoltageScaling scaling;
    double eta = 0.0;
};

/// Resolution of the coarse grids shared by the searches.
inline constexpr double kAlphaGridStep = 0.005;
inline constexpr double kBetaGridStepDeg = 0.25;

/// Best efficiency over alpha in [alpha_lo, alpha_hi] and beta in (0, 90 deg).
/// Coarse grid then compass refinement. Throws NoPositivePower if no scaling
/// in the window injects active power.
ScalingOptimum optimize_scaling_unconstrained(const CableSpec& spec, double alpha_lo, double alpha_hi,
                                              Execution exec = Execution::Parallel);

struct VoltageCurvePoint {
    double p_farm = 0.0;
    double v2_opt = 0.0;
    double max_current = 0.0;  ///< [A] at v2_opt
    bool exceeds_v2_max = false;
    bool exceeds_current = false;
};

/// v2 = sqrt(p / c(xi)) for each production target at fixed scaling.
std::vector<VoltageCurvePoint> optimal_voltage_curve(const CableSpec& spec, const VoltageScaling& scaling,
                                                     std::span<const double> p_farm_targets,
                                                     const Constraints& constraints);

/// Most efficient feasible (v2, alpha, beta) transmitting exactly p_farm.
/// Throws Infeasible when no point within the limits carries p_farm.
OptimumPoint optimize_at_production(const CableSpec& spec, double p_farm, const Constraints& constraints);

struct MaxTransfer {
    double p_farm = 0.0;  ///< injected power at the maximiser
    double p_grid = 0.0;  ///< delivered power, maximised
    OptimumPoint point;
};

/// Maximum deliverable power within the limits. Throws Infeasible when
/// even zero transfer violates them (charging current above rating).
MaxTransfer max_feasible_power(const CableSpec& spec, const Constraints& constraints);

struct EnvelopePoint {
    double length_km = 0.0;
    double v2 = 0.0;
    double p_grid_max = 0.0;
    double p_farm_at_max = 0.0;
    VoltageScaling scaling;
    bool feasible = false;
};

struct TransferEnvelope {
    /// One entry per (length, v2), length-major in input order.
    std::vector<EnvelopePoint> fixed;
    /// One entry per length, v2 free over [min(v2_values), max(v2_values)].
    std::vector<EnvelopePoint> envelope;
};

TransferEnvelope transfer_envelope(const CableSpec& spec_template, std::span<const double> lengths_km,
                                   std::span<const double> v2_values, const Constraints& constraints,
                                   Execution exec = Execution::Parallel);

}  // namespace cablevolt
