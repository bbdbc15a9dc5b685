#pragma once

#include <optional>

#include "cablevolt/cable_model.hpp"

namespace cablevolt {

/// Wind-side voltage relative to the grid-side voltage: xi = alpha * exp(j*beta).
struct VoltageScaling {
    double alpha = 1.0;
    double beta = 0.0;  ///< radians, wind side leading

    static VoltageScaling from_degrees(double alpha, double beta_deg);

    /// Throws ConfigError unless alpha > 0 and beta in (-pi, pi].
    void validate() const;
    [[nodiscard]] Complex xi() const;
    [[nodiscard]] double beta_degrees() const;
};

struct OperatingPoint {
    double v2 = 1.0;  ///< grid-side cable voltage [p.u. of nominal]
    VoltageScaling scaling;

    void validate() const;
};

/// Terminal quantities of one operating point. Currents are positive into
/// the cable at both ends; powers are three-phase.
struct FlowSolution {
    Complex i1;
    Complex i2;
    double p_farm = 0.0;
    double q_farm = 0.0;
    double p_grid = 0.0;
    double q_grid = 0.0;
    double p_loss = 0.0;
    std::optional<double> eta;  ///< absent unless p_farm > 0

    [[nodiscard]] double max_terminal_current() const;
};

FlowSolution solve_flow(const CableSpec& spec, const OperatingPoint& op);
FlowSolution solve_flow(const CableSpec& spec, const TwoPort& tp, const OperatingPoint& op);

/// Closed-form efficiency -Re{B*xi + A} / Re{xi * conj(A*xi + B)}; independent of v2.
/// Throws ZeroFarmPower when the denominator is not positive.
double efficiency_of_scaling(const CableSpec& spec, const VoltageScaling& scaling);

/// c such that p_farm = c * v2^2 [W per p.u.^2].
double farm_power_coefficient(const CableSpec& spec, const VoltageScaling& scaling);

/// Everything the optimizer needs about one scaling, normalised to v2 = 1 p.u.
struct ScalingCoefficients {
    double farm = 0.0;     ///< p_farm / v2^2 [W]
    double grid = 0.0;     ///< p_grid / v2^2 [W]
    double current = 0.0;  ///< max(|i1|, |i2|) / v2 [A]

    [[nodiscard]] std::optional<double> eta() const;
};

/// Evaluates the closed-form flow of a fixed cable for many scalings.
class ScalingEvaluator {
public:
    explicit ScalingEvaluator(const CableSpec& spec);

    [[nodiscard]] ScalingCoefficients at(const VoltageScaling& scaling) const;
    [[nodiscard]] ScalingCoefficients at(double alpha, double beta) const;

    /// Farm coefficient as a function of beta for fixed alpha:
    /// k * (alpha^2 Re A + alpha |B| cos(beta - arg B)).
    [[nodiscard]] double farm_coefficient(double alpha, double beta) const;

    [[nodiscard]] const TwoPort& two_port() const { return tp_; }
    [[nodiscard]] const CableSpec& spec() const { return spec_; }
    /// nominal_voltage^2, i.e. 3 * (phase base)^2.
    [[nodiscard]] double power_base() const { return power_base_; }

private:
    CableSpec spec_;
    TwoPort tp_;
    double power_base_;
    double phase_base_;
};

}  // namespace cablevolt
