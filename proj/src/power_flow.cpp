#include "cablevolt/power_flow.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cablevolt/errors.hpp"

namespace cablevolt {

VoltageScaling VoltageScaling::from_degrees(double alpha, double beta_deg) {
    return {alpha, beta_deg * std::numbers::pi / 180.0};
}

void VoltageScaling::validate() const {
    if (!(std::isfinite(alpha) && alpha > 0.0)) {
        throw ConfigError("voltage scaling magnitude must be > 0");
    }
    if (!(std::isfinite(beta) && beta > -std::numbers::pi && beta <= std::numbers::pi)) {
        throw ConfigError("voltage scaling angle must lie in (-180, 180] degrees");
    }
}

Complex VoltageScaling::xi() const { return std::polar(alpha, beta); }

double VoltageScaling::beta_degrees() const { return beta * 180.0 / std::numbers::pi; }

void OperatingPoint::validate() const {
    if (!(std::isfinite(v2) && v2 > 0.0)) {
        throw ConfigError("operating voltage must be > 0 p.u.");
    }
    scaling.validate();
}

double FlowSolution::max_terminal_current() const {
    return std::max(std::abs(i1), std::abs(i2));
}

FlowSolution solve_flow(const CableSpec& spec, const OperatingPoint& op) {
    return solve_flow(spec, exact_pi_two_port(spec), op);
}

FlowSolution solve_flow(const CableSpec& spec, const TwoPort& tp, const OperatingPoint& op) {
    op.validate();
    const Complex v2{op.v2 * spec.phase_voltage_base(), 0.0};
    const Complex v1 = op.scaling.xi() * v2;
    const auto [i1, i2] = terminal_currents(tp, v1, v2);

    const Complex s1 = 3.0 * v1 * std::conj(i1);
    const Complex s2 = 3.0 * v2 * std::conj(i2);

    FlowSolution out;
    out.i1 = i1;
    out.i2 = i2;
    out.p_farm = s1.real();
    out.q_farm = s1.imag();
    out.p_grid = -s2.real();
    out.q_grid = -s2.imag();
    out.p_loss = (s1 + s2).real();
    if (out.p_farm > 0.0) {
        out.eta = out.p_grid / out.p_farm;
    }
    return out;
}

double efficiency_of_scaling(const CableSpec& spec, const VoltageScaling& scaling) {
    scaling.validate();
    const TwoPort tp = exact_pi_two_port(spec);
    const Complex xi = scaling.xi();
    const double farm = (xi * std::conj(tp.a * xi + tp.b)).real();
    if (!(farm > 0.0)) {
        throw ZeroFarmPower("wind side injects no active power at this scaling");
    }
    return -(tp.b * xi + tp.a).real() / farm;
}

double farm_power_coefficient(const CableSpec& spec, const VoltageScaling& scaling) {
    const TwoPort tp = exact_pi_two_port(spec);
    const Complex xi = scaling.xi();
    return spec.nominal_voltage * spec.nominal_voltage * (xi * std::conj(tp.a * xi + tp.b)).real();
}

std::optional<double> ScalingCoefficients::eta() const {
    if (farm > 0.0) {
        return grid / farm;
    }
    return std::nullopt;
}

ScalingEvaluator::ScalingEvaluator(const CableSpec& spec)
    : spec_(spec),
      tp_(exact_pi_two_port(spec)),
      power_base_(spec.nominal_voltage * spec.nominal_voltage),
      phase_base_(spec.phase_voltage_base()) {}

ScalingCoefficients ScalingEvaluator::at(const VoltageScaling& scaling) const {
    return at(scaling.alpha, scaling.beta);
}

ScalingCoefficients ScalingEvaluator::at(double alpha, double beta) const {
    const Complex xi = std::polar(alpha, beta);
    const Complex i1 = tp_.a * xi + tp_.b;
    const Complex i2 = tp_.b * xi + tp_.a;
    ScalingCoefficients out;
    out.farm = power_base_ * (xi * std::conj(i1)).real();
    out.grid = -power_base_ * i2.real();
    out.current = phase_base_ * std::max(std::abs(i1), std::abs(i2));
    return out;
}

double ScalingEvaluator::farm_coefficient(double alpha, double beta) const {
    return power_base_ *
           (alpha * alpha * tp_.a.real() + alpha * std::abs(tp_.b) * std::cos(beta - std::arg(tp_.b)));
}

}  // namespace cablevolt
