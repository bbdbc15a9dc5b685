#pragma once

// Distributed-parameter model of a three-phase AC export cable.
//
// All circuit quantities are per phase: voltages are phase-to-ground,
// currents are line currents and Z, Y are the per-phase per-km parameters.
// Three-phase power is 3 * Re{V * conj(I)}.

#include <complex>
#include <cstddef>
#include <vector>

namespace cablevolt {

using Complex = std::complex<double>;

/// Per-unit-length parameters in SI units per km.
struct PulParameters {
    double r = 0.0;  ///< series resistance [ohm/km]
    double l = 0.0;  ///< series inductance [H/km]
    double c = 0.0;  ///< shunt capacitance [F/km]
    double g = 0.0;  ///< shunt conductance [S/km]

    /// Throws ConfigError unless r >= 0, l > 0, c > 0, g >= 0.
    void validate() const;
};

struct CableSpec {
    PulParameters pul;
    double length_km = 0.0;
    double nominal_voltage = 0.0;  ///< line-to-line [V], base for p.u. voltages
    double rated_current = 0.0;    ///< line current limit [A]
    double frequency = 50.0;       ///< [Hz]

    void validate() const;

    [[nodiscard]] double omega() const;
    /// Phase-to-ground voltage corresponding to 1.0 p.u.
    [[nodiscard]] double phase_voltage_base() const;
    [[nodiscard]] CableSpec with_length(double km) const;
};

/// Symmetric nodal admittance [[a, b], [b, a]] of a cable section (per phase).
struct TwoPort {
    Complex a;
    Complex b;
};

/// Node voltages, line currents and losses along a segmented cable.
///
/// Node 0 is the wind end and node N the grid end. line_currents[k] is the
/// current flowing from node k towards the grid end: for k < N it is the
/// current entering segment k at its sending node, and the last entry is the
/// current delivered out of the grid end.
struct SegmentProfile {
    std::vector<Complex> node_voltages;
    std::vector<Complex> line_currents;
    std::vector<double> segment_losses;  ///< three-phase active loss per segment [W]

    [[nodiscard]] std::size_t segments() const { return segment_losses.size(); }
    [[nodiscard]] double total_loss() const;
    [[nodiscard]] double max_current() const;
    [[nodiscard]] double max_voltage() const;
};

inline constexpr int kDefaultProfileSegments = 100;

Complex pul_series_impedance(const PulParameters& pul, double omega);
Complex pul_shunt_admittance(const PulParameters& pul, double omega);

/// Principal root of Z/Y. Throws DegenerateCable when Y = 0.
Complex characteristic_impedance(const CableSpec& spec);
/// Principal root of Z*Y (non-negative attenuation).
Complex propagation_constant(const CableSpec& spec);

/// Exact PI equivalent of the whole cable. Throws DegenerateCable for zero length.
TwoPort exact_pi_two_port(const CableSpec& spec);

/// Terminal currents (positive into the cable) for given phase voltages.
std::pair<Complex, Complex> terminal_currents(const TwoPort& tp, Complex v1, Complex v2);

/// Solves the interior nodes of a cable cut into n_segments equal exact-PI
/// sections, with phase voltages v1 (wind end) and v2 (grid end) imposed.
SegmentProfile segment_profile(const CableSpec& spec, Complex v1, Complex v2,
                               int n_segments = kDefaultProfileSegments);

}  // namespace cablevolt
