#include "cablevolt/cable_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "cablevolt/errors.hpp"

namespace cablevolt {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) {
        throw ConfigError(what);
    }
}

bool finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

void PulParameters::validate() const {
    require(std::isfinite(r) && r >= 0.0, "resistance per km must be >= 0");
    require(std::isfinite(l) && l > 0.0, "inductance per km must be > 0");
    require(std::isfinite(c) && c > 0.0, "capacitance per km must be > 0");
    require(std::isfinite(g) && g >= 0.0, "conductance per km must be >= 0");
}

void CableSpec::validate() const {
    pul.validate();
    require(std::isfinite(length_km) && length_km >= 0.0, "cable length must be > 0 km");
    if (length_km == 0.0) {
        throw DegenerateCable("zero-length cable has no two-port");
    }
    require(std::isfinite(nominal_voltage) && nominal_voltage > 0.0, "nominal voltage must be > 0");
    require(std::isfinite(rated_current) && rated_current > 0.0, "rated current must be > 0");
    require(std::isfinite(frequency) && frequency > 0.0, "frequency must be > 0");
}

double CableSpec::omega() const { return 2.0 * std::numbers::pi * frequency; }

double CableSpec::phase_voltage_base() const { return nominal_voltage / std::numbers::sqrt3; }

CableSpec CableSpec::with_length(double km) const {
    CableSpec out = *this;
    out.length_km = km;
    return out;
}

double SegmentProfile::total_loss() const {
    double sum = 0.0;
    for (double p : segment_losses) {
        sum += p;
    }
    return sum;
}

double SegmentProfile::max_current() const {
    double m = 0.0;
    for (const Complex& i : line_currents) {
        m = std::max(m, std::abs(i));
    }
    return m;
}

double SegmentProfile::max_voltage() const {
    double m = 0.0;
    for (const Complex& v : node_voltages) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Complex pul_series_impedance(const PulParameters& pul, double omega) {
    return {pul.r, omega * pul.l};
}

Complex pul_shunt_admittance(const PulParameters& pul, double omega) {
    return {pul.g, omega * pul.c};
}

Complex characteristic_impedance(const CableSpec& spec) {
    const Complex z = pul_series_impedance(spec.pul, spec.omega());
    const Complex y = pul_shunt_admittance(spec.pul, spec.omega());
    if (y == Complex{}) {
        throw DegenerateCable("shunt admittance is zero; characteristic impedance undefined");
    }
    // std::sqrt returns the principal root (Re >= 0).
    return std::sqrt(z / y);
}

Complex propagation_constant(const CableSpec& spec) {
    const Complex z = pul_series_impedance(spec.pul, spec.omega());
    const Complex y = pul_shunt_admittance(spec.pul, spec.omega());
    return std::sqrt(z * y);
}

TwoPort exact_pi_two_port(const CableSpec& spec) {
    if (spec.length_km == 0.0) {
        throw DegenerateCable("zero-length cable has no two-port representation");
    }
    require(std::isfinite(spec.length_km) && spec.length_km > 0.0, "cable length must be > 0 km");

    const Complex zc = characteristic_impedance(spec);
    const Complex x = propagation_constant(spec) * spec.length_km;

    // coth(x) and csch(x) from exp(-x), which stays bounded since Re(x) >= 0.
    const Complex e1 = std::exp(-x);
    const Complex e2 = e1 * e1;
    const Complex denom = 1.0 - e2;
    if (std::abs(denom) < 1e-14) {
        throw DegenerateCable("sinh(gamma*l) vanishes; cable at resonance");
    }
    const Complex coth = (1.0 + e2) / denom;
    const Complex csch = 2.0 * e1 / denom;
    return {coth / zc, -csch / zc};
}

std::pair<Complex, Complex> terminal_currents(const TwoPort& tp, Complex v1, Complex v2) {
    return {tp.a * v1 + tp.b * v2, tp.b * v1 + tp.a * v2};
}

SegmentProfile segment_profile(const CableSpec& spec, Complex v1, Complex v2, int n_segments) {
    if (n_segments < 1) {
        throw ConfigError("profile needs at least one segment");
    }
    if (!finite(v1) || !finite(v2)) {
        throw ConfigError("terminal voltages must be finite");
    }
    const auto n = static_cast<std::size_t>(n_segments);
    const TwoPort seg = exact_pi_two_port(spec.with_length(spec.length_km / n_segments));

    SegmentProfile out;
    out.node_voltages.assign(n + 1, Complex{});
    out.node_voltages.front() = v1;
    out.node_voltages.back() = v2;

    // Interior KCL: b*V[k-1] + 2a*V[k] + b*V[k+1] = 0, k = 1..n-1 (Thomas algorithm).
    if (n > 1) {
        const std::size_t m = n - 1;
        const Complex diag = 2.0 * seg.a;
        const double scale = std::abs(diag) + 2.0 * std::abs(seg.b);
        std::vector<Complex> c_prime(m);
        std::vector<Complex> d_prime(m);
        Complex pivot = diag;
        for (std::size_t k = 0; k < m; ++k) {
            if (k > 0) {
                pivot = diag - seg.b * c_prime[k - 1];
            }
            if (!(std::abs(pivot) > 1e-13 * scale)) {
                throw SingularSystem("nodal matrix of the segmented cable is singular");
            }
            Complex rhs{};
            if (k == 0) {
                rhs -= seg.b * v1;
            }
            if (k == m - 1) {
                rhs -= seg.b * v2;
            }
            if (k > 0) {
                rhs -= seg.b * d_prime[k - 1];
            }
            c_prime[k] = seg.b / pivot;
            d_prime[k] = rhs / pivot;
        }
        out.node_voltages[m] = d_prime[m - 1];
        for (std::size_t k = m - 1; k-- > 0;) {
            out.node_voltages[k + 1] = d_prime[k] - c_prime[k] * out.node_voltages[k + 2];
        }
    }

    out.line_currents.resize(n + 1);
    out.segment_losses.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Complex vs = out.node_voltages[k];
        const Complex vr = out.node_voltages[k + 1];
        const Complex is = seg.a * vs + seg.b * vr;
        const Complex ir = seg.b * vs + seg.a * vr;
        out.line_currents[k] = is;
        out.segment_losses[k] = 3.0 * (vs * std::conj(is) + vr * std::conj(ir)).real();
        if (k == n - 1) {
            out.line_currents[n] = -ir;
        }
    }
    return out;
}

}  // namespace cablevolt
