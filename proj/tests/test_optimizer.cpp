#include <doctest.h>

#include "cablevolt/errors.hpp"
#include "cablevolt/optimizer.hpp"
#include "oracle.hpp"

using namespace cablevolt;
using oracle::rel;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

/// Exhaustive efficiency maximum over alpha in [1, 1.1], beta in [0, 15] deg.
struct BruteScaling {
    double eta = -1.0;
    double alpha = 0.0;
    double beta_deg = 0.0;
};

BruteScaling brute_scaling(const CableSpec& s, double da, double db_deg) {
    BruteScaling best;
    for (double a = 1.0; a <= 1.1 + 1e-12; a += da) {
        for (double b = db_deg; b <= 15.0; b += db_deg) {
            const oracle::Flow f = oracle::flow_pu(s, 1.0, a, b * kDeg);
            if (f.p_farm > 0.0 && f.p_grid / f.p_farm > best.eta) {
                best = {f.p_grid / f.p_farm, a, b};
            }
        }
    }
    return best;
}

void check_feasible(const OptimumPoint& pt, const Constraints& c, double p_farm) {
    const auto& op = pt.operating_point;
    CHECK(op.v2 >= c.v2_min * (1.0 - 1e-12));
    CHECK(op.v2 <= c.v2_max * (1.0 + 1e-12));
    CHECK(op.scaling.alpha >= c.alpha_min - 1e-12);
    CHECK(op.scaling.alpha <= c.alpha_max + 1e-12);
    CHECK(pt.flow.max_terminal_current() <= c.i_rated * (1.0 + 1e-9));
    CHECK(rel(pt.flow.p_farm, p_farm) < 1e-9);
}

}  // namespace

TEST_SUITE("optimizer") {

TEST_CASE("unconstrained optimum on the 200 km cable") {
    const CableSpec s = oracle::table_cable();
    const ScalingOptimum opt = optimize_scaling_unconstrained(s, 1.0, 1.1);
    const BruteScaling brute = brute_scaling(s, 0.0005, 0.01);
    // Refinement must match or beat the fine grid and stay near its argmax.
    CHECK(opt.eta >= brute.eta - 1e-12);
    CHECK(opt.eta - brute.eta < 1e-6);
    CHECK(opt.scaling.alpha == doctest::Approx(brute.alpha).epsilon(0.002));
    CHECK(opt.scaling.beta_degrees() == doctest::Approx(brute.beta_deg).epsilon(0.01));
    // Frozen from an independent 0.001 x 0.02 deg grid in Python.
    CHECK(opt.eta >= 0.9402696645122643 - 1e-12);
    // paper: alpha 1.025, beta 4.25 deg, eta 0.94
    CHECK(opt.scaling.alpha == doctest::Approx(1.025).epsilon(0.01));
    CHECK(std::abs(opt.scaling.beta_degrees() - 4.25) <= 0.5);
}

TEST_CASE("unconstrained optimum at other lengths") {
    struct Case {
        double km;
        double alpha;
        double beta_deg;
        double eta;
    };
    // Python grid optima (alpha step 0.001, beta step 0.02 deg).
    for (const Case& c : {Case{100.0, 1.008, 1.1, 0.98452}, Case{300.0, 1.07, 10.52, 0.87327}}) {
        CAPTURE(c.km);
        const ScalingOptimum opt = optimize_scaling_unconstrained(oracle::table_cable(c.km), 1.0, 1.1);
        CHECK(opt.eta == doctest::Approx(c.eta).epsilon(1e-5));
        CHECK(std::abs(opt.scaling.alpha - c.alpha) < 0.002);
        CHECK(std::abs(opt.scaling.beta_degrees() - c.beta_deg) < 0.1);
    }
    CHECK_THROWS_AS(optimize_scaling_unconstrained(oracle::table_cable(), 1.1, 1.0), ConfigError);
}

TEST_CASE("constrained optimum agrees with an exhaustive grid") {
    for (const double km : {100.0, 200.0, 300.0}) {
        const CableSpec s = oracle::table_cable(km);
        const Constraints c = Constraints::for_cable(s);
        for (const double p_mw : {60.0, 180.0}) {
            CAPTURE(km);
            CAPTURE(p_mw);
            const OptimumPoint pt = optimize_at_production(s, p_mw * 1e6, c);
            check_feasible(pt, c, p_mw * 1e6);
            const oracle::GridBest grid = oracle::production_grid(s, p_mw * 1e6, 0.4, 1.0, 0.005, 0.002);
            REQUIRE(grid.found);
            CHECK(pt.eta() >= grid.eta - 1e-9);
            CHECK(pt.eta() - grid.eta < 1e-5);
        }
    }
}

TEST_CASE("fixed voltage is honoured and flagged") {
    const CableSpec s = oracle::table_cable();
    const Constraints c = Constraints::for_cable(s).with_v2_range(0.8, 0.8);
    const OptimumPoint pt = optimize_at_production(s, 120e6, c);
    CHECK(pt.operating_point.v2 == 0.8);
    CHECK(pt.binding.contains(Binding::V2Max));
    CHECK(pt.binding.contains(Binding::V2Min));
    check_feasible(pt, c, 120e6);
    const oracle::GridBest grid = oracle::production_grid(s, 120e6, 0.8, 0.8, 1.0, 0.0005);
    CHECK(pt.eta() >= grid.eta - 1e-9);
    CHECK(pt.eta() - grid.eta < 1e-6);
}

TEST_CASE("narrow feasible sets near the current limit are found") {
    const CableSpec s = oracle::table_cable();
    const Constraints c = Constraints::for_cable(s).with_v2_range(1.0, 1.0);
    for (const double p_mw : {317.0, 318.0, 319.0, 319.37}) {
        CAPTURE(p_mw);
        const OptimumPoint pt = optimize_at_production(s, p_mw * 1e6, c);
        check_feasible(pt, c, p_mw * 1e6);
        CHECK(pt.binding.contains(Binding::CurrentLimit));
    }
    CHECK_THROWS_AS(optimize_at_production(s, 320e6, c), Infeasible);
}

TEST_CASE("unattainable production is infeasible") {
    const CableSpec s = oracle::table_cable();
    CHECK_THROWS_AS(optimize_at_production(s, 900e6, Constraints::for_cable(s)), Infeasible);
    CHECK_THROWS_AS(optimize_at_production(s, -1.0, Constraints::for_cable(s)), ConfigError);
}

TEST_CASE("mid-range production binds nothing") {
    const CableSpec s = oracle::table_cable();
    const OptimumPoint pt = optimize_at_production(s, 150e6, Constraints::for_cable(s));
    CHECK(pt.binding.empty());
    CHECK(pt.binding.to_string() == "none");
    // The optimum scaling does not depend on production while no limit binds.
    const ScalingOptimum free = optimize_scaling_unconstrained(s, 1.0, 1.1);
    CHECK(pt.eta() == doctest::Approx(free.eta).epsilon(1e-9));
}

TEST_CASE("maximum transfer at 1.0 p.u. on 200 km") {
    const CableSpec s = oracle::table_cable();
    const MaxTransfer m = max_feasible_power(s, Constraints::for_cable(s).with_v2_range(1.0, 1.0));
    // Independent SLSQP solve: 297.4870970230631 MW at alpha 1.05942, beta 7.62956 deg.
    CHECK(rel(m.p_grid, 297.4870970230631e6) < 1e-8);
    CHECK(rel(m.p_farm, 319.372359234665e6) < 1e-7);
    CHECK(m.point.binding.contains(Binding::CurrentLimit));
    CHECK(m.point.binding.contains(Binding::V2Max));
}

TEST_CASE("internal limits only shrink the feasible set") {
    const CableSpec s = oracle::table_cable(250.0);
    Constraints loose = Constraints::for_cable(s);
    Constraints tight = loose;
    tight.check_internal_current = true;
    tight.internal_voltage_max = 1.05;
    tight.n_profile_segments = 20;
    const MaxTransfer a = max_feasible_power(s, loose);
    const MaxTransfer b = max_feasible_power(s, tight);
    CHECK(b.p_grid <= a.p_grid + 1e-6);
    const OptimumPoint pt = optimize_at_production(s, 100e6, tight);
    const double base = s.phase_voltage_base() * pt.operating_point.v2;
    const SegmentProfile prof =
        segment_profile(s, pt.operating_point.scaling.xi() * base, {base, 0.0}, tight.n_profile_segments);
    CHECK(prof.max_current() <= s.rated_current * (1.0 + 1e-9));
    CHECK(prof.max_voltage() / s.phase_voltage_base() <= 1.05 * (1.0 + 1e-9));
}

TEST_CASE("charging current above rating makes the cable unusable") {
    const CableSpec s = oracle::table_cable(400.0);
    CHECK_THROWS_AS(max_feasible_power(s, Constraints::for_cable(s).with_v2_range(1.0, 1.0)), Infeasible);
}

TEST_CASE("optimal voltage curve") {
    const CableSpec s = oracle::table_cable();
    const Constraints c = Constraints::for_cable(s);
    const auto sc = VoltageScaling::from_degrees(1.025, 4.25);
    const std::vector<double> targets{0.0, 50e6, 150e6, 300e6};
    const auto curve = optimal_voltage_curve(s, sc, targets, c);
    REQUIRE(curve.size() == 4);
    CHECK(curve[0].v2_opt == 0.0);
    const double k = farm_power_coefficient(s, sc);
    for (const auto& pt : curve) {
        CHECK(pt.v2_opt * pt.v2_opt * k == doctest::Approx(pt.p_farm).epsilon(1e-12));
        CHECK(pt.exceeds_v2_max == (pt.v2_opt > 1.0));
        CHECK(pt.exceeds_current == (pt.max_current > 1055.0));
    }
    CHECK(curve[3].exceeds_v2_max);
    CHECK_FALSE(curve[2].exceeds_current);
    const std::vector<double> bad{-1.0};
    CHECK_THROWS_AS(optimal_voltage_curve(s, sc, bad, c), ConfigError);
}

TEST_CASE("transfer envelope") {
    const CableSpec s = oracle::table_cable();
    const std::vector<double> lengths{100.0, 250.0, 300.0, 400.0};
    const std::vector<double> volts{1.0, 0.6};
    const TransferEnvelope env = transfer_envelope(s, lengths, volts, Constraints::for_cable(s));
    REQUIRE(env.fixed.size() == 8);
    REQUIRE(env.envelope.size() == 4);
    for (std::size_t li = 0; li < lengths.size(); ++li) {
        for (std::size_t vi = 0; vi < volts.size(); ++vi) {
            const EnvelopePoint& p = env.fixed[li * volts.size() + vi];
            CHECK(p.length_km == lengths[li]);
            // Free voltage dominates each fixed voltage.
            CHECK(env.envelope[li].p_grid_max >= p.p_grid_max - 1e-3);
            if (!p.feasible) {
                CHECK(p.p_grid_max == 0.0);
            }
        }
    }
    // Capability falls with length at a fixed voltage.
    CHECK(env.fixed[0].p_grid_max > env.fixed[2].p_grid_max);
    CHECK_FALSE(env.fixed[6].feasible);  // 400 km, 1.0 p.u.
    CHECK(env.fixed[7].feasible);        // 400 km, 0.6 p.u.
    CHECK(env.fixed[7].p_grid_max > 10e6);
}

}
