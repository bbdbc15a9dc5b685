#include <doctest.h>

#include "cablevolt/errors.hpp"
#include "cablevolt/power_flow.hpp"
#include "oracle.hpp"

using namespace cablevolt;
using oracle::rel;

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

/// Random cable around Table I, every parameter scaled independently.
CableSpec random_cable(std::mt19937_64& g) {
    CableSpec s = oracle::table_cable(oracle::uniform(g, 20.0, 350.0));
    s.pul.r *= oracle::uniform(g, 0.5, 2.0);
    s.pul.l *= oracle::uniform(g, 0.5, 2.0);
    s.pul.c *= oracle::uniform(g, 0.5, 2.0);
    s.pul.g = oracle::uniform(g, 0.0, 1e-8);
    s.nominal_voltage = oracle::uniform(g, 66e3, 400e3);
    return s;
}

}  // namespace

TEST_SUITE("power_flow") {

TEST_CASE("efficiency at the quoted optimum scaling") {
    const CableSpec s = oracle::table_cable();
    const auto sc = VoltageScaling::from_degrees(1.025, 4.25);
    // mpmath oracle values
    CHECK(rel(efficiency_of_scaling(s, sc), 0.94002481104338039) < 1e-12);
    CHECK(rel(farm_power_coefficient(s, sc), 165854111.12060822) < 1e-12);
    const auto sc2 = VoltageScaling::from_degrees(1.0, 3.0);
    CHECK(rel(efficiency_of_scaling(s, sc2), 0.92882792018965677) < 1e-12);
    CHECK(rel(farm_power_coefficient(s, sc2), 101627129.46558347) < 1e-12);
    // paper: "eta_opt = 0.94"
    CHECK(efficiency_of_scaling(s, sc) == doctest::Approx(0.94).epsilon(0.005));
}

TEST_CASE("flow matches the ABCD oracle") {
    auto g = oracle::rng(11);
    for (int i = 0; i < 100; ++i) {
        const CableSpec s = random_cable(g);
        const OperatingPoint op{oracle::uniform(g, 0.3, 1.1),
                                {oracle::uniform(g, 0.9, 1.15), oracle::uniform(g, -20.0, 30.0) * kDeg}};
        const FlowSolution f = solve_flow(s, op);
        const oracle::Flow o = oracle::flow_pu(s, op.v2, op.scaling.alpha, op.scaling.beta);
        const double scale = std::abs(o.p_farm) + std::abs(o.p_grid);
        CHECK(std::abs(f.p_farm - o.p_farm) / scale < 1e-10);
        CHECK(std::abs(f.p_grid - o.p_grid) / scale < 1e-10);
    }
}

TEST_CASE("efficiency is independent of the operating voltage") {
    auto g = oracle::rng(3);
    int cases = 0;
    while (cases < 20) {
        const CableSpec s = random_cable(g);
        const VoltageScaling sc{oracle::uniform(g, 0.95, 1.15), oracle::uniform(g, 0.0, 20.0) * kDeg};
        const FlowSolution ref = solve_flow(s, {1.0, sc});
        if (!ref.eta) {
            continue;
        }
        ++cases;
        for (const double v2 : {0.3, 0.6}) {
            const FlowSolution f = solve_flow(s, {v2, sc});
            REQUIRE(f.eta);
            CHECK(rel(*f.eta, *ref.eta) <= 1e-12);
        }
        CHECK(rel(efficiency_of_scaling(s, sc), *ref.eta) <= 1e-12);
    }
}

TEST_CASE("power balance and passivity over random operating points") {
    auto g = oracle::rng(5);
    for (int i = 0; i < 1000; ++i) {
        const CableSpec s = random_cable(g);
        const OperatingPoint op{oracle::uniform(g, 0.3, 1.1),
                                {oracle::uniform(g, 0.8, 1.2), oracle::uniform(g, -60.0, 60.0) * kDeg}};
        const FlowSolution f = solve_flow(s, op);
        const double scale = std::abs(f.p_farm) + std::abs(f.p_grid) + std::abs(f.q_farm) + std::abs(f.q_grid);
        CHECK(std::abs(f.p_farm - f.p_grid - f.p_loss) <= 1e-10 * scale);
        CHECK(f.p_loss >= -1e-12 * scale);
    }
}

TEST_CASE("farm and grid powers scale with v2 squared") {
    const CableSpec s = oracle::table_cable();
    const VoltageScaling sc = VoltageScaling::from_degrees(1.03, 5.0);
    const FlowSolution a = solve_flow(s, {1.0, sc});
    const FlowSolution b = solve_flow(s, {0.5, sc});
    CHECK(rel(b.p_farm, 0.25 * a.p_farm) < 1e-12);
    CHECK(rel(b.p_grid, 0.25 * a.p_grid) < 1e-12);
    CHECK(rel(b.max_terminal_current(), 0.5 * a.max_terminal_current()) < 1e-12);
}

TEST_CASE("scaling evaluator agrees with the flow solution at 1 p.u.") {
    const CableSpec s = oracle::table_cable(150.0);
    const ScalingEvaluator ev(s);
    for (const double beta_deg : {-5.0, 0.0, 2.0, 7.5, 30.0}) {
        const VoltageScaling sc = VoltageScaling::from_degrees(1.04, beta_deg);
        const ScalingCoefficients c = ev.at(sc);
        const FlowSolution f = solve_flow(s, {1.0, sc});
        CHECK(rel(c.farm, f.p_farm) < 1e-12);
        CHECK(rel(c.grid, f.p_grid) < 1e-12);
        CHECK(rel(c.current, f.max_terminal_current()) < 1e-12);
        CHECK(rel(ev.farm_coefficient(sc.alpha, sc.beta), c.farm) < 1e-10);
    }
}

TEST_CASE("equal terminal voltages carry no power through the cable") {
    const FlowSolution f = solve_flow(oracle::table_cable(), {1.0, VoltageScaling{1.0, 0.0}});
    // Each end supplies half of the charging loss.
    CHECK(f.p_grid < 0.0);
    CHECK(f.p_farm == doctest::Approx(-f.p_grid).epsilon(1e-9));
    REQUIRE(f.eta);
    CHECK(*f.eta == doctest::Approx(-1.0).epsilon(1e-9));
}

TEST_CASE("efficiency is undefined when the farm absorbs power") {
    const CableSpec s = oracle::table_cable();
    const VoltageScaling lagging = VoltageScaling::from_degrees(1.0, -10.0);
    CHECK_THROWS_AS(efficiency_of_scaling(s, lagging), ZeroFarmPower);
    CHECK_FALSE(solve_flow(s, {1.0, lagging}).eta.has_value());
}

TEST_CASE("invalid operating points") {
    const CableSpec s = oracle::table_cable();
    CHECK_THROWS_AS(solve_flow(s, {0.0, {}}), ConfigError);
    CHECK_THROWS_AS(solve_flow(s, {1.0, VoltageScaling{-1.0, 0.0}}), ConfigError);
    CHECK_THROWS_AS(solve_flow(s, {1.0, VoltageScaling{1.0, 4.0}}), ConfigError);
}

}
