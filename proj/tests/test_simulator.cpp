#include <cmath>
#include <set>
#include <vector>

#include "doctest.h"
#include "hexcirc/circuitry.hpp"
#include "hexcirc/enumeration.hpp"
#include "hexcirc/simulator.hpp"

using namespace hexcirc;

namespace {

CircuitryDesign directed_from_ones(int tubes_per_row, const std::vector<VectorIndex>& ones) {
    CircuitryVector x{HexLayout(tubes_per_row)};
    for (VectorIndex k : ones) x.set_bit(k, true);
    return first_orientation(decode(x));
}

CircuitryDesign reference_two_circuit() {
    // Two circuits at t=8: 1->2->7->8 and 4->3->6->5.
    return directed_from_ones(4, {1, 12, 14, 16, 23, 28});
}

}  // namespace

TEST_CASE("nominal eight-tube run lands in the physical range") {
    HexInstance instance;
    SimulatorConfig config;
    const CircuitryDesign base = first_orientation(decode(base_vector(HexLayout(4))));

    const SimulationResult result = simulate(base, instance, config);
    CHECK(result.Q_W >= 1500.0);
    CHECK(result.Q_W <= 6000.0);
    CHECK(result.delta_P_kPa > 0.0);
    CHECK(result.outer_iterations >= 2);
    CHECK(result.energy_balance_rel <= 1e-3);

    REQUIRE(result.per_circuit.size() == 4);
    double q_sum = 0.0;
    double dp_max = 0.0;
    for (const CircuitResult& circuit : result.per_circuit) {
        CHECK(circuit.mass_flow_kgps == doctest::Approx(0.005).epsilon(1e-12));
        CHECK(circuit.Q_W > 0.0);
        q_sum += circuit.Q_W;
        dp_max = std::max(dp_max, circuit.delta_p_kPa);
        // The coil has ample area at the nominal flow: vapor leaves superheated.
        CHECK(circuit.outlet.quality == doctest::Approx(1.0));
        CHECK(circuit.outlet.superheat_K > 0.0);
    }
    CHECK(q_sum == doctest::Approx(result.Q_W).epsilon(1e-9));
    CHECK(dp_max == doctest::Approx(result.delta_P_kPa).epsilon(1e-12));

    const SimulationResult two_circuit = simulate(reference_two_circuit(), instance, config);
    CHECK(two_circuit.Q_W >= 1500.0);
    CHECK(two_circuit.Q_W <= 6000.0);
    CHECK(two_circuit.per_circuit.size() == 2);
    CHECK(two_circuit.per_circuit[0].mass_flow_kgps == doctest::Approx(0.01).epsilon(1e-12));
}

TEST_CASE("air-refrigerant energy balance closes for every small design") {
    SimulatorConfig config;
    for (int tpr : {2, 3}) {
        HexInstance instance;
        instance.layout = HexLayout(tpr);
        for (const CircuitryVector& x : all_feasible(instance.layout)) {
            const SimulationResult result =
                simulate(first_orientation(decode(x)), instance, config);
            REQUIRE(result.energy_balance_rel <= 1e-3);
            REQUIRE(result.Q_W > 0.0);
        }
    }
}

TEST_CASE("duty vanishes when the air enters at the evaporation temperature") {
    HexInstance instance;
    SimulatorConfig config;
    instance.air_inlet_C =
        RefrigerantTable::embedded_r134a().T_sat(instance.refrigerant_inlet_pressure_kPa);

    const SimulationResult result =
        simulate(first_orientation(decode(base_vector(HexLayout(4)))), instance, config);
    CHECK(std::abs(result.Q_W) <= 1e-6);
    for (const CircuitResult& circuit : result.per_circuit) {
        CHECK(std::abs(circuit.Q_W) <= 1e-6);
        CHECK(circuit.outlet.quality ==
              doctest::Approx(instance.refrigerant_inlet_quality).epsilon(1e-9));
    }
    CHECK(result.delta_P_kPa > 0.0);
}

TEST_CASE("duty increases strictly with the air inlet temperature") {
    HexInstance instance;
    SimulatorConfig config;
    const CircuitryDesign design = reference_two_circuit();

    double previous = -1.0;
    for (double air_C : {10.0, 15.0, 20.0, 24.0, 30.0, 35.0}) {
        instance.air_inlet_C = air_C;
        const SimulationResult result = simulate(design, instance, config);
        CHECK(result.Q_W > previous);
        previous = result.Q_W;
    }
}

TEST_CASE("merging circuits raises the pressure drop") {
    HexInstance instance;
    instance.layout = HexLayout(2);
    SimulatorConfig config;

    // Two two-tube circuits against the full four-tube path 1-2-3-4.
    const SimulationResult split = simulate(directed_from_ones(2, {1, 6}), instance, config);
    const SimulationResult merged = simulate(directed_from_ones(2, {1, 4, 6}), instance, config);
    CHECK(split.per_circuit.size() == 2);
    CHECK(merged.per_circuit.size() == 1);
    CHECK(merged.per_circuit[0].mass_flow_kgps == doctest::Approx(0.02).epsilon(1e-12));
    // Twice the mass flux over twice the length: far more friction.
    CHECK(merged.delta_P_kPa > 2.0 * split.delta_P_kPa);
}

TEST_CASE("axial resolution barely moves the answer") {
    HexInstance instance;
    SimulatorConfig coarse;
    coarse.segments_per_tube = 10;
    SimulatorConfig fine;
    fine.segments_per_tube = 40;

    const CircuitryDesign design = reference_two_circuit();
    const SimulationResult a = simulate(design, instance, coarse);
    const SimulationResult b = simulate(design, instance, fine);
    CHECK(std::abs(a.Q_W - b.Q_W) / b.Q_W < 5e-3);
}

TEST_CASE("repeated runs are bit-identical") {
    HexInstance instance;
    SimulatorConfig config;
    const CircuitryDesign design = reference_two_circuit();

    const SimulationResult a = simulate(design, instance, config);
    const SimulationResult b = simulate(design, instance, config);
    CHECK(a.Q_W == b.Q_W);
    CHECK(a.delta_P_kPa == b.delta_P_kPa);
    CHECK(a.outer_iterations == b.outer_iterations);
    CHECK(a.energy_balance_rel == b.energy_balance_rel);
    REQUIRE(a.per_circuit.size() == b.per_circuit.size());
    for (std::size_t i = 0; i < a.per_circuit.size(); ++i) {
        CHECK(a.per_circuit[i].Q_W == b.per_circuit[i].Q_W);
        CHECK(a.per_circuit[i].delta_p_kPa == b.per_circuit[i].delta_p_kPa);
        CHECK(a.per_circuit[i].outlet.enthalpy_kJkg == b.per_circuit[i].outlet.enthalpy_kJkg);
    }
}

TEST_CASE("every direction assignment stays within a narrow band") {
    HexInstance instance;
    SimulatorConfig config;
    const CircuitryDesign undirected = decode(
        CircuitryVector::parse("t=8;bits=1000000000010101000000100001"));

    double q_min = 1e300;
    double q_max = -1e300;
    for (const CircuitryDesign& variant : orient(undirected)) {
        const double q = simulate(variant, instance, config).Q_W;
        q_min = std::min(q_min, q);
        q_max = std::max(q_max, q);
    }
    CHECK(q_max > 0.0);
    CHECK((q_max - q_min) / q_max < 0.02);

    const double first = simulate(first_orientation(undirected), instance, config).Q_W;
    const double variant0 = simulate(orient(undirected)[0], instance, config).Q_W;
    CHECK(first == variant0);
}

TEST_CASE("segment records trace the full tube-by-tube march") {
    HexInstance instance;
    SimulatorConfig config;
    config.record_segments = true;
    const CircuitryDesign design = reference_two_circuit();

    const SimulationResult result = simulate(design, instance, config);
    REQUIRE(result.segments.size() ==
            static_cast<std::size_t>(8 * config.segments_per_tube));

    std::set<TubeId> tubes;
    double duty_sum = 0.0;
    for (const SegmentRecord& segment : result.segments) {
        tubes.insert(segment.tube);
        CHECK(segment.axial_slice >= 1);
        CHECK(segment.axial_slice <= config.segments_per_tube);
        CHECK(segment.air_out_C <= segment.air_in_C + 1e-12);
        duty_sum += segment.duty_W;
    }
    CHECK(tubes.size() == 8);
    CHECK(duty_sum == doctest::Approx(result.Q_W).epsilon(1e-9));

    SimulatorConfig plain;
    CHECK(simulate(design, instance, plain).segments.empty());
}

TEST_CASE("convergence failures carry the iteration trace") {
    HexInstance instance;
    SimulatorConfig config;
    config.max_outer_iterations = 1;
    try {
        simulate(reference_two_circuit(), instance, config);
        FAIL("expected ConvergenceError");
    } catch (const ConvergenceError& err) {
        CHECK(err.trace().size() == 1);
        CHECK(err.trace().front() > config.air_coupling_tolerance_K);
    }
}

TEST_CASE("leaving the property-table range raises a domain error") {
    SimulatorConfig config;

    HexInstance low_pressure;
    low_pressure.refrigerant_inlet_pressure_kPa = 90.0;
    CHECK_THROWS_AS(
        simulate(first_orientation(decode(base_vector(HexLayout(4)))), low_pressure, config),
        std::domain_error);

    // A huge mass flow through one long circuit collapses the pressure below
    // the table minimum mid-march.
    HexInstance torrent;
    torrent.layout = HexLayout(2);
    torrent.refrigerant_mass_flow_kgps = 0.4;
    CHECK_THROWS_AS(simulate(directed_from_ones(2, {1, 4, 6}), torrent, config),
                    std::domain_error);
}

TEST_CASE("input validation rejects malformed designs and parameters") {
    HexInstance instance;
    SimulatorConfig config;

    const CircuitryDesign undirected = decode(base_vector(HexLayout(4)));
    CHECK_THROWS_AS(simulate(undirected, instance, config), std::invalid_argument);

    const CircuitryDesign wrong_layout = directed_from_ones(2, {1, 6});
    CHECK_THROWS_AS(simulate(wrong_layout, instance, config), std::invalid_argument);

    HexInstance bad_geometry;
    bad_geometry.tube_length_mm = 0.0;
    CHECK_THROWS_AS(bad_geometry.check(), std::invalid_argument);
    HexInstance bad_quality;
    bad_quality.refrigerant_inlet_quality = 1.2;
    CHECK_THROWS_AS(bad_quality.check(), std::invalid_argument);
    HexInstance inverted_tube;
    inverted_tube.tube_inner_diameter_mm = inverted_tube.tube_outer_diameter_mm;
    CHECK_THROWS_AS(inverted_tube.check(), std::invalid_argument);

    SimulatorConfig loose_tolerance;
    loose_tolerance.air_coupling_tolerance_K = 0.1;
    CHECK_THROWS_AS(loose_tolerance.check(), std::invalid_argument);
    SimulatorConfig over_relaxed;
    over_relaxed.relaxation = 1.5;
    CHECK_THROWS_AS(over_relaxed.check(), std::invalid_argument);
    SimulatorConfig zero_segments;
    zero_segments.segments_per_tube = 0;
    CHECK_THROWS_AS(zero_segments.check(), std::invalid_argument);
}
