#pragma once

/// @file simulator.hpp
/// @brief Segment-by-segment crossflow evaporator model: given a directed
/// circuitry design plus coil geometry and operating conditions, computes
/// the heat capacity Q and the refrigerant-side pressure difference.
///
/// The model is a deliberately small stand-in for a full coil rating tool:
/// epsilon-NTU per segment, constant two-phase HTC, Dittus-Boelter vapor
/// HTC, homogeneous two-phase friction, and thermal coupling of the two
/// depth rows through the air stream. Saturation properties are pinned to
/// each circuit's inlet pressure, so the pressure march accumulates flow
/// losses without shifting the evaporation temperature. Every correlation
/// constant lives in SimulatorConfig.

#include <stdexcept>
#include <vector>

#include "hexcirc/circuitry.hpp"
#include "hexcirc/thermo.hpp"

namespace hexcirc {

/// Coil geometry and operating conditions. Defaults describe the reference
/// two-row test coil; experiment instances vary only tubes_per_row.
struct HexInstance {
    HexLayout layout{4};
    double tube_length_mm = 1143.0;
    double tube_inner_diameter_mm = 9.40;
    double tube_outer_diameter_mm = 10.06;
    double tube_thickness_mm = 0.33;
    double row_spacing_mm = 19.05;   ///< horizontal spacing between depth rows
    double tube_spacing_mm = 25.40;  ///< vertical spacing within a row
    double fin_spacing_mm = 1.17;
    double fin_thickness_mm = 0.10;
    double fins_per_inch = 20.0;
    double refrigerant_inlet_pressure_kPa = 350.0;
    double refrigerant_inlet_quality = 0.15;
    double refrigerant_mass_flow_kgps = 0.02;
    double air_inlet_C = 24.0;
    double air_pressure_kPa = 101.325;
    double air_flow_m3ps = 2.0;

    /// Throws std::invalid_argument when a dimension is nonpositive or the
    /// inlet quality leaves [0, 1].
    void check() const;
};

/// Model knobs. All values positive; the air-coupling tolerance must stay
/// below 0.1 K for the energy-balance contract to be meaningful.
struct SimulatorConfig {
    int segments_per_tube = 10;
    double two_phase_htc_Wm2K = 2500.0;
    double colburn_j = 0.010;
    double fin_efficiency = 0.85;
    double friction_coefficient = 0.046;   ///< f = c * Re^(-friction_exponent)
    double friction_exponent = 0.2;
    double bend_loss_coefficient = 1.5;    ///< velocity heads per tube-to-tube bend
    double single_phase_nu_coefficient = 0.023;  ///< Nu = c * Re^0.8 * Pr^0.4
    double vapor_conductivity_WmK = 0.0118;
    double air_coupling_tolerance_K = 1e-4;
    int max_outer_iterations = 100;
    double relaxation = 0.7;
    double min_delta_p_kPa = 1e-6;  ///< floor applied before forming Q / delta_P
    bool record_segments = false;
    AirProperties air;

    void check() const;
};

/// Outcome for one circuit of a design.
struct CircuitResult {
    double mass_flow_kgps = 0.0;
    RefrigerantState outlet;
    double delta_p_kPa = 0.0;
    double Q_W = 0.0;
};

/// Per-segment trace, filled only when SimulatorConfig::record_segments.
struct SegmentRecord {
    TubeId tube = 0;
    int axial_slice = 0;  ///< physical slice index, 1 at the near end
    double duty_W = 0.0;
    double air_in_C = 0.0;
    double air_out_C = 0.0;
    double refrigerant_quality = 0.0;
    double refrigerant_temperature_C = 0.0;
    double pressure_kPa = 0.0;
};

struct SimulationResult {
    double Q_W = 0.0;
    double delta_P_kPa = 0.0;  ///< max over circuits
    std::vector<CircuitResult> per_circuit;
    std::vector<SegmentRecord> segments;
    int outer_iterations = 0;
    /// |air-side duty - refrigerant enthalpy change| / Q after convergence.
    double energy_balance_rel = 0.0;
};

/// Thrown when the air-coupling outer iteration fails to reach tolerance;
/// carries the per-iteration maximum air-temperature change.
class ConvergenceError : public std::runtime_error {
  public:
    ConvergenceError(std::string what, std::vector<double> trace)
        : std::runtime_error(std::move(what)), trace_(std::move(trace)) {}
    const std::vector<double>& trace() const { return trace_; }

  private:
    std::vector<double> trace_;
};

/// Runs the coil model for one directed design. The total refrigerant flow
/// splits equally across circuits; each circuit is marched tube by tube
/// from its inlet. Pure with respect to its inputs and bit-deterministic.
///
/// Throws std::invalid_argument for undirected designs or layout mismatch,
/// ConvergenceError when the outer iteration stalls, and std::domain_error
/// when the refrigerant state leaves the property-table range.
SimulationResult simulate(const CircuitryDesign& design, const HexInstance& instance,
                          const SimulatorConfig& config,
                          const RefrigerantTable& table = RefrigerantTable::embedded_r134a());

}  // namespace hexcirc
