#include "hexcirc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hexcirc {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Geometry and air-side quantities fixed for a whole simulation.
struct DerivedGeometry {
    int segments = 0;
    double segment_length_m = 0.0;
    double inner_area_seg_m2 = 0.0;    // refrigerant-side transfer area per segment
    double air_area_eff_seg_m2 = 0.0;  // fin-efficiency-weighted air-side area per segment
    double cross_section_m2 = 0.0;
    double inner_diameter_m = 0.0;
    double h_air_Wm2K = 0.0;
    double C_air_slice_WK = 0.0;  // capacity rate of the air crossing one tube segment
};

DerivedGeometry derive_geometry(const HexInstance& in, const SimulatorConfig& cfg) {
    DerivedGeometry g;
    g.segments = cfg.segments_per_tube;
    const double length_m = in.tube_length_mm / 1000.0;
    g.segment_length_m = length_m / g.segments;
    g.inner_diameter_m = in.tube_inner_diameter_mm / 1000.0;
    const double od_m = in.tube_outer_diameter_mm / 1000.0;
    const double tube_pitch_m = in.tube_spacing_mm / 1000.0;
    const double row_pitch_m = in.row_spacing_mm / 1000.0;
    const double fin_pitch_m = (in.fin_spacing_mm + in.fin_thickness_mm) / 1000.0;
    const double fin_thickness_m = in.fin_thickness_mm / 1000.0;

    g.inner_area_seg_m2 = kPi * g.inner_diameter_m * g.segment_length_m;
    g.cross_section_m2 = kPi * g.inner_diameter_m * g.inner_diameter_m / 4.0;

    // Plate-fin surface: per fin and tube, both faces of the plate patch
    // owned by the tube minus the tube hole; bare tube between fins.
    const double fins_per_m = 1.0 / fin_pitch_m;
    const double fin_area_per_m =
        fins_per_m * 2.0 * (tube_pitch_m * row_pitch_m - kPi * od_m * od_m / 4.0);
    const double bare_area_per_m = kPi * od_m * (1.0 - fin_thickness_m / fin_pitch_m);
    g.air_area_eff_seg_m2 =
        (bare_area_per_m + cfg.fin_efficiency * fin_area_per_m) * g.segment_length_m;

    const int tubes_per_row = in.layout.tubes_per_row();
    const double face_area_m2 = tubes_per_row * tube_pitch_m * length_m;
    const double free_flow_ratio = ((tube_pitch_m - od_m) / tube_pitch_m) *
                                   ((fin_pitch_m - fin_thickness_m) / fin_pitch_m);
    const double rho_air = cfg.air.density(in.air_pressure_kPa, in.air_inlet_C);
    const double air_mass_flow = rho_air * in.air_flow_m3ps;
    const double g_max = air_mass_flow / (face_area_m2 * free_flow_ratio);
    g.h_air_Wm2K = cfg.colburn_j * g_max * cfg.air.cp_kJkgK * 1000.0 *
                   std::pow(cfg.air.prandtl, -2.0 / 3.0);
    g.C_air_slice_WK =
        air_mass_flow / (tubes_per_row * g.segments) * cfg.air.cp_kJkgK * 1000.0;
    return g;
}

double crossflow_effectiveness(double ntu, double cr) {
    if (ntu <= 0.0) return 0.0;
    if (cr <= 1e-12) return 1.0 - std::exp(-ntu);
    // Both streams unmixed.
    return 1.0 - std::exp(std::pow(ntu, 0.22) / cr *
                          (std::exp(-cr * std::pow(ntu, 0.78)) - 1.0));
}

double series_ua(double h_air, double area_air, double h_ref, double area_ref) {
    return 1.0 / (1.0 / (h_air * area_air) + 1.0 / (h_ref * area_ref));
}

struct MarchState {
    double pressure_kPa;
    double enthalpy_kJkg;
};

// Heat duty of one segment plus the refrigerant state update. Friction uses
// the segment-inlet state (first order in segment length).
struct SegmentOutcome {
    double duty_W = 0.0;
    double friction_kPa = 0.0;
};

class CircuitMarcher {
  public:
    // Saturation properties are pinned to the circuit inlet pressure: the
    // evaporation temperature along a circuit stays at the inlet-pressure
    // value, and the pressure march only accumulates flow losses. With the
    // air inlet at the inlet saturation temperature, duty is exactly zero.
    CircuitMarcher(const HexInstance& in, const SimulatorConfig& cfg, const RefrigerantTable& table,
                   const DerivedGeometry& g, double mass_flow)
        : cfg_(cfg),
          table_(table),
          g_(g),
          sat_(table.sat_props(in.refrigerant_inlet_pressure_kPa)),
          mass_flow_(mass_flow) {
        mass_velocity_ = mass_flow_ / g_.cross_section_m2;
    }

    SegmentOutcome advance_segment(MarchState& state, double air_in_C) const {
        SegmentOutcome out;
        out.friction_kPa = friction_drop_kPa(state);

        double duty = 0.0;
        if (state.enthalpy_kJkg < sat_.h_g) {
            // Two-phase: refrigerant isothermal at T_sat, capacity ratio 0.
            const double ua = series_ua(g_.h_air_Wm2K, g_.air_area_eff_seg_m2,
                                        cfg_.two_phase_htc_Wm2K, g_.inner_area_seg_m2);
            const double ntu = ua / g_.C_air_slice_WK;
            const double eps = crossflow_effectiveness(ntu, 0.0);
            duty = std::max(0.0, eps * g_.C_air_slice_WK * (air_in_C - sat_.T_sat_C));
            const double dh_cap_kJkg = sat_.h_g - state.enthalpy_kJkg;
            const double dh_kJkg = duty / (mass_flow_ * 1000.0);
            if (dh_kJkg > dh_cap_kJkg && dh_kJkg > 0.0) {
                // Evaporation completes inside this segment: finish the
                // two-phase part, then superheat over the remaining length.
                const double phi = dh_cap_kJkg / dh_kJkg;
                const double duty_tp = mass_flow_ * 1000.0 * dh_cap_kJkg;
                const double duty_sp = superheat_duty(air_in_C, sat_.T_sat_C, 1.0 - phi);
                duty = duty_tp + duty_sp;
            }
        } else {
            const double t_ref = sat_.T_sat_C + (state.enthalpy_kJkg - sat_.h_g) / sat_.cp_g;
            duty = superheat_duty(air_in_C, t_ref, 1.0);
        }

        state.enthalpy_kJkg += duty / (mass_flow_ * 1000.0);
        state.pressure_kPa -= out.friction_kPa;
        if (state.pressure_kPa < table_.pressure_min()) {
            throw std::domain_error(
                "simulate: refrigerant pressure fell below the property-table range (" +
                std::to_string(state.pressure_kPa) + " kPa)");
        }
        out.duty_W = duty;
        return out;
    }

    // Bend between two consecutive tubes, charged at the local quality.
    double bend_drop_kPa(const MarchState& state) const {
        const double rho = homogeneous_density(state);
        const double g2 = mass_velocity_ * mass_velocity_;
        return cfg_.bend_loss_coefficient * g2 / (2.0 * rho) / 1000.0;
    }

    /// State report consistent with the pinned saturation properties; the
    /// pressure field carries the marched local pressure.
    RefrigerantState state_report(const MarchState& state) const {
        RefrigerantState rs;
        rs.pressure_kPa = state.pressure_kPa;
        rs.enthalpy_kJkg = state.enthalpy_kJkg;
        if (state.enthalpy_kJkg <= sat_.h_g) {
            rs.quality =
                std::clamp((state.enthalpy_kJkg - sat_.h_f) / (sat_.h_g - sat_.h_f), 0.0, 1.0);
            rs.superheat_K = 0.0;
            rs.temperature_C = sat_.T_sat_C;
        } else {
            rs.quality = 1.0;
            rs.superheat_K = (state.enthalpy_kJkg - sat_.h_g) / sat_.cp_g;
            rs.temperature_C = sat_.T_sat_C + rs.superheat_K;
        }
        return rs;
    }

    double mass_flow() const { return mass_flow_; }

  private:
    double superheat_duty(double air_in_C, double t_ref_C, double length_fraction) const {
        if (length_fraction <= 0.0) return 0.0;
        const double re = mass_velocity_ * g_.inner_diameter_m / sat_.mu_g;
        const double pr = sat_.cp_g * 1000.0 * sat_.mu_g / cfg_.vapor_conductivity_WmK;
        const double nu =
            cfg_.single_phase_nu_coefficient * std::pow(re, 0.8) * std::pow(pr, 0.4);
        const double h_ref = nu * cfg_.vapor_conductivity_WmK / g_.inner_diameter_m;
        const double ua = series_ua(g_.h_air_Wm2K, g_.air_area_eff_seg_m2 * length_fraction,
                                    h_ref, g_.inner_area_seg_m2 * length_fraction);
        const double c_air = g_.C_air_slice_WK * length_fraction;
        const double c_ref = mass_flow_ * sat_.cp_g * 1000.0;
        const double c_min = std::min(c_air, c_ref);
        const double c_max = std::max(c_air, c_ref);
        const double eps = crossflow_effectiveness(ua / c_min, c_min / c_max);
        return std::max(0.0, eps * c_min * (air_in_C - t_ref_C));
    }

    double homogeneous_density(const MarchState& state) const {
        const double x =
            std::clamp((state.enthalpy_kJkg - sat_.h_f) / (sat_.h_g - sat_.h_f), 0.0, 1.0);
        return 1.0 / ((1.0 - x) / sat_.rho_f + x / sat_.rho_g);
    }

    double friction_drop_kPa(const MarchState& state) const {
        const double x =
            std::clamp((state.enthalpy_kJkg - sat_.h_f) / (sat_.h_g - sat_.h_f), 0.0, 1.0);
        // McAdams homogeneous viscosity; saturated-vapor values once dry.
        const double mu = 1.0 / ((1.0 - x) / sat_.mu_f + x / sat_.mu_g);
        const double rho = homogeneous_density(state);
        const double re = mass_velocity_ * g_.inner_diameter_m / mu;
        const double f = cfg_.friction_coefficient * std::pow(re, -cfg_.friction_exponent);
        const double g2 = mass_velocity_ * mass_velocity_;
        const double dp_Pa =
            f * (g2 / (2.0 * rho)) * (g_.segment_length_m / g_.inner_diameter_m);
        return dp_Pa / 1000.0;
    }

    const SimulatorConfig& cfg_;
    const RefrigerantTable& table_;
    const DerivedGeometry& g_;
    SaturationRow sat_;
    double mass_flow_ = 0.0;
    double mass_velocity_ = 0.0;
};

// Air temperatures per (tube position, physical axial slice), flattened.
class AirField {
  public:
    AirField(int positions, int slices, double value)
        : slices_(slices), values_(static_cast<std::size_t>(positions) * slices, value) {}

    double& at(int position, int slice) {
        return values_[static_cast<std::size_t>(position - 1) * slices_ + (slice - 1)];
    }
    double at(int position, int slice) const {
        return values_[static_cast<std::size_t>(position - 1) * slices_ + (slice - 1)];
    }

  private:
    int slices_;
    std::vector<double> values_;
};

struct SweepResult {
    std::vector<CircuitResult> circuits;
    AirField row1_out;
    AirField row2_duty;
    double total_Q_W = 0.0;
    std::vector<SegmentRecord> records;
};

void check_design(const CircuitryDesign& design, const HexInstance& instance) {
    if (!design.directed) {
        throw std::invalid_argument("simulate: design must be directed");
    }
    if (!(design.layout == instance.layout)) {
        throw std::invalid_argument("simulate: design layout does not match instance layout");
    }
    if (design.circuits.empty()) {
        throw std::invalid_argument("simulate: design has no circuits");
    }
    // encode() enforces exact tube coverage; validate() the path structure.
    const FeasibilityReport report = validate(encode(design));
    if (!report.feasible) {
        throw std::invalid_argument("simulate: design is infeasible: " + report.message);
    }
    const std::vector<Edge> far = far_end_edges(design.layout);
    auto is_far = [&far](TubeId a, TubeId b) {
        if (a > b) std::swap(a, b);
        return std::any_of(far.begin(), far.end(),
                           [a, b](const Edge& e) { return e.i == a && e.j == b; });
    };
    for (const Circuit& circuit : design.circuits) {
        if (circuit.tubes.size() < 2 || !is_far(circuit.tubes[0], circuit.tubes[1])) {
            throw std::invalid_argument(
                "simulate: each circuit must enter at the near end (first connection at the far end)");
        }
    }
}

}  // namespace

void HexInstance::check() const {
    const double dims[] = {tube_length_mm,  tube_inner_diameter_mm,
                           tube_outer_diameter_mm, tube_thickness_mm,
                           row_spacing_mm,  tube_spacing_mm,
                           fin_spacing_mm,  fin_thickness_mm,
                           fins_per_inch,   refrigerant_inlet_pressure_kPa,
                           refrigerant_mass_flow_kgps, air_pressure_kPa,
                           air_flow_m3ps};
    for (double d : dims) {
        if (!(d > 0.0)) throw std::invalid_argument("HexInstance: all dimensions must be positive");
    }
    if (refrigerant_inlet_quality < 0.0 || refrigerant_inlet_quality > 1.0) {
        throw std::invalid_argument("HexInstance: inlet quality outside [0, 1]");
    }
    if (tube_inner_diameter_mm >= tube_outer_diameter_mm) {
        throw std::invalid_argument("HexInstance: inner diameter must be below outer diameter");
    }
}

void SimulatorConfig::check() const {
    const double values[] = {static_cast<double>(segments_per_tube),
                             two_phase_htc_Wm2K,
                             colburn_j,
                             fin_efficiency,
                             friction_coefficient,
                             friction_exponent,
                             bend_loss_coefficient,
                             single_phase_nu_coefficient,
                             vapor_conductivity_WmK,
                             air_coupling_tolerance_K,
                             static_cast<double>(max_outer_iterations),
                             relaxation,
                             min_delta_p_kPa};
    for (double v : values) {
        if (!(v > 0.0)) throw std::invalid_argument("SimulatorConfig: all values must be positive");
    }
    if (air_coupling_tolerance_K >= 0.1) {
        throw std::invalid_argument("SimulatorConfig: air_coupling_tolerance_K must be < 0.1");
    }
    if (relaxation > 1.0) {
        throw std::invalid_argument("SimulatorConfig: relaxation must be in (0, 1]");
    }
}

SimulationResult simulate(const CircuitryDesign& design, const HexInstance& instance,
                          const SimulatorConfig& config, const RefrigerantTable& table) {
    instance.check();
    config.check();
    check_design(design, instance);

    const DerivedGeometry geom = derive_geometry(instance, config);
    const int tubes_per_row = instance.layout.tubes_per_row();
    const int S = geom.segments;
    const int circuit_count = design.circuit_count();
    const double mass_flow_per_circuit =
        instance.refrigerant_mass_flow_kgps / circuit_count;
    const double inlet_h =
        table.enthalpy_at(instance.refrigerant_inlet_pressure_kPa, instance.refrigerant_inlet_quality);
    const CircuitMarcher marcher(instance, config, table, geom, mass_flow_per_circuit);

    AirField row2_in(tubes_per_row, S, instance.air_inlet_C);

    auto sweep = [&](bool record) -> SweepResult {
        SweepResult result{{},
                           AirField(tubes_per_row, S, instance.air_inlet_C),
                           AirField(tubes_per_row, S, 0.0),
                           0.0,
                           {}};
        result.circuits.reserve(static_cast<std::size_t>(circuit_count));
        for (const Circuit& circuit : design.circuits) {
            CircuitResult cr;
            cr.mass_flow_kgps = mass_flow_per_circuit;
            MarchState state{instance.refrigerant_inlet_pressure_kPa, inlet_h};
            for (std::size_t tube_idx = 0; tube_idx < circuit.tubes.size(); ++tube_idx) {
                const TubeId tube = circuit.tubes[tube_idx];
                const int row = instance.layout.row_of(tube);
                const int position = instance.layout.position_of(tube);
                // Inlets sit at the near end, connections alternate far and
                // near: even path positions march near-to-far.
                const bool near_to_far = tube_idx % 2 == 0;
                for (int s = 1; s <= S; ++s) {
                    const int slice = near_to_far ? s : S + 1 - s;
                    const double air_in =
                        row == 1 ? instance.air_inlet_C : row2_in.at(position, slice);
                    const SegmentOutcome seg = marcher.advance_segment(state, air_in);
                    const double air_out = air_in - seg.duty_W / geom.C_air_slice_WK;
                    if (row == 1) {
                        result.row1_out.at(position, slice) = air_out;
                    } else {
                        result.row2_duty.at(position, slice) = seg.duty_W;
                    }
                    cr.Q_W += seg.duty_W;
                    cr.delta_p_kPa += seg.friction_kPa;
                    if (record) {
                        const RefrigerantState rs = marcher.state_report(state);
                        result.records.push_back(SegmentRecord{tube, slice, seg.duty_W, air_in,
                                                               air_out, rs.quality,
                                                               rs.temperature_C,
                                                               state.pressure_kPa});
                    }
                }
                if (tube_idx + 1 < circuit.tubes.size()) {
                    cr.delta_p_kPa += marcher.bend_drop_kPa(state);
                }
            }
            cr.outlet = marcher.state_report(state);
            result.total_Q_W += cr.Q_W;
            result.circuits.push_back(cr);
        }
        return result;
    };

    std::vector<double> trace;
    bool converged = false;
    int iterations = 0;
    for (int iter = 1; iter <= config.max_outer_iterations; ++iter) {
        iterations = iter;
        const SweepResult swept = sweep(false);
        double max_delta = 0.0;
        for (int pos = 1; pos <= tubes_per_row; ++pos) {
            for (int s = 1; s <= S; ++s) {
                const double target = swept.row1_out.at(pos, s);
                const double current = row2_in.at(pos, s);
                const double updated = current + config.relaxation * (target - current);
                max_delta = std::max(max_delta, std::abs(updated - current));
                row2_in.at(pos, s) = updated;
            }
        }
        trace.push_back(max_delta);
        if (max_delta < config.air_coupling_tolerance_K) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("simulate: air-coupling iteration did not reach " +
                                   std::to_string(config.air_coupling_tolerance_K) + " K in " +
                                   std::to_string(config.max_outer_iterations) + " iterations",
                               std::move(trace));
    }

    // One settle sweep with the converged air field defines the result.
    const SweepResult final_sweep = sweep(config.record_segments);

    SimulationResult result;
    result.Q_W = final_sweep.total_Q_W;
    result.per_circuit = final_sweep.circuits;
    result.segments = final_sweep.records;
    result.outer_iterations = iterations;
    for (const CircuitResult& cr : final_sweep.circuits) {
        result.delta_P_kPa = std::max(result.delta_P_kPa, cr.delta_p_kPa);
    }

    // Control-volume air-side duty: face enters at ambient, exits at the
    // row-2 outlet computed from the row-2 inlet field the sweep actually
    // used. Any gap to the refrigerant side is the residual staleness of
    // the coupling iteration (row-2 inlet vs fresh row-1 outlet).
    double air_side_Q = 0.0;
    for (int pos = 1; pos <= tubes_per_row; ++pos) {
        for (int s = 1; s <= S; ++s) {
            const double exit =
                row2_in.at(pos, s) - final_sweep.row2_duty.at(pos, s) / geom.C_air_slice_WK;
            air_side_Q += geom.C_air_slice_WK * (instance.air_inlet_C - exit);
        }
    }
    double refrigerant_Q = 0.0;
    for (const CircuitResult& cr : final_sweep.circuits) {
        refrigerant_Q += cr.mass_flow_kgps * (cr.outlet.enthalpy_kJkg - inlet_h) * 1000.0;
    }
    result.energy_balance_rel =
        std::abs(air_side_Q - refrigerant_Q) / std::max(std::abs(refrigerant_Q), 1e-9);
    return result;
}

}  // namespace hexcirc
