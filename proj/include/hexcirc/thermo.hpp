#pragma once

/// @file thermo.hpp
/// @brief Minimal R134a saturation properties and dry-air helpers backing
/// the coil simulator. Properties come from an embedded table with linear
/// interpolation; no equation of state.

#include <string>
#include <vector>

namespace hexcirc {

/// One saturation-table row. Units: pressure kPa, temperature °C, enthalpy
/// kJ/kg, density kg/m³, viscosity Pa·s, heat capacity kJ/(kg·K).
struct SaturationRow {
    double pressure_kPa;
    double T_sat_C;
    double h_f;
    double h_g;
    double rho_f;
    double rho_g;
    double mu_f;
    double mu_g;
    double cp_g;
};

/// Saturated-refrigerant property table with linear interpolation between
/// rows. Immutable after construction; safe to share across threads.
class RefrigerantTable {
  public:
    /// Validates ordering and physical invariants (pressure strictly
    /// increasing, h_g > h_f, rho_f > rho_g). Throws std::invalid_argument.
    explicit RefrigerantTable(std::vector<SaturationRow> rows);

    /// Built-in R134a table, 100..1000 kPa, from standard published
    /// saturation data.
    static const RefrigerantTable& embedded_r134a();

    /// Loads a table from a CSV file (header line then one row per line,
    /// columns as in SaturationRow). Throws std::runtime_error on I/O or
    /// format errors.
    static RefrigerantTable load(const std::string& path);

    /// Writes the table in the same CSV format (load round-trips).
    std::string to_csv() const;

    const std::vector<SaturationRow>& rows() const { return rows_; }
    double pressure_min() const { return rows_.front().pressure_kPa; }
    double pressure_max() const { return rows_.back().pressure_kPa; }

    /// Linear interpolation at pressure p. Throws std::domain_error outside
    /// the table range.
    SaturationRow sat_props(double p_kPa) const;

    double T_sat(double p_kPa) const { return sat_props(p_kPa).T_sat_C; }

    /// h_f + quality * (h_g - h_f). Throws std::domain_error for quality
    /// outside [0, 1].
    double enthalpy_at(double p_kPa, double quality) const;

    /// Inverse of enthalpy_at in its quality argument.
    double quality_at(double p_kPa, double h_kJkg) const;

  private:
    std::vector<SaturationRow> rows_;
};

/// Dry-air constants and ideal-gas density. Latent loads are out of scope;
/// the air stream is sensible-only.
struct AirProperties {
    double cp_kJkgK = 1.006;
    double gas_constant_JkgK = 287.05;
    double prandtl = 0.707;

    double density(double pressure_kPa, double temperature_C) const {
        return pressure_kPa * 1000.0 / (gas_constant_JkgK * (temperature_C + 273.15));
    }
};

/// Refrigerant state carried along a circuit. Two-phase while quality < 1;
/// superheated afterwards (temperature above T_sat, quality pinned at 1).
struct RefrigerantState {
    double pressure_kPa = 0.0;
    double enthalpy_kJkg = 0.0;
    double quality = 0.0;
    double superheat_K = 0.0;
    double temperature_C = 0.0;

    bool two_phase() const { return superheat_K <= 0.0; }
};

/// Builds a consistent state from pressure and enthalpy against a table.
RefrigerantState make_state(double p_kPa, double h_kJkg, const RefrigerantTable& table);

}  // namespace hexcirc
