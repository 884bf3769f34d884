#include "hexcirc/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace hexcirc {

namespace {

// R134a saturation data, 100..1000 kPa, transcribed from standard published
// saturation tables (ASHRAE reference state: h_f = 0 at -40 degC).
// Columns: P[kPa], Tsat[degC], h_f[kJ/kg], h_g[kJ/kg], rho_f[kg/m3],
// rho_g[kg/m3], mu_f[Pa s], mu_g[Pa s], cp_g[kJ/kgK].
constexpr SaturationRow kR134aRows[] = {
    {100.0, -26.37, 17.28, 234.44, 1377.6, 5.19, 3.85e-4, 9.60e-6, 0.79},
    {140.0, -18.77, 27.08, 239.16, 1354.8, 7.17, 3.45e-4, 9.90e-6, 0.81},
    {160.0, -15.60, 31.21, 241.11, 1344.6, 8.12, 3.30e-4, 1.00e-5, 0.82},
    {200.0, -10.09, 38.43, 244.46, 1327.5, 10.01, 3.07e-4, 1.02e-5, 0.83},
    {240.0, -5.37, 44.75, 247.28, 1312.3, 11.92, 2.89e-4, 1.04e-5, 0.85},
    {280.0, -1.23, 50.18, 249.72, 1298.9, 13.82, 2.74e-4, 1.06e-5, 0.87},
    {320.0, 2.46, 55.16, 251.88, 1286.7, 15.72, 2.62e-4, 1.07e-5, 0.89},
    {360.0, 5.82, 59.72, 253.81, 1275.3, 17.63, 2.52e-4, 1.09e-5, 0.91},
    {400.0, 8.91, 63.94, 255.55, 1264.7, 19.53, 2.43e-4, 1.10e-5, 0.93},
    {500.0, 15.71, 73.33, 259.30, 1240.8, 24.32, 2.25e-4, 1.13e-5, 0.97},
    {600.0, 21.55, 81.51, 262.40, 1219.7, 29.16, 2.11e-4, 1.16e-5, 1.01},
    {700.0, 26.69, 88.82, 265.03, 1200.3, 34.06, 2.00e-4, 1.19e-5, 1.05},
    {800.0, 31.31, 95.47, 267.29, 1182.3, 39.03, 1.90e-4, 1.21e-5, 1.09},
    {900.0, 35.51, 101.61, 269.26, 1165.4, 44.09, 1.82e-4, 1.24e-5, 1.13},
    {1000.0, 39.37, 107.32, 270.99, 1149.4, 49.23, 1.74e-4, 1.26e-5, 1.17},
};

SaturationRow lerp(const SaturationRow& a, const SaturationRow& b, double f) {
    auto mix = [f](double x, double y) { return x + f * (y - x); };
    return SaturationRow{mix(a.pressure_kPa, b.pressure_kPa),
                         mix(a.T_sat_C, b.T_sat_C),
                         mix(a.h_f, b.h_f),
                         mix(a.h_g, b.h_g),
                         mix(a.rho_f, b.rho_f),
                         mix(a.rho_g, b.rho_g),
                         mix(a.mu_f, b.mu_f),
                         mix(a.mu_g, b.mu_g),
                         mix(a.cp_g, b.cp_g)};
}

std::string format_value(double v) {
    std::ostringstream out;
    out.precision(12);
    out << v;
    return out.str();
}

}  // namespace

RefrigerantTable::RefrigerantTable(std::vector<SaturationRow> rows) : rows_(std::move(rows)) {
    if (rows_.size() < 2) {
        throw std::invalid_argument("RefrigerantTable: need at least two rows");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
        const SaturationRow& r = rows_[i];
        if (!(r.h_g > r.h_f)) {
            throw std::invalid_argument("RefrigerantTable: h_g <= h_f at row " + std::to_string(i));
        }
        if (!(r.rho_f > r.rho_g)) {
            throw std::invalid_argument("RefrigerantTable: rho_f <= rho_g at row " +
                                        std::to_string(i));
        }
        if (r.pressure_kPa <= 0 || r.rho_g <= 0 || r.mu_f <= 0 || r.mu_g <= 0 || r.cp_g <= 0) {
            throw std::invalid_argument("RefrigerantTable: nonpositive value at row " +
                                        std::to_string(i));
        }
        if (i > 0 && !(r.pressure_kPa > rows_[i - 1].pressure_kPa)) {
            throw std::invalid_argument(
                "RefrigerantTable: pressures must be strictly increasing (row " +
                std::to_string(i) + ")");
        }
    }
}

const RefrigerantTable& RefrigerantTable::embedded_r134a() {
    static const RefrigerantTable table(
        std::vector<SaturationRow>(std::begin(kR134aRows), std::end(kR134aRows)));
    return table;
}

RefrigerantTable RefrigerantTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("RefrigerantTable::load: cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("RefrigerantTable::load: empty file " + path);
    }
    std::vector<SaturationRow> rows;
    int line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream cells(line);
        SaturationRow r{};
        double* fields[] = {&r.pressure_kPa, &r.T_sat_C, &r.h_f,  &r.h_g, &r.rho_f,
                            &r.rho_g,        &r.mu_f,    &r.mu_g, &r.cp_g};
        std::string cell;
        for (double* field : fields) {
            if (!std::getline(cells, cell, ',')) {
                throw std::runtime_error("RefrigerantTable::load: short row at " + path + ":" +
                                         std::to_string(line_number));
            }
            try {
                *field = std::stod(cell);
            } catch (const std::exception&) {
                throw std::runtime_error("RefrigerantTable::load: bad number '" + cell + "' at " +
                                         path + ":" + std::to_string(line_number));
            }
        }
        rows.push_back(r);
    }
    return RefrigerantTable(std::move(rows));
}

std::string RefrigerantTable::to_csv() const {
    std::string out =
        "pressure_kPa,T_sat_C,h_f_kJkg,h_g_kJkg,rho_f_kgm3,rho_g_kgm3,mu_f_Pas,mu_g_Pas,cp_g_kJkgK\n";
    for (const SaturationRow& r : rows_) {
        out += format_value(r.pressure_kPa) + ',' + format_value(r.T_sat_C) + ',' +
               format_value(r.h_f) + ',' + format_value(r.h_g) + ',' + format_value(r.rho_f) +
               ',' + format_value(r.rho_g) + ',' + format_value(r.mu_f) + ',' +
               format_value(r.mu_g) + ',' + format_value(r.cp_g) + '\n';
    }
    return out;
}

SaturationRow RefrigerantTable::sat_props(double p_kPa) const {
    if (p_kPa < pressure_min() || p_kPa > pressure_max()) {
        throw std::domain_error("sat_props: pressure " + std::to_string(p_kPa) +
                                " kPa outside table range [" + std::to_string(pressure_min()) +
                                ", " + std::to_string(pressure_max()) + "]");
    }
    const auto upper = std::lower_bound(
        rows_.begin(), rows_.end(), p_kPa,
        [](const SaturationRow& row, double p) { return row.pressure_kPa < p; });
    if (upper->pressure_kPa == p_kPa) return *upper;
    const auto lower = upper - 1;
    const double f = (p_kPa - lower->pressure_kPa) / (upper->pressure_kPa - lower->pressure_kPa);
    return lerp(*lower, *upper, f);
}

double RefrigerantTable::enthalpy_at(double p_kPa, double quality) const {
    if (quality < 0.0 || quality > 1.0) {
        throw std::domain_error("enthalpy_at: quality " + std::to_string(quality) +
                                " outside [0, 1]");
    }
    const SaturationRow row = sat_props(p_kPa);
    return row.h_f + quality * (row.h_g - row.h_f);
}

double RefrigerantTable::quality_at(double p_kPa, double h_kJkg) const {
    const SaturationRow row = sat_props(p_kPa);
    return (h_kJkg - row.h_f) / (row.h_g - row.h_f);
}

RefrigerantState make_state(double p_kPa, double h_kJkg, const RefrigerantTable& table) {
    const SaturationRow row = table.sat_props(p_kPa);
    RefrigerantState state;
    state.pressure_kPa = p_kPa;
    state.enthalpy_kJkg = h_kJkg;
    if (h_kJkg <= row.h_g) {
        state.quality = (h_kJkg - row.h_f) / (row.h_g - row.h_f);
        state.superheat_K = 0.0;
        state.temperature_C = row.T_sat_C;
    } else {
        state.quality = 1.0;
        state.superheat_K = (h_kJkg - row.h_g) / row.cp_g;
        state.temperature_C = row.T_sat_C + state.superheat_K;
    }
    return state;
}

}  // namespace hexcirc
