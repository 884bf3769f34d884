#include "hexcirc/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace hexcirc {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

// Throws when a section holds a key outside the allowed set.
void check_known_keys(const ConfigMap& config, const std::string& section,
                      const std::set<std::string>& known) {
    const auto it = config.sections().find(section);
    if (it == config.sections().end()) return;
    for (const auto& [key, value] : it->second) {
        if (known.count(key) == 0) {
            throw std::runtime_error("config: unknown key '" + key + "' in section [" + section +
                                     "]");
        }
    }
}

}  // namespace

ConfigMap ConfigMap::parse(const std::string& text) {
    ConfigMap config;
    std::istringstream in(text);
    std::string line;
    std::string section;
    int line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        const auto comment = line.find('#');
        if (comment != std::string::npos) line.erase(comment);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']' || line.size() < 3) {
                throw std::runtime_error("config: bad section header at line " +
                                         std::to_string(line_number));
            }
            section = trim(line.substr(1, line.size() - 2));
            config.sections_[section];
            continue;
        }
        const auto equals = line.find('=');
        if (equals == std::string::npos) {
            throw std::runtime_error("config: expected 'key = value' at line " +
                                     std::to_string(line_number));
        }
        const std::string key = trim(line.substr(0, equals));
        const std::string value = trim(line.substr(equals + 1));
        if (key.empty()) {
            throw std::runtime_error("config: empty key at line " + std::to_string(line_number));
        }
        config.sections_[section][key] = value;
    }
    return config;
}

ConfigMap ConfigMap::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse(buffer.str());
}

bool ConfigMap::has(const std::string& section, const std::string& key) const {
    const auto it = sections_.find(section);
    return it != sections_.end() && it->second.count(key) > 0;
}

double ConfigMap::get_double(const std::string& section, const std::string& key,
                             double fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& text = sections_.at(section).at(key);
    try {
        std::size_t used = 0;
        const double value = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad number '" + text + "' for [" + section + "] " + key);
    }
}

int ConfigMap::get_int(const std::string& section, const std::string& key, int fallback) const {
    if (!has(section, key)) return fallback;
    const std::string& text = sections_.at(section).at(key);
    try {
        std::size_t used = 0;
        const int value = std::stoi(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return value;
    } catch (const std::exception&) {
        throw std::runtime_error("config: bad integer '" + text + "' for [" + section + "] " +
                                 key);
    }
}

std::string ConfigMap::get_string(const std::string& section, const std::string& key,
                                  const std::string& fallback) const {
    if (!has(section, key)) return fallback;
    return sections_.at(section).at(key);
}

std::string ConfigMap::content_hash() const {
    std::string canonical;
    for (const auto& [section, keys] : sections_) {
        canonical += '[' + section + "]\n";
        for (const auto& [key, value] : keys) {
            canonical += key + '=' + value + '\n';
        }
    }
    std::uint64_t hash = 14695981039346656037ull;
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    std::ostringstream out;
    out << std::hex << hash;
    return out.str();
}

HexInstance instance_from_config(const ConfigMap& config, int tubes_per_row) {
    check_known_keys(config, "instance",
                     {"tube_length_mm", "tube_inner_diameter_mm", "tube_outer_diameter_mm",
                      "tube_thickness_mm", "row_spacing_mm", "tube_spacing_mm", "fin_spacing_mm",
                      "fin_thickness_mm", "fins_per_inch", "refrigerant_inlet_pressure_kPa",
                      "refrigerant_inlet_quality", "refrigerant_mass_flow_kgps", "air_inlet_C",
                      "air_pressure_kPa", "air_flow_m3ps"});
    HexInstance instance;
    instance.layout = HexLayout(tubes_per_row);
    const std::string s = "instance";
    instance.tube_length_mm = config.get_double(s, "tube_length_mm", instance.tube_length_mm);
    instance.tube_inner_diameter_mm =
        config.get_double(s, "tube_inner_diameter_mm", instance.tube_inner_diameter_mm);
    instance.tube_outer_diameter_mm =
        config.get_double(s, "tube_outer_diameter_mm", instance.tube_outer_diameter_mm);
    instance.tube_thickness_mm =
        config.get_double(s, "tube_thickness_mm", instance.tube_thickness_mm);
    instance.row_spacing_mm = config.get_double(s, "row_spacing_mm", instance.row_spacing_mm);
    instance.tube_spacing_mm = config.get_double(s, "tube_spacing_mm", instance.tube_spacing_mm);
    instance.fin_spacing_mm = config.get_double(s, "fin_spacing_mm", instance.fin_spacing_mm);
    instance.fin_thickness_mm =
        config.get_double(s, "fin_thickness_mm", instance.fin_thickness_mm);
    instance.fins_per_inch = config.get_double(s, "fins_per_inch", instance.fins_per_inch);
    instance.refrigerant_inlet_pressure_kPa = config.get_double(
        s, "refrigerant_inlet_pressure_kPa", instance.refrigerant_inlet_pressure_kPa);
    instance.refrigerant_inlet_quality =
        config.get_double(s, "refrigerant_inlet_quality", instance.refrigerant_inlet_quality);
    instance.refrigerant_mass_flow_kgps =
        config.get_double(s, "refrigerant_mass_flow_kgps", instance.refrigerant_mass_flow_kgps);
    instance.air_inlet_C = config.get_double(s, "air_inlet_C", instance.air_inlet_C);
    instance.air_pressure_kPa = config.get_double(s, "air_pressure_kPa", instance.air_pressure_kPa);
    instance.air_flow_m3ps = config.get_double(s, "air_flow_m3ps", instance.air_flow_m3ps);
    instance.check();
    return instance;
}

SimulatorConfig simulator_from_config(const ConfigMap& config) {
    check_known_keys(config, "simulator",
                     {"segments_per_tube", "two_phase_htc_Wm2K", "colburn_j", "fin_efficiency",
                      "friction_coefficient", "friction_exponent", "bend_loss_coefficient",
                      "single_phase_nu_coefficient", "vapor_conductivity_WmK",
                      "air_coupling_tolerance_K", "max_outer_iterations", "relaxation",
                      "min_delta_p_kPa"});
    SimulatorConfig sim;
    const std::string s = "simulator";
    sim.segments_per_tube = config.get_int(s, "segments_per_tube", sim.segments_per_tube);
    sim.two_phase_htc_Wm2K = config.get_double(s, "two_phase_htc_Wm2K", sim.two_phase_htc_Wm2K);
    sim.colburn_j = config.get_double(s, "colburn_j", sim.colburn_j);
    sim.fin_efficiency = config.get_double(s, "fin_efficiency", sim.fin_efficiency);
    sim.friction_coefficient =
        config.get_double(s, "friction_coefficient", sim.friction_coefficient);
    sim.friction_exponent = config.get_double(s, "friction_exponent", sim.friction_exponent);
    sim.bend_loss_coefficient =
        config.get_double(s, "bend_loss_coefficient", sim.bend_loss_coefficient);
    sim.single_phase_nu_coefficient =
        config.get_double(s, "single_phase_nu_coefficient", sim.single_phase_nu_coefficient);
    sim.vapor_conductivity_WmK =
        config.get_double(s, "vapor_conductivity_WmK", sim.vapor_conductivity_WmK);
    sim.air_coupling_tolerance_K =
        config.get_double(s, "air_coupling_tolerance_K", sim.air_coupling_tolerance_K);
    sim.max_outer_iterations = config.get_int(s, "max_outer_iterations", sim.max_outer_iterations);
    sim.relaxation = config.get_double(s, "relaxation", sim.relaxation);
    sim.min_delta_p_kPa = config.get_double(s, "min_delta_p_kPa", sim.min_delta_p_kPa);
    sim.check();
    return sim;
}

PenaltyConfig penalty_from_config(const ConfigMap& config) {
    check_known_keys(config, "penalty", {"lambda", "q_lim_W"});
    PenaltyConfig penalty;
    penalty.lambda = config.get_double("penalty", "lambda", penalty.lambda);
    penalty.Q_lim_W = config.get_double("penalty", "q_lim_W", penalty.Q_lim_W);
    return penalty;
}

Budget budget_from_config(const ConfigMap& config) {
    check_known_keys(config, "budget", {"max_evals", "max_seconds", "seed"});
    Budget budget;
    budget.max_simulator_calls = config.get_int("budget", "max_evals", budget.max_simulator_calls);
    budget.max_wall_seconds =
        config.get_double("budget", "max_seconds", budget.max_wall_seconds);
    budget.seed = static_cast<std::uint64_t>(
        config.get_double("budget", "seed", static_cast<double>(budget.seed)));
    if (budget.max_simulator_calls <= 0 || budget.max_wall_seconds <= 0) {
        throw std::runtime_error("config: budget limits must be positive");
    }
    return budget;
}

DirectConfig direct_from_config(const ConfigMap& config) {
    check_known_keys(config, "solver.direct",
                     {"max_divisions", "stale_round_limit", "max_level",
                      "infeasible_offset_fraction"});
    DirectConfig direct;
    const std::string s = "solver.direct";
    direct.max_divisions = config.get_int(s, "max_divisions", direct.max_divisions);
    direct.stale_round_limit = config.get_int(s, "stale_round_limit", direct.stale_round_limit);
    direct.max_level = config.get_int(s, "max_level", direct.max_level);
    direct.infeasible_offset_fraction =
        config.get_double(s, "infeasible_offset_fraction", direct.infeasible_offset_fraction);
    return direct;
}

EvolutionConfig evolution_from_config(const ConfigMap& config) {
    check_known_keys(config, "solver.evolution", {"mu", "lambda", "relink_probability"});
    EvolutionConfig evolution;
    const std::string s = "solver.evolution";
    evolution.mu = config.get_int(s, "mu", evolution.mu);
    evolution.lambda = config.get_int(s, "lambda", evolution.lambda);
    evolution.relink_probability =
        config.get_double(s, "relink_probability", evolution.relink_probability);
    return evolution;
}

std::string default_config_text() {
    return R"(# Coil circuitry optimizer configuration.
# Every key is optional; absent keys keep the built-in defaults shown here.

[instance]
tube_length_mm = 1143                 # tube length [mm]
tube_inner_diameter_mm = 9.40         # [mm]
tube_outer_diameter_mm = 10.06        # [mm]
tube_thickness_mm = 0.33              # [mm]
row_spacing_mm = 19.05                # horizontal spacing between depth rows [mm]
tube_spacing_mm = 25.40               # vertical spacing within a row [mm]
fin_spacing_mm = 1.17                 # clear gap between fins [mm]
fin_thickness_mm = 0.10               # [mm]
fins_per_inch = 20                    # [1/inch]
refrigerant_inlet_pressure_kPa = 350  # [kPa]
refrigerant_inlet_quality = 0.15      # vapor mass fraction [-]
refrigerant_mass_flow_kgps = 0.02     # total over all circuits [kg/s]
air_inlet_C = 24                      # [degC]
air_pressure_kPa = 101.325            # [kPa]
air_flow_m3ps = 2                     # [m3/s]

[simulator]
segments_per_tube = 10                # axial segments per tube
two_phase_htc_Wm2K = 2500             # refrigerant-side boiling HTC [W/m2K]
colburn_j = 0.010                     # air-side Colburn j factor [-]
fin_efficiency = 0.85                 # [-]
friction_coefficient = 0.046          # f = c * Re^-e [-]
friction_exponent = 0.2               # [-]
bend_loss_coefficient = 1.5           # velocity heads per return bend [-]
single_phase_nu_coefficient = 0.023   # Nu = c * Re^0.8 * Pr^0.4 [-]
vapor_conductivity_WmK = 0.0118       # saturated vapor conductivity [W/mK]
air_coupling_tolerance_K = 1e-4       # outer-iteration tolerance [K]
max_outer_iterations = 100
relaxation = 0.7                      # under-relaxation factor (0, 1]
min_delta_p_kPa = 1e-6                # floor before forming Q / delta_P [kPa]

[penalty]
lambda = 1e6                          # quadratic penalty weight
q_lim_W = 3900                        # heat-capacity lower bound [W]

[budget]
max_evals = 2500                      # simulator calls per solver run
max_seconds = 86400                   # wall-time limit per solver run [s]
seed = 1

[solver.direct]
max_divisions = 50000
stale_round_limit = 60                # rounds without a new simulator call
max_level = 16                        # trisection depth cap per dimension
infeasible_offset_fraction = 0.1

[solver.evolution]
mu = 20
lambda = 40
relink_probability = 0.5
)";
}

}  // namespace hexcirc
