#pragma once

/// @file objective.hpp
/// @brief Optimization objectives over simulator outputs and the quadratic
/// penalty that folds the heat-capacity constraint into the ratio objective.

#include <string>

namespace hexcirc {

enum class ObjectiveKind {
    HeatCapacity,    ///< maximize Q [W]
    RatioWithLimit,  ///< maximize Q / delta_P [W/kPa] subject to Q >= Q_lim
};

std::string objective_name(ObjectiveKind kind);

/// Parses "q" / "heat" or "ratio". Throws std::invalid_argument otherwise.
ObjectiveKind parse_objective(const std::string& name);

struct PenaltyConfig {
    double lambda = 1e6;
    double Q_lim_W = 3900.0;
};

/// raw - lambda * max(0, Q_lim - Q)^2. Identity when the constraint holds.
double penalized(double raw, double Q_W, const PenaltyConfig& config);

}  // namespace hexcirc
