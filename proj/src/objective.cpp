#include "hexcirc/objective.hpp"

#include <algorithm>
#include <stdexcept>

namespace hexcirc {

std::string objective_name(ObjectiveKind kind) {
    switch (kind) {
        case ObjectiveKind::HeatCapacity:
            return "q";
        case ObjectiveKind::RatioWithLimit:
            return "ratio";
    }
    throw std::invalid_argument("objective_name: unknown objective");
}

ObjectiveKind parse_objective(const std::string& name) {
    if (name == "q" || name == "heat") return ObjectiveKind::HeatCapacity;
    if (name == "ratio") return ObjectiveKind::RatioWithLimit;
    throw std::invalid_argument("parse_objective: expected 'q' or 'ratio', got '" + name + "'");
}

double penalized(double raw, double Q_W, const PenaltyConfig& config) {
    if (!(config.lambda > 0.0)) {
        throw std::invalid_argument("penalized: lambda must be positive");
    }
    const double violation = std::max(0.0, config.Q_lim_W - Q_W);
    return raw - config.lambda * violation * violation;
}

}  // namespace hexcirc
