#pragma once

/// @file config.hpp
/// @brief Sectioned key = value configuration files ('#' comments carry the
/// units) mapped onto the instance, simulator, penalty, solver, and budget
/// structures.

#include <map>
#include <string>

#include "hexcirc/objective.hpp"
#include "hexcirc/simulator.hpp"
#include "hexcirc/solvers.hpp"

namespace hexcirc {

/// Parsed configuration: section -> key -> raw value text.
class ConfigMap {
  public:
    ConfigMap() = default;

    /// Parses "[section]" headers and "key = value" lines; '#' starts a
    /// comment. Throws std::runtime_error with line numbers on bad syntax.
    static ConfigMap parse(const std::string& text);
    static ConfigMap load(const std::string& path);

    bool has(const std::string& section, const std::string& key) const;
    /// Typed getters returning `fallback` when the key is absent. Throw
    /// std::runtime_error when present but unparsable.
    double get_double(const std::string& section, const std::string& key, double fallback) const;
    int get_int(const std::string& section, const std::string& key, int fallback) const;
    std::string get_string(const std::string& section, const std::string& key,
                           const std::string& fallback) const;

    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

    /// FNV-1a 64 over the canonical serialized form; stable across key
    /// ordering in the source file.
    std::string content_hash() const;

  private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

/// Overlay helpers: start from defaults, apply whatever the config defines.
/// Unknown keys in the relevant sections raise std::runtime_error so typos
/// fail loudly.
HexInstance instance_from_config(const ConfigMap& config, int tubes_per_row);
SimulatorConfig simulator_from_config(const ConfigMap& config);
PenaltyConfig penalty_from_config(const ConfigMap& config);
Budget budget_from_config(const ConfigMap& config);
DirectConfig direct_from_config(const ConfigMap& config);
EvolutionConfig evolution_from_config(const ConfigMap& config);

/// Reference configuration text with every supported key at its default,
/// units in comments.
std::string default_config_text();

}  // namespace hexcirc
