#pragma once

/// @file harness.hpp
/// @brief Experiment runner: instance factory, exhaustive enumeration
/// studies with distribution exports, solver comparison tables, and
/// optimality verification against the enumerated optimum.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hexcirc/config.hpp"
#include "hexcirc/csv.hpp"
#include "hexcirc/objective.hpp"
#include "hexcirc/simulator.hpp"
#include "hexcirc/solvers.hpp"

namespace hexcirc {

/// Reference test-coil instance with `tubes_per_row` tubes in each of the
/// two depth rows. Throws std::invalid_argument outside [1, 18].
HexInstance make_instance(int tubes_per_row);

/// The default experiment matrix: total tube counts 4, 6, ..., 36.
std::vector<int> default_tube_counts();

/// Everything one experiment run needs. Tube counts are totals over both
/// rows (always even).
struct ExperimentPlan {
    std::vector<int> tube_counts = default_tube_counts();
    std::vector<ObjectiveKind> objectives = {ObjectiveKind::HeatCapacity,
                                             ObjectiveKind::RatioWithLimit};
    std::vector<std::string> solvers = {"direct", "evo", "local"};
    Budget budget;
    SimulatorConfig sim_config;
    PenaltyConfig penalty;
    DirectConfig direct;
    EvolutionConfig evolution;
    ConfigMap config;  ///< raw config, kept for instance overlays and the manifest hash
    std::string out_dir = "out";
    int enumeration_cap_tubes = 12;
    bool override_enumeration_cap = false;
    bool resume = false;  ///< preload evaluation logs found in out_dir

    /// Throws std::invalid_argument for empty instance/objective/solver
    /// lists, odd or out-of-range tube counts, or unknown solver names.
    void check() const;

    /// Instance for one tube count, honoring [instance] config overrides.
    HexInstance instance_for(int tubes) const;
};

/// Builds a plan whose simulator, penalty, budget, and solver parameters
/// come from the config overlays.
ExperimentPlan plan_from_config(const ConfigMap& config);

/// Equal-width histogram. With a zero-width observed range every value
/// lands in the first bin.
struct Histogram {
    double lo = 0.0;
    double hi = 0.0;
    std::vector<std::uint64_t> counts;

    std::uint64_t total() const;
};

/// 25 bins by default, matching the exported distribution tables.
Histogram make_histogram(const std::vector<double>& values, int bins = 25);

CsvTable histogram_table(const Histogram& histogram);

/// One instance of the enumeration study. Statistics cover every directed
/// combination (each feasible vector in each orientation); the ratio is
/// Q / max(delta_P, floor) without the heat-capacity constraint, which
/// enters through `count_q_ge_limit` instead.
struct EnumerationStudyRow {
    int tubes = 0;
    std::uint64_t solutions = 0;
    std::uint64_t combinations = 0;
    std::uint64_t count_q_ge_limit = 0;
    double q_min_W = 0.0;
    double q_max_W = 0.0;
    double q_mean_W = 0.0;
    double ratio_min_WkPa = 0.0;
    double ratio_max_WkPa = 0.0;
    double ratio_mean_WkPa = 0.0;
    double wall_s = 0.0;
    Histogram q_histogram;
    Histogram ratio_histogram;
};

struct EnumerationStudy {
    std::vector<EnumerationStudyRow> rows;
};

/// Enumerates and simulates every combination for each planned tube count.
/// Instances above the enumeration cap throw std::invalid_argument unless
/// the plan overrides the cap. Writes enumeration_study.csv plus per
/// instance histogram exports into the plan's output directory.
EnumerationStudy run_enumeration_study(
    const ExperimentPlan& plan,
    const RefrigerantTable& table = RefrigerantTable::embedded_r134a());

/// The study table without the histogram columns.
CsvTable enumeration_table(const EnumerationStudy& study);

/// One comparison entry. `solved` requires a feasible design and, for the
/// ratio objective, one meeting the heat-capacity limit; unsolved entries
/// render as the dash marker.
struct ComparisonEntry {
    int tubes = 0;
    std::string solver;
    bool solved = false;
    double best_raw = 0.0;
    double wall_s = 0.0;
    int simulator_calls = 0;
};

struct SolverComparison {
    ObjectiveKind objective = ObjectiveKind::HeatCapacity;
    std::vector<ComparisonEntry> entries;
    std::string footnote;

    CsvTable table() const;
};

/// Runs every planned (instance, solver) pair for each objective. Each run
/// gets a fresh budgeted evaluator and its own evaluation log; tables are
/// rewritten atomically after every run so interrupts keep partial results.
/// The final table rows hold the per-solver geometric means over solved
/// instances (dash when none solved).
std::vector<SolverComparison> run_solver_comparison(
    const ExperimentPlan& plan,
    const RefrigerantTable& table = RefrigerantTable::embedded_r134a());

struct SolverGap {
    std::string solver;
    bool solved = false;
    double value = 0.0;
    double gap = 0.0;  ///< relative to the enumerated optimum
    int simulator_calls = 0;
    bool pass = false;
};

/// Verdict of one optimality check: the enumerated optimum under the same
/// evaluation policy solvers use (first orientation), and each solver's
/// relative gap to it.
struct OracleVerdict {
    int tubes = 0;
    ObjectiveKind objective = ObjectiveKind::HeatCapacity;
    double threshold = 0.0;
    double optimum_value = 0.0;
    std::optional<CircuitryVector> optimum;
    std::uint64_t designs_enumerated = 0;
    std::vector<SolverGap> gaps;
    bool pass = false;

    std::string text() const;
};

/// Brute-forces the optimum by enumeration, then runs each planned solver
/// and reports its relative gap. PASS when every solver is within the
/// threshold. Honors the enumeration cap.
OracleVerdict verify_against_oracle(
    const ExperimentPlan& plan, int tubes, ObjectiveKind objective, double threshold = 0.01,
    const RefrigerantTable& table = RefrigerantTable::embedded_r134a());

/// Reference note printed for tube counts whose previously published
/// enumeration statistics differ from the counts the stated connection
/// rules produce. Empty for all other tube counts.
std::optional<std::string> deviation_note(int tubes);

/// Geometric mean over strictly positive values; std::nullopt when the
/// input is empty or holds a nonpositive value.
std::optional<double> geometric_mean(const std::vector<double>& values);

/// Fixed-point formatting used by every exported table, so reruns are
/// comparable textually.
std::string format_fixed(double value, int decimals);

/// Writes via a temporary file in the same directory plus an atomic
/// rename; creates parent directories as needed.
void write_text_atomic(const std::string& path, const std::string& content);

/// Plain-text run manifest: versions, seeds, plan summary, config hash.
std::string manifest_text(const ExperimentPlan& plan);

/// The cell marker for "no solution found within budget".
inline const char* dash_marker() { return "-"; }

}  // namespace hexcirc
