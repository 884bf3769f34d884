#pragma once

/// @file evaluator.hpp
/// @brief Budgeted, cached, logging front end to the simulator. All solver
/// traffic flows through here: feasibility screening, the memoization cache,
/// the JSONL evaluation log, and simulator-call accounting.

#include <chrono>
#include <fstream>
#include <limits>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>

#include "hexcirc/circuitry.hpp"
#include "hexcirc/objective.hpp"
#include "hexcirc/simulator.hpp"

namespace hexcirc {

/// One objective evaluation. `value` is what solvers maximize: Q for the
/// heat objective, the penalized ratio otherwise. Infeasible vectors yield
/// feasible == false and value == -infinity without touching the simulator.
struct Evaluation {
    bool feasible = false;
    double Q_W = 0.0;
    double dP_kPa = 0.0;
    double raw = 0.0;
    double value = -std::numeric_limits<double>::infinity();
    bool meets_limit = false;
    bool cache_hit = false;
    double wall_ms = 0.0;
};

/// Thrown when an evaluation would exceed the simulator-call or wall-time
/// budget. Solvers catch this to finalize their reports.
class BudgetExhausted : public std::runtime_error {
  public:
    enum class Kind { Calls, Wall };

    BudgetExhausted(Kind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}
    Kind kind() const { return kind_; }

  private:
    Kind kind_;
};

struct EvaluatorOptions {
    std::string log_path;  ///< empty: no JSONL log
    int max_simulator_calls = std::numeric_limits<int>::max();
    double max_wall_seconds = std::numeric_limits<double>::infinity();
};

/// Thread-safe evaluation front end. Cache key: the serialized directed
/// design, so re-encounters of a design are served without a simulator
/// call and do not count against the budget.
class Evaluator {
  public:
    Evaluator(HexInstance instance, SimulatorConfig sim_config, ObjectiveKind objective,
              PenaltyConfig penalty, const RefrigerantTable& table = RefrigerantTable::embedded_r134a(),
              EvaluatorOptions options = {});

    /// Validates, decodes, and evaluates the first orientation. Infeasible
    /// input returns the marker evaluation; no simulator call, no log line.
    Evaluation evaluate(const CircuitryVector& x);

    /// Evaluates one explicit orientation of a decoded design. `x` is the
    /// design's vector (logged); `orientation` its index from orient().
    Evaluation evaluate_directed(const CircuitryVector& x, const CircuitryDesign& directed,
                                 int orientation);

    /// Replays a JSONL evaluation log into the cache; replayed entries are
    /// not counted as simulator calls. Returns entries loaded.
    int preload_from_log(const std::string& path);

    int simulator_calls() const;
    int cache_hits() const;
    int infeasible_rejects() const;
    int attempts() const;
    double elapsed_seconds() const;
    /// Simulator calls still allowed by the budget.
    int calls_remaining() const;

    ObjectiveKind objective() const { return objective_; }
    const HexInstance& instance() const { return instance_; }
    const SimulatorConfig& sim_config() const { return sim_config_; }
    const PenaltyConfig& penalty() const { return penalty_; }
    const RefrigerantTable& table() const { return table_; }

  private:
    struct CachedResult {
        double Q_W;
        double dP_kPa;
    };

    Evaluation from_result(double Q_W, double dP_kPa, bool cache_hit, double wall_ms) const;
    void write_log_line(const std::string& vector_text, int orientation, double Q_W,
                        double dP_kPa, double wall_ms, bool cache_hit);

    HexInstance instance_;
    SimulatorConfig sim_config_;
    ObjectiveKind objective_;
    PenaltyConfig penalty_;
    const RefrigerantTable& table_;
    EvaluatorOptions options_;
    std::chrono::steady_clock::time_point start_;

    mutable std::mutex mutex_;
    std::unordered_map<std::string, CachedResult> cache_;
    std::ofstream log_;
    int simulator_calls_ = 0;
    int cache_hits_ = 0;
    int infeasible_rejects_ = 0;
    int attempts_ = 0;
};

}  // namespace hexcirc
