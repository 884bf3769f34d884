#pragma once

// Internal helpers shared by the solver implementations.

#include "hexcirc/solvers.hpp"

namespace hexcirc::detail {

// Incumbent and report bookkeeping common to all solvers.
class RunTracker {
  public:
    RunTracker(std::string solver_name, const Problem& problem, const Budget& budget)
        : problem_(problem), budget_(budget) {
        report_.solver = std::move(solver_name);
        report_.objective = problem.evaluator->objective();
        report_.seed = budget.seed;
        report_.best_value = -std::numeric_limits<double>::infinity();
    }

    // Records one evaluated candidate; returns true when it improved the
    // incumbent. Ignores infeasible markers.
    bool observe(const CircuitryVector& x, const Evaluation& e) {
        if (!e.feasible) return false;
        report_.found_feasible = true;
        if (e.value > report_.best_value) {
            report_.best_value = e.value;
            report_.best = x;
            report_.best_Q_W = e.Q_W;
            report_.best_dP_kPa = e.dP_kPa;
            report_.best_raw = e.raw;
            report_.meets_limit = e.meets_limit;
            report_.trajectory.push_back(
                TrajectoryPoint{problem_.evaluator->simulator_calls(), e.value});
            return true;
        }
        return false;
    }

    bool budget_left() const {
        const Evaluator& ev = *problem_.evaluator;
        return ev.simulator_calls() < budget_.max_simulator_calls &&
               ev.elapsed_seconds() < budget_.max_wall_seconds;
    }

    void add_restart() { ++report_.restarts; }

    SolverReport finalize() {
        const Evaluator& ev = *problem_.evaluator;
        report_.simulator_calls = ev.simulator_calls();
        report_.cache_hits = ev.cache_hits();
        report_.attempts = ev.attempts();
        report_.wall_seconds = ev.elapsed_seconds();
        if (!report_.found_feasible) {
            report_.best_value = 0.0;
        }
        return report_;
    }

    double best_value() const { return report_.best_value; }
    bool found_feasible() const { return report_.found_feasible; }

  private:
    const Problem& problem_;
    Budget budget_;
    SolverReport report_;
};

void check_problem(const Problem& problem);

}  // namespace hexcirc::detail
