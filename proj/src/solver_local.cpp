#include <algorithm>

#include "solver_common.hpp"

namespace hexcirc {

namespace {

// Every split, merge, and relink neighbor of x, deduplicated and sorted by
// the serialized form for a deterministic evaluation order.
std::vector<CircuitryVector> neighborhood(const CircuitryVector& x) {
    std::vector<CircuitryVector> out;
    const std::vector<VectorIndex> fronts = front_edge_indices(x);
    for (VectorIndex k : fronts) {
        CircuitryVector split = x;
        split.set_bit(k, false);
        for (VectorIndex add : addable_front_indices(split)) {
            if (add == k) continue;  // relink back to x is not a move
            CircuitryVector relinked = split;
            relinked.set_bit(add, true);
            out.push_back(std::move(relinked));
        }
        out.push_back(std::move(split));
    }
    for (VectorIndex add : addable_front_indices(x)) {
        CircuitryVector merged = x;
        merged.set_bit(add, true);
        out.push_back(std::move(merged));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace

SolverReport solve_localsearch(const Problem& problem, const Budget& budget) {
    detail::check_problem(problem);
    detail::RunTracker tracker("local", problem, budget);
    std::mt19937_64 rng(budget.seed);
    Evaluator& evaluator = *problem.evaluator;

    try {
        // On small layouts the cache eventually absorbs every candidate and
        // the call budget stops draining; a stagnation cap ends the run.
        constexpr int kStaleRestartLimit = 50;
        int stale_restarts = 0;
        bool first_start = true;
        while (tracker.budget_left() && stale_restarts < kStaleRestartLimit) {
            const int calls_before = evaluator.simulator_calls();
            const double best_before = tracker.best_value();
            CircuitryVector current =
                first_start ? base_vector(problem.layout) : random_feasible(problem.layout, rng);
            if (!first_start) tracker.add_restart();
            first_start = false;
            Evaluation current_eval = evaluator.evaluate(current);
            tracker.observe(current, current_eval);

            // Steepest ascent until no neighbor improves.
            while (tracker.budget_left()) {
                const std::vector<CircuitryVector> neighbors = neighborhood(current);
                bool improved = false;
                CircuitryVector best_neighbor = current;
                Evaluation best_eval = current_eval;
                for (const CircuitryVector& candidate : neighbors) {
                    const Evaluation e = evaluator.evaluate(candidate);
                    tracker.observe(candidate, e);
                    if (e.feasible && e.value > best_eval.value) {
                        best_eval = e;
                        best_neighbor = candidate;
                        improved = true;
                    }
                }
                if (!improved) break;
                current = best_neighbor;
                current_eval = best_eval;
            }
            if (evaluator.simulator_calls() == calls_before &&
                tracker.best_value() <= best_before) {
                ++stale_restarts;
            } else {
                stale_restarts = 0;
            }
        }
    } catch (const BudgetExhausted&) {
        // Finalize with the incumbent found so far.
    }
    return tracker.finalize();
}

}  // namespace hexcirc
