#include <algorithm>

#include "solver_common.hpp"

namespace hexcirc {

namespace {

struct Individual {
    CircuitryVector x;
    double value;
};

// Feasibility-preserving mutation: relink (move a front-end edge), split
// (drop one), or merge (add one). Falls back across operators when the
// preferred one has no legal move; the result is always feasible.
CircuitryVector mutate(const CircuitryVector& parent, double relink_probability,
                       std::mt19937_64& rng) {
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const std::vector<VectorIndex> fronts = front_edge_indices(parent);
    const std::vector<VectorIndex> addable = addable_front_indices(parent);

    const bool can_split = !fronts.empty();
    const bool can_merge = !addable.empty();
    if (can_split && uniform(rng) < relink_probability) {
        CircuitryVector child = parent;
        std::uniform_int_distribution<std::size_t> pick(0, fronts.size() - 1);
        child.set_bit(fronts[pick(rng)], false);
        const std::vector<VectorIndex> now_addable = addable_front_indices(child);
        // Non-empty: re-adding the removed edge is always legal.
        std::uniform_int_distribution<std::size_t> pick_add(0, now_addable.size() - 1);
        child.set_bit(now_addable[pick_add(rng)], true);
        return child;
    }
    const bool do_merge = can_merge && (!can_split || uniform(rng) < 0.5);
    if (do_merge) {
        CircuitryVector child = parent;
        std::uniform_int_distribution<std::size_t> pick(0, addable.size() - 1);
        child.set_bit(addable[pick(rng)], true);
        return child;
    }
    if (can_split) {
        CircuitryVector child = parent;
        std::uniform_int_distribution<std::size_t> pick(0, fronts.size() - 1);
        child.set_bit(fronts[pick(rng)], false);
        return child;
    }
    return parent;  // t=2: no front-end moves exist
}

}  // namespace

SolverReport solve_evolutionary(const Problem& problem, const Budget& budget,
                                const EvolutionConfig& config) {
    detail::check_problem(problem);
    if (config.mu < 1 || config.lambda < 1) {
        throw std::invalid_argument("solve_evolutionary: mu and lambda must be >= 1");
    }
    detail::RunTracker tracker("evo", problem, budget);
    std::mt19937_64 rng(budget.seed);
    Evaluator& evaluator = *problem.evaluator;

    std::vector<Individual> population;
    try {
        // Seed with the no-front-edge design plus random feasible vectors.
        std::vector<CircuitryVector> seeds{base_vector(problem.layout)};
        for (int i = 1; i < config.mu; ++i) {
            seeds.push_back(random_feasible(problem.layout, rng));
        }
        std::sort(seeds.begin(), seeds.end());
        for (const CircuitryVector& x : seeds) {
            const Evaluation e = evaluator.evaluate(x);
            tracker.observe(x, e);
            population.push_back(Individual{x, e.value});
        }

        // On small layouts the cache eventually absorbs every candidate and
        // the call budget stops draining; a stagnation cap ends the run.
        constexpr int kStaleGenerationLimit = 200;
        int stale_generations = 0;
        while (tracker.budget_left() && stale_generations < kStaleGenerationLimit) {
            const int calls_before = evaluator.simulator_calls();
            const double best_before = tracker.best_value();
            std::vector<CircuitryVector> offspring;
            offspring.reserve(static_cast<std::size_t>(config.lambda));
            std::uniform_int_distribution<std::size_t> pick_parent(0, population.size() - 1);
            for (int j = 0; j < config.lambda; ++j) {
                const Individual& parent = population[pick_parent(rng)];
                offspring.push_back(mutate(parent.x, config.relink_probability, rng));
            }
            // Deterministic evaluation order regardless of generation order.
            std::sort(offspring.begin(), offspring.end());
            std::vector<Individual> merged = population;
            for (const CircuitryVector& x : offspring) {
                const Evaluation e = evaluator.evaluate(x);
                tracker.observe(x, e);
                merged.push_back(Individual{x, e.value});
            }
            // (mu+lambda) truncation; ties broken by the serialized vector,
            // duplicates dropped first so the survivors stay diverse.
            std::sort(merged.begin(), merged.end(), [](const Individual& a, const Individual& b) {
                if (a.value != b.value) return a.value > b.value;
                return a.x < b.x;
            });
            std::vector<Individual> next;
            for (const Individual& candidate : merged) {
                if (static_cast<int>(next.size()) >= config.mu) break;
                const bool duplicate =
                    std::any_of(next.begin(), next.end(),
                                [&candidate](const Individual& kept) { return kept.x == candidate.x; });
                if (!duplicate) next.push_back(candidate);
            }
            for (const Individual& candidate : merged) {
                if (static_cast<int>(next.size()) >= config.mu) break;
                next.push_back(candidate);  // pad with duplicates at small t
            }
            population = std::move(next);
            if (evaluator.simulator_calls() == calls_before &&
                tracker.best_value() <= best_before) {
                ++stale_generations;
            } else {
                stale_generations = 0;
            }
        }
    } catch (const BudgetExhausted&) {
        // Finalize with the incumbent found so far.
    }
    return tracker.finalize();
}

}  // namespace hexcirc
