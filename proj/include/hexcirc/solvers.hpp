#pragma once

/// @file solvers.hpp
/// @brief Derivative-free optimizers over the binary circuitry space: a
/// deterministic rectangle-division search, a feasibility-preserving
/// (mu+lambda) evolutionary search, and a steepest-ascent local search.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hexcirc/circuitry.hpp"
#include "hexcirc/evaluator.hpp"

namespace hexcirc {

/// The optimization problem handed to solvers. The evaluator carries the
/// instance, objective, penalty, and budget enforcement; free_indices are
/// the decision-vector positions not fixed by the far-end connections.
struct Problem {
    Evaluator* evaluator = nullptr;
    HexLayout layout{1};
    std::vector<VectorIndex> free_indices;
};

Problem make_problem(Evaluator& evaluator);

struct Budget {
    int max_simulator_calls = 2500;
    double max_wall_seconds = 86400.0;
    std::uint64_t seed = 1;
};

struct TrajectoryPoint {
    int calls;
    double value;
};

/// Result of one solver run. `best_value` is the maximized quantity (Q, or
/// the penalized ratio); `found_feasible` is false when the budget expired
/// with no feasible design evaluated, the table dash case.
struct SolverReport {
    std::string solver;
    ObjectiveKind objective = ObjectiveKind::HeatCapacity;
    std::uint64_t seed = 0;
    bool found_feasible = false;
    bool meets_limit = false;
    std::optional<CircuitryVector> best;
    double best_value = 0.0;
    double best_Q_W = 0.0;
    double best_dP_kPa = 0.0;
    double best_raw = 0.0;
    int simulator_calls = 0;
    int cache_hits = 0;
    int attempts = 0;
    int restarts = 0;
    double wall_seconds = 0.0;
    std::vector<TrajectoryPoint> trajectory;
};

struct DirectConfig {
    int max_divisions = 50000;
    int stale_round_limit = 60;  ///< consecutive rounds without a new simulator call
    int max_level = 16;          ///< trisection depth cap per dimension
    double infeasible_offset_fraction = 0.1;
};

struct EvolutionConfig {
    int mu = 20;
    int lambda = 40;
    double relink_probability = 0.5;
};

/// Deterministic rectangle-division search over the unit hypercube of free
/// coordinates. Centers round to binary vectors (>= 0.5 -> 1); infeasible
/// centers are valued below every feasible one, graded by how many of
/// their front-end edges violate the connection rules, and never reach the
/// simulator. No randomness: budget.seed is recorded but unused.
SolverReport solve_direct(const Problem& problem, const Budget& budget,
                          const DirectConfig& config = {});

/// (mu+lambda) evolutionary search over feasible designs only, with
/// split/merge/relink mutations.
SolverReport solve_evolutionary(const Problem& problem, const Budget& budget,
                                const EvolutionConfig& config = {});

/// Steepest-ascent hill climbing over the split/merge/relink neighborhood
/// with random feasible restarts.
SolverReport solve_localsearch(const Problem& problem, const Budget& budget);

/// Runs the solver named "direct", "evo", or "local".
SolverReport solve(const std::string& solver_name, const Problem& problem, const Budget& budget);

/// Vector indices of the front-end edges present in x, ascending.
std::vector<VectorIndex> front_edge_indices(const CircuitryVector& x);

/// Vector indices of absent front-end edges whose addition keeps x feasible
/// (both endpoint degrees < 2, endpoints in distinct components), ascending.
std::vector<VectorIndex> addable_front_indices(const CircuitryVector& x);

/// Random feasible vector: the base vector extended by a random number of
/// random front-end edges, each insertion checked for feasibility.
CircuitryVector random_feasible(const HexLayout& layout, std::mt19937_64& rng);

}  // namespace hexcirc
