#include <algorithm>
#include <numeric>

#include "solver_common.hpp"

namespace hexcirc {

namespace {

// Degree and component state of a vector, for O(1) edge-insertion checks.
struct GraphState {
    std::vector<int> degree;
    std::vector<int> parent;

    explicit GraphState(const CircuitryVector& x)
        : degree(static_cast<std::size_t>(x.layout().tube_count()) + 1, 0),
          parent(static_cast<std::size_t>(x.layout().tube_count()) + 1) {
        std::iota(parent.begin(), parent.end(), 0);
        for (VectorIndex k = 1; k <= x.size(); ++k) {
            if (!x.bit(k)) continue;
            const auto [i, j] = inverse_index(k, x.layout());
            ++degree[static_cast<std::size_t>(i)];
            ++degree[static_cast<std::size_t>(j)];
            link(i, j);
        }
    }

    int find(int a) {
        while (parent[static_cast<std::size_t>(a)] != a) {
            parent[static_cast<std::size_t>(a)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(a)])];
            a = parent[static_cast<std::size_t>(a)];
        }
        return a;
    }

    void link(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }

    bool can_add(TubeId i, TubeId j) {
        return degree[static_cast<std::size_t>(i)] < 2 && degree[static_cast<std::size_t>(j)] < 2 &&
               find(i) != find(j);
    }
};

bool is_far_index(VectorIndex k, const CircuitryVector& base) { return base.bit(k); }

}  // namespace

std::vector<VectorIndex> front_edge_indices(const CircuitryVector& x) {
    const CircuitryVector base = base_vector(x.layout());
    std::vector<VectorIndex> out;
    for (VectorIndex k = 1; k <= x.size(); ++k) {
        if (x.bit(k) && !is_far_index(k, base)) out.push_back(k);
    }
    return out;
}

std::vector<VectorIndex> addable_front_indices(const CircuitryVector& x) {
    const CircuitryVector base = base_vector(x.layout());
    GraphState state(x);
    std::vector<VectorIndex> out;
    for (VectorIndex k = 1; k <= x.size(); ++k) {
        if (x.bit(k) || is_far_index(k, base)) continue;
        const auto [i, j] = inverse_index(k, x.layout());
        if (state.can_add(i, j)) out.push_back(k);
    }
    return out;
}

CircuitryVector random_feasible(const HexLayout& layout, std::mt19937_64& rng) {
    CircuitryVector x = base_vector(layout);
    const int max_front = layout.tube_count() / 2 - 1;  // single path uses t/2 - 1 front edges
    if (max_front <= 0) return x;
    std::uniform_int_distribution<int> target_dist(0, max_front);
    const int target = target_dist(rng);
    for (int added = 0; added < target; ++added) {
        const std::vector<VectorIndex> addable = addable_front_indices(x);
        if (addable.empty()) break;
        std::uniform_int_distribution<std::size_t> pick(0, addable.size() - 1);
        x.set_bit(addable[pick(rng)], true);
    }
    return x;
}

Problem make_problem(Evaluator& evaluator) {
    Problem problem;
    problem.evaluator = &evaluator;
    problem.layout = evaluator.instance().layout;
    const CircuitryVector base = base_vector(problem.layout);
    for (VectorIndex k = 1; k <= base.size(); ++k) {
        if (!base.bit(k)) problem.free_indices.push_back(k);
    }
    return problem;
}

SolverReport solve(const std::string& solver_name, const Problem& problem, const Budget& budget) {
    if (solver_name == "direct") return solve_direct(problem, budget);
    if (solver_name == "evo") return solve_evolutionary(problem, budget);
    if (solver_name == "local") return solve_localsearch(problem, budget);
    throw std::invalid_argument("solve: unknown solver '" + solver_name +
                                "' (expected direct, evo, or local)");
}

namespace detail {

void check_problem(const Problem& problem) {
    if (problem.evaluator == nullptr) {
        throw std::invalid_argument("solver: problem has no evaluator");
    }
    const int expected =
        problem.layout.vector_length() - problem.layout.tube_count() / 2;
    if (static_cast<int>(problem.free_indices.size()) != expected) {
        throw std::invalid_argument("solver: free_indices size must be n - t/2");
    }
    if (!(problem.layout == problem.evaluator->instance().layout)) {
        throw std::invalid_argument("solver: problem layout does not match evaluator instance");
    }
}

}  // namespace detail

}  // namespace hexcirc
