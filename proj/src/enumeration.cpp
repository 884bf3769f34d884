#include "hexcirc/enumeration.hpp"

#include <stdexcept>
#include <string>

namespace hexcirc {

namespace {

// Union-find with union by size and an undo log; find() skips path
// compression so unions can be reverted during backtracking.
class UndoableDisjointSet {
  public:
    explicit UndoableDisjointSet(int n) : parent_(n + 1), size_(n + 1, 1) {
        for (int i = 0; i <= n; ++i) parent_[i] = i;
    }

    int find(int a) const {
        while (parent_[a] != a) a = parent_[a];
        return a;
    }

    bool connected(int a, int b) const { return find(a) == find(b); }

    void unite(int a, int b) {
        int ra = find(a);
        int rb = find(b);
        if (size_[ra] > size_[rb]) std::swap(ra, rb);
        parent_[ra] = rb;
        size_[rb] += size_[ra];
        log_.push_back({ra, rb});
    }

    void undo() {
        const auto [child, parent] = log_.back();
        log_.pop_back();
        size_[parent] -= size_[child];
        parent_[child] = child;
    }

  private:
    std::vector<int> parent_;
    std::vector<int> size_;
    std::vector<std::pair<int, int>> log_;
};

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_add_overflow(a, b, &out)) {
        throw std::overflow_error("count_oracle: 64-bit overflow in addition");
    }
    return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
    std::uint64_t out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw std::overflow_error("count_oracle: 64-bit overflow in multiplication");
    }
    return out;
}

struct SearchState {
    const HexLayout& layout;
    const std::function<bool(const CircuitryVector&)>& on_solution;
    const std::vector<std::pair<TubeId, TubeId>>& candidates;
    CircuitryVector current;
    std::vector<int> degree;
    UndoableDisjointSet components;
    EnumerationCounts counts;
    int circuit_count;
    bool stopped = false;
};

// Emits the current vector, then extends it with every candidate front-end
// edge at position >= from. Emitting before extending lists solutions in
// ascending lexicographic order of their added-edge index sets.
void extend(SearchState& state, std::size_t from) {
    state.counts.solutions += 1;
    state.counts.combinations =
        checked_add(state.counts.combinations, std::uint64_t{1} << state.circuit_count);
    if (state.on_solution && !state.on_solution(state.current)) {
        state.stopped = true;
        return;
    }
    for (std::size_t idx = from; idx < state.candidates.size(); ++idx) {
        const auto [i, j] = state.candidates[idx];
        if (state.degree[static_cast<std::size_t>(i)] >= 2 ||
            state.degree[static_cast<std::size_t>(j)] >= 2) {
            continue;
        }
        if (state.components.connected(i, j)) continue;
        state.components.unite(i, j);
        ++state.degree[static_cast<std::size_t>(i)];
        ++state.degree[static_cast<std::size_t>(j)];
        state.current.set_bit(pair_index(i, j, state.layout), true);
        --state.circuit_count;  // joining two paths removes one circuit

        extend(state, idx + 1);

        ++state.circuit_count;
        state.current.set_bit(pair_index(i, j, state.layout), false);
        --state.degree[static_cast<std::size_t>(i)];
        --state.degree[static_cast<std::size_t>(j)];
        state.components.undo();
        if (state.stopped) return;
    }
}

}  // namespace

EnumerationCounts enumerate_feasible(
    const HexLayout& layout, const std::function<bool(const CircuitryVector&)>& on_solution) {
    const int t = layout.tube_count();
    const std::vector<Edge> far = far_end_edges(layout);

    std::vector<int> degree(static_cast<std::size_t>(t) + 1, 0);
    UndoableDisjointSet components(t);
    CircuitryVector start = base_vector(layout);
    for (const Edge& e : far) {
        components.unite(e.i, e.j);
        ++degree[static_cast<std::size_t>(e.i)];
        ++degree[static_cast<std::size_t>(e.j)];
    }

    // Front-end candidates: every pair that is not a fixed far-end pair,
    // in ascending vector-index order.
    std::vector<std::pair<TubeId, TubeId>> candidates;
    candidates.reserve(static_cast<std::size_t>(layout.vector_length()) - far.size());
    for (VectorIndex k = 1; k <= layout.vector_length(); ++k) {
        if (!start.bit(k)) candidates.push_back(inverse_index(k, layout));
    }

    SearchState state{layout,          on_solution,
                      candidates,      std::move(start),
                      std::move(degree), std::move(components),
                      EnumerationCounts{}, t / 2};
    extend(state, 0);
    return state.counts;
}

std::vector<CircuitryVector> all_feasible(const HexLayout& layout) {
    std::vector<CircuitryVector> out;
    enumerate_feasible(layout, [&out](const CircuitryVector& x) {
        out.push_back(x);
        return true;
    });
    return out;
}

EnumerationCounts count_feasible(const HexLayout& layout) {
    return enumerate_feasible(layout, nullptr);
}

EnumerationCounts count_oracle(int pair_count) {
    if (pair_count < 1) {
        throw std::invalid_argument("count_oracle: pair_count must be >= 1, got " +
                                    std::to_string(pair_count));
    }
    const std::size_t m = static_cast<std::size_t>(pair_count);

    // Binomials C(m-1, k-1) via Pascal's triangle.
    std::vector<std::vector<std::uint64_t>> binomial(m);
    for (std::size_t row = 0; row < m; ++row) {
        binomial[row].assign(row + 1, 1);
        for (std::size_t col = 1; col < row; ++col) {
            binomial[row][col] = checked_add(binomial[row - 1][col - 1], binomial[row - 1][col]);
        }
    }

    // p(k) = k! * 2^(k-1): ways to join k labeled pairs into one circuit.
    std::vector<std::uint64_t> joins(m + 1, 0);
    std::uint64_t factorial = 1;
    std::uint64_t doublings = 1;
    for (std::size_t k = 1; k <= m; ++k) {
        factorial = checked_mul(factorial, k);
        if (k > 1) doublings = checked_mul(doublings, 2);
        joins[k] = checked_mul(factorial, doublings);
    }

    std::vector<std::uint64_t> solutions(m + 1, 0);
    std::vector<std::uint64_t> combinations(m + 1, 0);
    solutions[0] = 1;
    combinations[0] = 1;
    for (std::size_t i = 1; i <= m; ++i) {
        for (std::size_t k = 1; k <= i; ++k) {
            const std::uint64_t choose = binomial[i - 1][k - 1];
            solutions[i] = checked_add(
                solutions[i], checked_mul(checked_mul(choose, joins[k]), solutions[i - k]));
            combinations[i] =
                checked_add(combinations[i], checked_mul(checked_mul(choose, checked_mul(2, joins[k])),
                                                         combinations[i - k]));
        }
    }
    return EnumerationCounts{solutions[m], combinations[m]};
}

}  // namespace hexcirc
