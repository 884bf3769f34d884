#pragma once

/// @file enumeration.hpp
/// @brief Exhaustive generation of feasible circuitry vectors and the
/// closed-form counting recurrence used to cross-check it.

#include <cstdint>
#include <functional>
#include <vector>

#include "hexcirc/circuitry.hpp"

namespace hexcirc {

/// Exact counts for one layout: feasible solutions and feasible
/// (solution, direction-assignment) combinations.
struct EnumerationCounts {
    std::uint64_t solutions = 0;
    std::uint64_t combinations = 0;
};

/// Enumerates every feasible vector for the layout in deterministic order
/// (depth-first over front-end pair indices, ascending; the base vector with
/// no front-end edges comes first). The callback may return false to stop
/// early. Returns the counts; `combinations` adds 2^circuits per solution.
EnumerationCounts enumerate_feasible(const HexLayout& layout,
                                     const std::function<bool(const CircuitryVector&)>& on_solution);

/// Convenience wrapper collecting all feasible vectors.
std::vector<CircuitryVector> all_feasible(const HexLayout& layout);

/// Counts without materializing vectors.
EnumerationCounts count_feasible(const HexLayout& layout);

/// Closed-form counts from the independent pairing recurrence:
///   p(1) = 1, p(k) = k! * 2^(k-1) for k >= 2
///   a(m) = sum_{k=1..m} C(m-1, k-1) * p(k) * a(m-k), a(0) = 1
/// where m = t/2 is the number of far-end pairs; `solutions` = a(m) and
/// `combinations` doubles each term's contribution once per circuit.
/// Throws std::overflow_error when a term exceeds 64 bits.
EnumerationCounts count_oracle(int pair_count);

}  // namespace hexcirc
