#pragma once

/// @file circuitry.hpp
/// @brief Binary encoding of fin-tube refrigerant circuitry designs:
/// tube layout, decision vector, feasibility rules, and path decoding.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hexcirc {

/// Tubes are numbered 1..t: top to bottom within each depth row, row 1
/// (upstream in the air direction) first.
using TubeId = int;

/// 1-based index into the decision vector (upper-triangle, row-major).
using VectorIndex = int;

/// Two-row fin-tube coil layout. Only rows == 2 is supported; the far-end
/// pairing rule is defined for that family only.
class HexLayout {
  public:
    explicit HexLayout(int tubes_per_row);

    int rows() const { return 2; }
    int tubes_per_row() const { return tubes_per_row_; }
    /// Total tube count t = 2 * tubes_per_row.
    int tube_count() const { return 2 * tubes_per_row_; }
    /// Decision-vector length n = (t^2 - t) / 2.
    int vector_length() const { return (tube_count() * (tube_count() - 1)) / 2; }

    /// Row of a tube: 1 (upstream) or 2 (downstream).
    int row_of(TubeId tube) const;
    /// Position of a tube within its row, 1..tubes_per_row, top to bottom.
    int position_of(TubeId tube) const;
    TubeId tube_at(int row, int position) const;

    bool operator==(const HexLayout& other) const { return tubes_per_row_ == other.tubes_per_row_; }

  private:
    int tubes_per_row_;
};

/// Maps the tube pair (i, j), i < j, to its 1-based decision-vector index
/// (upper-triangle cells in row-major order). Throws std::invalid_argument
/// on i >= j or out-of-range ids.
VectorIndex pair_index(TubeId i, TubeId j, const HexLayout& layout);

/// Inverse of pair_index. Throws std::invalid_argument for k outside 1..n.
std::pair<TubeId, TubeId> inverse_index(VectorIndex k, const HexLayout& layout);

enum class EndType : std::uint8_t { FarEnd, FrontEnd };

/// A connection between two tubes. Far-end edges are fixed by manufacturing;
/// front-end edges are the free decision variables.
struct Edge {
    TubeId i;
    TubeId j;
    EndType end;

    bool operator==(const Edge& other) const {
        return i == other.i && j == other.j && end == other.end;
    }
};

/// The fixed far-end connections for a layout, sorted by (i, j).
///
/// When t is a multiple of four, tubes pair within each row: (1,2),(3,4),...
/// Otherwise the first tube of each row pair across rows and the remaining
/// tubes pair within each row.
std::vector<Edge> far_end_edges(const HexLayout& layout);

/// Binary decision vector over tube pairs. Bit k (1-based) is 1 iff the pair
/// inverse_index(k) is connected.
class CircuitryVector {
  public:
    explicit CircuitryVector(HexLayout layout);
    CircuitryVector(HexLayout layout, std::vector<std::uint8_t> bits);

    const HexLayout& layout() const { return layout_; }
    int size() const { return static_cast<int>(bits_.size()); }

    bool bit(VectorIndex k) const;
    void set_bit(VectorIndex k, bool value);

    bool connected(TubeId i, TubeId j) const;

    int popcount() const;

    /// Compact text form: "t=<int>;bits=<0/1 string of length n>".
    std::string serialize() const;
    static CircuitryVector parse(const std::string& text);

    bool operator==(const CircuitryVector& other) const;
    bool operator<(const CircuitryVector& other) const;

  private:
    HexLayout layout_;
    std::vector<std::uint8_t> bits_;
};

/// Vector with exactly the far-end bits set: the starting point every
/// feasible design extends.
CircuitryVector base_vector(const HexLayout& layout);

enum class Violation : std::uint8_t {
    None,
    MissingFarEndBit,  ///< a fixed far-end connection bit is 0
    DegreeExceeded,    ///< some tube has more than two connections
    Cycle,             ///< connections close a loop
};

/// Outcome of feasibility validation. When infeasible, `violation` and
/// `detail_tube` identify the first violated rule in the fixed order
/// (far-end bits, degree, cycle).
struct FeasibilityReport {
    bool feasible = false;
    Violation violation = Violation::None;
    TubeId detail_tube = 0;
    std::string message;
};

/// Checks the manufacturing rules: far-end bits present, every tube degree
/// <= 2, and no cycles. Feasible iff the connection graph is a disjoint
/// union of simple paths covering all tubes. Throws std::invalid_argument
/// if the vector length does not match the layout.
FeasibilityReport validate(const CircuitryVector& x);

/// One refrigerant flow path. Directed circuits run inlet -> outlet.
struct Circuit {
    std::vector<TubeId> tubes;
};

/// A decoded circuitry design: vertex-disjoint paths covering all tubes.
struct CircuitryDesign {
    HexLayout layout;
    std::vector<Circuit> circuits;
    bool directed = false;

    int circuit_count() const { return static_cast<int>(circuits.size()); }

    /// One circuit per line: "a->b->c" when directed, "a-b-c" otherwise.
    std::string serialize() const;
    /// Single-line form with ';' between circuits (used as a cache key).
    std::string serialize_compact() const;
};

/// Error thrown when an infeasible vector reaches an operation that
/// requires a feasible one; carries the validation report.
class InfeasibleVectorError : public std::invalid_argument {
  public:
    explicit InfeasibleVectorError(FeasibilityReport report);
    const FeasibilityReport& report() const { return report_; }

  private:
    FeasibilityReport report_;
};

/// Decodes a feasible vector into its undirected circuits. Circuits are
/// sorted by their lowest tube id and reported starting from their
/// lowest-numbered endpoint. Throws InfeasibleVectorError otherwise.
CircuitryDesign decode(const CircuitryVector& x);

/// Re-encodes a design into its decision vector (inverse of decode).
CircuitryVector encode(const CircuitryDesign& design);

/// All 2^c directed variants of an undirected design, each circuit traversed
/// in either direction. Order: direction tuples in lexicographic order with
/// circuit 0 most significant; bit 0 keeps the decode orientation.
std::vector<CircuitryDesign> orient(const CircuitryDesign& design);

/// The single directed variant solvers evaluate: every circuit kept in
/// decode orientation (the first element of orient()).
CircuitryDesign first_orientation(const CircuitryDesign& design);

}  // namespace hexcirc
