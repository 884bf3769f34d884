#include "hexcirc/circuitry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace hexcirc {

namespace {

// Union-find over tube ids 1..t, used for cycle detection during validation.
class DisjointSet {
  public:
    explicit DisjointSet(int n) : parent_(n + 1) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }

    int find(int a) {
        while (parent_[a] != a) {
            parent_[a] = parent_[parent_[a]];
            a = parent_[a];
        }
        return a;
    }

    // Returns false when a and b are already connected (a cycle would close).
    bool unite(int a, int b) {
        int ra = find(a);
        int rb = find(b);
        if (ra == rb) return false;
        parent_[ra] = rb;
        return true;
    }

  private:
    std::vector<int> parent_;
};

}  // namespace

HexLayout::HexLayout(int tubes_per_row) : tubes_per_row_(tubes_per_row) {
    if (tubes_per_row < 1) {
        throw std::invalid_argument("HexLayout: tubes_per_row must be >= 1, got " +
                                    std::to_string(tubes_per_row));
    }
}

int HexLayout::row_of(TubeId tube) const {
    if (tube < 1 || tube > tube_count()) {
        throw std::invalid_argument("HexLayout: tube id " + std::to_string(tube) +
                                    " outside 1.." + std::to_string(tube_count()));
    }
    return tube <= tubes_per_row_ ? 1 : 2;
}

int HexLayout::position_of(TubeId tube) const {
    return row_of(tube) == 1 ? tube : tube - tubes_per_row_;
}

TubeId HexLayout::tube_at(int row, int position) const {
    if (row < 1 || row > 2 || position < 1 || position > tubes_per_row_) {
        throw std::invalid_argument("HexLayout: no tube at row " + std::to_string(row) +
                                    ", position " + std::to_string(position));
    }
    return (row - 1) * tubes_per_row_ + position;
}

VectorIndex pair_index(TubeId i, TubeId j, const HexLayout& layout) {
    const int t = layout.tube_count();
    if (i < 1 || j < 1 || i > t || j > t) {
        throw std::invalid_argument("pair_index: tube ids (" + std::to_string(i) + ", " +
                                    std::to_string(j) + ") outside 1.." + std::to_string(t));
    }
    if (i >= j) {
        throw std::invalid_argument("pair_index: requires i < j, got (" + std::to_string(i) +
                                    ", " + std::to_string(j) + ")");
    }
    return (i - 1) * t - (i * (i - 1)) / 2 + (j - i);
}

std::pair<TubeId, TubeId> inverse_index(VectorIndex k, const HexLayout& layout) {
    const int n = layout.vector_length();
    if (k < 1 || k > n) {
        throw std::invalid_argument("inverse_index: index " + std::to_string(k) +
                                    " outside 1.." + std::to_string(n));
    }
    const int t = layout.tube_count();
    // Row i owns indices (i-1)*t - i*(i-1)/2 + 1 .. i*t - i*(i+1)/2.
    int i = 1;
    while (i * t - (i * (i + 1)) / 2 < k) ++i;
    const int row_start = (i - 1) * t - (i * (i - 1)) / 2;
    return {i, i + (k - row_start)};
}

std::vector<Edge> far_end_edges(const HexLayout& layout) {
    const int tpr = layout.tubes_per_row();
    std::vector<Edge> edges;
    edges.reserve(layout.tube_count() / 2);
    const bool multiple_of_four = layout.tube_count() % 4 == 0;
    for (int row = 1; row <= 2; ++row) {
        int first_position = 1;
        if (!multiple_of_four) {
            // Odd tubes per row: the top tubes of the two rows pair with each
            // other, the rest pair within their row.
            if (row == 1) edges.push_back({layout.tube_at(1, 1), layout.tube_at(2, 1), EndType::FarEnd});
            first_position = 2;
        }
        for (int pos = first_position; pos + 1 <= tpr; pos += 2) {
            edges.push_back({layout.tube_at(row, pos), layout.tube_at(row, pos + 1), EndType::FarEnd});
        }
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::tie(a.i, a.j) < std::tie(b.i, b.j); });
    return edges;
}

CircuitryVector::CircuitryVector(HexLayout layout)
    : layout_(layout), bits_(static_cast<std::size_t>(layout.vector_length()), 0) {}

CircuitryVector::CircuitryVector(HexLayout layout, std::vector<std::uint8_t> bits)
    : layout_(layout), bits_(std::move(bits)) {
    if (static_cast<int>(bits_.size()) != layout_.vector_length()) {
        throw std::invalid_argument("CircuitryVector: expected " +
                                    std::to_string(layout_.vector_length()) + " bits, got " +
                                    std::to_string(bits_.size()));
    }
    for (std::uint8_t b : bits_) {
        if (b > 1) throw std::invalid_argument("CircuitryVector: bits must be 0 or 1");
    }
}

bool CircuitryVector::bit(VectorIndex k) const {
    if (k < 1 || k > size()) {
        throw std::invalid_argument("CircuitryVector: bit index " + std::to_string(k) +
                                    " outside 1.." + std::to_string(size()));
    }
    return bits_[static_cast<std::size_t>(k - 1)] != 0;
}

void CircuitryVector::set_bit(VectorIndex k, bool value) {
    if (k < 1 || k > size()) {
        throw std::invalid_argument("CircuitryVector: bit index " + std::to_string(k) +
                                    " outside 1.." + std::to_string(size()));
    }
    bits_[static_cast<std::size_t>(k - 1)] = value ? 1 : 0;
}

bool CircuitryVector::connected(TubeId i, TubeId j) const {
    if (i == j) return false;
    if (i > j) std::swap(i, j);
    return bit(pair_index(i, j, layout_));
}

int CircuitryVector::popcount() const {
    return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::string CircuitryVector::serialize() const {
    std::string out = "t=" + std::to_string(layout_.tube_count()) + ";bits=";
    out.reserve(out.size() + bits_.size());
    for (std::uint8_t b : bits_) out.push_back(b ? '1' : '0');
    return out;
}

CircuitryVector CircuitryVector::parse(const std::string& text) {
    const std::string t_prefix = "t=";
    const std::string bits_marker = ";bits=";
    const auto marker_pos = text.find(bits_marker);
    if (text.rfind(t_prefix, 0) != 0 || marker_pos == std::string::npos) {
        throw std::invalid_argument("CircuitryVector::parse: expected 't=<n>;bits=<01...>', got '" +
                                    text + "'");
    }
    int t = 0;
    try {
        t = std::stoi(text.substr(t_prefix.size(), marker_pos - t_prefix.size()));
    } catch (const std::exception&) {
        throw std::invalid_argument("CircuitryVector::parse: bad tube count in '" + text + "'");
    }
    if (t < 2 || t % 2 != 0) {
        throw std::invalid_argument("CircuitryVector::parse: tube count must be even and >= 2");
    }
    const std::string bit_text = text.substr(marker_pos + bits_marker.size());
    std::vector<std::uint8_t> bits;
    bits.reserve(bit_text.size());
    for (char c : bit_text) {
        if (c != '0' && c != '1') {
            throw std::invalid_argument("CircuitryVector::parse: bits must be 0/1");
        }
        bits.push_back(c == '1' ? 1 : 0);
    }
    return CircuitryVector(HexLayout(t / 2), std::move(bits));
}

bool CircuitryVector::operator==(const CircuitryVector& other) const {
    return layout_ == other.layout_ && bits_ == other.bits_;
}

bool CircuitryVector::operator<(const CircuitryVector& other) const {
    if (!(layout_ == other.layout_)) {
        return layout_.tube_count() < other.layout_.tube_count();
    }
    return bits_ < other.bits_;
}

CircuitryVector base_vector(const HexLayout& layout) {
    CircuitryVector x(layout);
    for (const Edge& e : far_end_edges(layout)) {
        x.set_bit(pair_index(e.i, e.j, layout), true);
    }
    return x;
}

FeasibilityReport validate(const CircuitryVector& x) {
    const HexLayout& layout = x.layout();
    const int t = layout.tube_count();

    for (const Edge& e : far_end_edges(layout)) {
        if (!x.bit(pair_index(e.i, e.j, layout))) {
            FeasibilityReport r;
            r.violation = Violation::MissingFarEndBit;
            r.detail_tube = e.i;
            r.message = "far-end connection (" + std::to_string(e.i) + ", " +
                        std::to_string(e.j) + ") is not set";
            return r;
        }
    }

    std::vector<int> degree(static_cast<std::size_t>(t) + 1, 0);
    DisjointSet components(t);
    for (VectorIndex k = 1; k <= x.size(); ++k) {
        if (!x.bit(k)) continue;
        const auto [i, j] = inverse_index(k, layout);
        ++degree[static_cast<std::size_t>(i)];
        ++degree[static_cast<std::size_t>(j)];
        if (degree[static_cast<std::size_t>(i)] > 2 || degree[static_cast<std::size_t>(j)] > 2) {
            FeasibilityReport r;
            r.violation = Violation::DegreeExceeded;
            r.detail_tube = degree[static_cast<std::size_t>(i)] > 2 ? i : j;
            r.message = "tube " + std::to_string(r.detail_tube) + " has more than two connections";
            return r;
        }
        if (!components.unite(i, j)) {
            FeasibilityReport r;
            r.violation = Violation::Cycle;
            r.detail_tube = i;
            r.message = "connection (" + std::to_string(i) + ", " + std::to_string(j) +
                        ") closes a loop";
            return r;
        }
    }

    FeasibilityReport r;
    r.feasible = true;
    r.message = "feasible";
    return r;
}

InfeasibleVectorError::InfeasibleVectorError(FeasibilityReport report)
    : std::invalid_argument("infeasible circuitry vector: " + report.message),
      report_(std::move(report)) {}

CircuitryDesign decode(const CircuitryVector& x) {
    FeasibilityReport report = validate(x);
    if (!report.feasible) throw InfeasibleVectorError(std::move(report));

    const HexLayout& layout = x.layout();
    const int t = layout.tube_count();
    std::vector<std::vector<TubeId>> adjacency(static_cast<std::size_t>(t) + 1);
    for (VectorIndex k = 1; k <= x.size(); ++k) {
        if (!x.bit(k)) continue;
        const auto [i, j] = inverse_index(k, layout);
        adjacency[static_cast<std::size_t>(i)].push_back(j);
        adjacency[static_cast<std::size_t>(j)].push_back(i);
    }

    CircuitryDesign design{layout, {}, false};
    std::vector<bool> visited(static_cast<std::size_t>(t) + 1, false);
    // Walk each path from its lowest-numbered endpoint; scanning tube ids in
    // ascending order also sorts circuits by their lowest tube id.
    for (TubeId start = 1; start <= t; ++start) {
        if (visited[static_cast<std::size_t>(start)]) continue;
        if (adjacency[static_cast<std::size_t>(start)].size() == 2) continue;  // interior tube
        Circuit circuit;
        TubeId previous = 0;
        TubeId current = start;
        while (true) {
            visited[static_cast<std::size_t>(current)] = true;
            circuit.tubes.push_back(current);
            TubeId next = 0;
            for (TubeId neighbor : adjacency[static_cast<std::size_t>(current)]) {
                if (neighbor != previous) {
                    next = neighbor;
                    break;
                }
            }
            if (next == 0) break;
            previous = current;
            current = next;
        }
        if (circuit.tubes.size() > 1 && circuit.tubes.back() < circuit.tubes.front()) {
            std::reverse(circuit.tubes.begin(), circuit.tubes.end());
        }
        design.circuits.push_back(std::move(circuit));
    }
    return design;
}

CircuitryVector encode(const CircuitryDesign& design) {
    CircuitryVector x(design.layout);
    std::vector<bool> seen(static_cast<std::size_t>(design.layout.tube_count()) + 1, false);
    for (const Circuit& circuit : design.circuits) {
        for (TubeId tube : circuit.tubes) {
            if (tube < 1 || tube > design.layout.tube_count() ||
                seen[static_cast<std::size_t>(tube)]) {
                throw std::invalid_argument("encode: circuits must cover each tube exactly once");
            }
            seen[static_cast<std::size_t>(tube)] = true;
        }
        for (std::size_t p = 0; p + 1 < circuit.tubes.size(); ++p) {
            TubeId i = circuit.tubes[p];
            TubeId j = circuit.tubes[p + 1];
            if (i > j) std::swap(i, j);
            x.set_bit(pair_index(i, j, design.layout), true);
        }
    }
    for (TubeId tube = 1; tube <= design.layout.tube_count(); ++tube) {
        if (!seen[static_cast<std::size_t>(tube)]) {
            throw std::invalid_argument("encode: tube " + std::to_string(tube) +
                                        " is not covered by any circuit");
        }
    }
    return x;
}

std::vector<CircuitryDesign> orient(const CircuitryDesign& design) {
    const int c = design.circuit_count();
    if (c > 20) {
        throw std::invalid_argument("orient: too many circuits (" + std::to_string(c) +
                                    ") to enumerate directions");
    }
    std::vector<CircuitryDesign> variants;
    variants.reserve(static_cast<std::size_t>(1) << c);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << c); ++mask) {
        CircuitryDesign directed = design;
        directed.directed = true;
        for (int idx = 0; idx < c; ++idx) {
            // Circuit 0 owns the most significant direction bit.
            const bool reversed = (mask >> (c - 1 - idx)) & 1u;
            if (reversed) {
                std::reverse(directed.circuits[static_cast<std::size_t>(idx)].tubes.begin(),
                             directed.circuits[static_cast<std::size_t>(idx)].tubes.end());
            }
        }
        variants.push_back(std::move(directed));
    }
    return variants;
}

CircuitryDesign first_orientation(const CircuitryDesign& design) {
    CircuitryDesign directed = design;
    directed.directed = true;
    return directed;
}

std::string CircuitryDesign::serialize() const {
    std::ostringstream out;
    const char* arrow = directed ? "->" : "-";
    for (std::size_t c = 0; c < circuits.size(); ++c) {
        if (c > 0) out << '\n';
        for (std::size_t p = 0; p < circuits[c].tubes.size(); ++p) {
            if (p > 0) out << arrow;
            out << circuits[c].tubes[p];
        }
    }
    return out.str();
}

std::string CircuitryDesign::serialize_compact() const {
    std::string text = serialize();
    std::replace(text.begin(), text.end(), '\n', ';');
    return text;
}

}  // namespace hexcirc
