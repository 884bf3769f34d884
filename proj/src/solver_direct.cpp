#include <algorithm>
#include <cmath>
#include <map>

#include "solver_common.hpp"

namespace hexcirc {

namespace {

// One hyperrectangle of the unit cube over the free coordinates. `levels`
// counts trisections per dimension (side length 3^-level). Feasible boxes
// carry the evaluated objective; infeasible ones a violation score.
struct Box {
    std::vector<std::uint8_t> levels;
    std::vector<double> center;
    bool feasible = false;
    double value = 0.0;
    int score = 0;
};

class DirectSearch {
  public:
    DirectSearch(const Problem& problem, const Budget& budget, const DirectConfig& config)
        : problem_(problem),
          budget_(budget),
          config_(config),
          tracker_("direct", problem, budget),
          base_(base_vector(problem.layout)) {
        // 3^-level and 9^-level ladders; derived once so that equal level
        // histograms produce bit-identical diameter keys.
        pow3_.resize(static_cast<std::size_t>(config.max_level) + 2, 1.0);
        pow9_.resize(static_cast<std::size_t>(config.max_level) + 2, 1.0);
        for (std::size_t l = 1; l < pow3_.size(); ++l) {
            pow3_[l] = pow3_[l - 1] / 3.0;
            pow9_[l] = pow9_[l - 1] / 9.0;
        }
    }

    SolverReport run() {
        const std::size_t d = problem_.free_indices.size();
        Box root;
        root.levels.assign(d, 0);
        root.center.assign(d, 0.5);
        try {
            evaluate_box(root);
            boxes_.push_back(std::move(root));
            int divisions = 0;
            int stale_rounds = 0;
            while (divisions < config_.max_divisions && tracker_.budget_left()) {
                const int calls_before = problem_.evaluator->simulator_calls();
                const std::vector<std::size_t> selected = potentially_optimal();
                bool divided = false;
                for (std::size_t box_id : selected) {
                    if (divisions >= config_.max_divisions || !tracker_.budget_left()) break;
                    if (divide(box_id)) {
                        ++divisions;
                        divided = true;
                    }
                }
                if (!divided) break;  // every selected box is at the depth cap
                if (problem_.evaluator->simulator_calls() == calls_before) {
                    if (++stale_rounds >= config_.stale_round_limit) break;
                } else {
                    stale_rounds = 0;
                }
            }
        } catch (const BudgetExhausted&) {
            // Budget ran out mid-evaluation; the incumbent so far stands.
        }
        return tracker_.finalize();
    }

  private:
    // Rounds a center to its binary vector (far bits fixed to one).
    CircuitryVector round_center(const std::vector<double>& center) const {
        CircuitryVector x = base_;
        for (std::size_t i = 0; i < center.size(); ++i) {
            if (center[i] >= 0.5) x.set_bit(problem_.free_indices[i], true);
        }
        return x;
    }

    // Counts front-end edges rejected by a greedy feasibility replay: the
    // fixed far-end edges seed the graph, then front-end edges are tried in
    // ascending index order. Zero rejects is equivalent to feasibility.
    int violation_score(const CircuitryVector& x) const {
        std::vector<int> degree(static_cast<std::size_t>(problem_.layout.tube_count()) + 1, 0);
        std::vector<int> parent(degree.size());
        for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
        auto find = [&parent](int a) {
            while (parent[static_cast<std::size_t>(a)] != a) a = parent[static_cast<std::size_t>(a)];
            return a;
        };
        auto try_add = [&](TubeId i, TubeId j) {
            const int ri = find(i);
            const int rj = find(j);
            if (degree[static_cast<std::size_t>(i)] >= 2 ||
                degree[static_cast<std::size_t>(j)] >= 2 || ri == rj) {
                return false;
            }
            ++degree[static_cast<std::size_t>(i)];
            ++degree[static_cast<std::size_t>(j)];
            parent[static_cast<std::size_t>(ri)] = rj;
            return true;
        };
        for (const Edge& e : far_end_edges(problem_.layout)) {
            try_add(e.i, e.j);  // far-end edges are mutually compatible
        }
        int rejected = 0;
        for (VectorIndex k = 1; k <= x.size(); ++k) {
            if (!x.bit(k) || base_.bit(k)) continue;
            const auto [i, j] = inverse_index(k, problem_.layout);
            if (!try_add(i, j)) ++rejected;
        }
        return rejected;
    }

    void evaluate_box(Box& box) {
        const CircuitryVector x = round_center(box.center);
        const int score = violation_score(x);
        if (score > 0) {
            box.feasible = false;
            box.score = score;
            return;
        }
        const Evaluation e = problem_.evaluator->evaluate(x);
        box.feasible = true;
        box.value = e.value;
        tracker_.observe(x, e);
        if (!have_feasible_ || e.value < worst_feasible_) worst_feasible_ = e.value;
        if (!have_feasible_ || e.value > best_feasible_) best_feasible_ = e.value;
        have_feasible_ = true;
    }

    double diameter_key(const std::vector<std::uint8_t>& levels) const {
        // Histogram-ordered summation keeps the key bit-identical for any
        // permutation of the same level multiset.
        std::vector<int> histogram(static_cast<std::size_t>(config_.max_level) + 2, 0);
        for (std::uint8_t l : levels) ++histogram[l];
        double key = 0.0;
        for (std::size_t l = 0; l < histogram.size(); ++l) {
            if (histogram[l] > 0) key += histogram[l] * pow9_[l];
        }
        return key;
    }

    // Numeric selection value: feasible boxes keep their objective value;
    // infeasible boxes sit below the worst feasible one, ordered by their
    // violation score. The mapping is monotone in (feasible, value, -score),
    // so relative order is stable while the reference values drift.
    double selection_value(const Box& box) const {
        if (box.feasible) return box.value;
        const double reference = have_feasible_ ? worst_feasible_ : 0.0;
        const double range = have_feasible_ ? best_feasible_ - worst_feasible_ : 0.0;
        const double offset = config_.infeasible_offset_fraction * std::max(range, 1.0);
        return reference - offset * (1.0 + box.score);
    }

    // Better-first comparison for picking a group representative.
    bool better(const Box& a, const Box& b) const {
        if (a.feasible != b.feasible) return a.feasible;
        if (a.feasible) return a.value > b.value;
        return a.score < b.score;
    }

    std::vector<std::size_t> potentially_optimal() const {
        // Representative (best) box per diameter group.
        std::map<double, std::size_t> group_best;
        for (std::size_t id = 0; id < boxes_.size(); ++id) {
            const double key = diameter_key(boxes_[id].levels);
            const auto slot = group_best.find(key);
            if (slot == group_best.end()) {
                group_best.emplace(key, id);
            } else if (better(boxes_[id], boxes_[slot->second])) {
                slot->second = id;
            }
        }
        struct Point {
            double diameter;
            double negated_value;
            std::size_t box_id;
        };
        std::vector<Point> points;
        points.reserve(group_best.size());
        for (const auto& [key, id] : group_best) {
            points.push_back(Point{std::sqrt(key), -selection_value(boxes_[id]), id});
        }
        // Lower-right convex hull over (diameter, -value), collinear points
        // retained; the potentially-optimal set is the hull run from the
        // minimal -value vertex to the largest diameter.
        std::vector<std::size_t> hull;  // indices into points
        for (std::size_t i = 0; i < points.size(); ++i) {
            while (hull.size() >= 2) {
                const Point& a = points[hull[hull.size() - 2]];
                const Point& b = points[hull[hull.size() - 1]];
                const Point& c = points[i];
                const double cross = (b.diameter - a.diameter) * (c.negated_value - a.negated_value) -
                                     (b.negated_value - a.negated_value) * (c.diameter - a.diameter);
                if (cross < 0.0) {
                    hull.pop_back();
                } else {
                    break;
                }
            }
            hull.push_back(i);
        }
        std::size_t start = 0;
        for (std::size_t i = 1; i < hull.size(); ++i) {
            if (points[hull[i]].negated_value < points[hull[start]].negated_value) start = i;
        }
        std::vector<std::size_t> selected;
        for (std::size_t i = start; i < hull.size(); ++i) {
            selected.push_back(points[hull[i]].box_id);
        }
        return selected;
    }

    // Trisects the box along its lowest-index longest side. Returns false
    // when the box is already at the depth cap.
    bool divide(std::size_t box_id) {
        std::size_t dim = 0;
        std::uint8_t min_level = 255;
        for (std::size_t i = 0; i < boxes_[box_id].levels.size(); ++i) {
            if (boxes_[box_id].levels[i] < min_level) {
                min_level = boxes_[box_id].levels[i];
                dim = i;
            }
        }
        if (min_level >= config_.max_level) return false;
        const double offset = pow3_[static_cast<std::size_t>(min_level) + 1];

        Box low;
        low.levels = boxes_[box_id].levels;
        low.levels[dim] = static_cast<std::uint8_t>(min_level + 1);
        low.center = boxes_[box_id].center;
        low.center[dim] -= offset;
        Box high = low;
        high.center[dim] = boxes_[box_id].center[dim] + offset;

        boxes_[box_id].levels[dim] = static_cast<std::uint8_t>(min_level + 1);

        evaluate_box(low);
        boxes_.push_back(std::move(low));
        evaluate_box(high);
        boxes_.push_back(std::move(high));
        return true;
    }

    const Problem& problem_;
    Budget budget_;
    DirectConfig config_;
    detail::RunTracker tracker_;
    CircuitryVector base_;
    std::vector<Box> boxes_;
    std::vector<double> pow3_;
    std::vector<double> pow9_;
    bool have_feasible_ = false;
    double worst_feasible_ = 0.0;
    double best_feasible_ = 0.0;
};

}  // namespace

SolverReport solve_direct(const Problem& problem, const Budget& budget,
                          const DirectConfig& config) {
    detail::check_problem(problem);
    DirectSearch search(problem, budget, config);
    return search.run();
}

}  // namespace hexcirc
