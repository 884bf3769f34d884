#include <algorithm>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "hexcirc/enumeration.hpp"
#include "hexcirc/solvers.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace hexcirc;

namespace {

Evaluator make_evaluator(int tubes_per_row, ObjectiveKind objective,
                         EvaluatorOptions options = {}) {
    HexInstance instance;
    instance.layout = HexLayout(tubes_per_row);
    return Evaluator(instance, SimulatorConfig{}, objective, PenaltyConfig{},
                     RefrigerantTable::embedded_r134a(), std::move(options));
}

/// Brute-force optimum under the solver evaluation policy (first orientation).
double enumerated_optimum(int tubes_per_row, ObjectiveKind objective) {
    Evaluator evaluator = make_evaluator(tubes_per_row, objective);
    double best = -1e300;
    for (const CircuitryVector& x : all_feasible(HexLayout(tubes_per_row))) {
        best = std::max(best, evaluator.evaluate(x).value);
    }
    return best;
}

}  // namespace

TEST_CASE("problem setup exposes exactly the free coordinates") {
    Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity);
    const Problem problem = make_problem(evaluator);
    CHECK(problem.evaluator == &evaluator);
    CHECK(problem.layout == HexLayout(4));
    CHECK(problem.free_indices.size() == 28 - 4);
    CHECK(std::is_sorted(problem.free_indices.begin(), problem.free_indices.end()));

    std::set<VectorIndex> fixed;
    for (const Edge& e : far_end_edges(problem.layout)) {
        fixed.insert(pair_index(e.i, e.j, problem.layout));
    }
    for (VectorIndex k : problem.free_indices) CHECK(fixed.count(k) == 0);
}

TEST_CASE("front-edge bookkeeping matches validation exactly") {
    HexLayout layout(3);
    std::set<VectorIndex> far;
    for (const Edge& e : far_end_edges(layout)) far.insert(pair_index(e.i, e.j, layout));

    for (const CircuitryVector& x : all_feasible(layout)) {
        const auto front = front_edge_indices(x);
        CHECK(static_cast<int>(front.size() + far.size()) == x.popcount());
        for (VectorIndex k : front) {
            CHECK(x.bit(k));
            CHECK(far.count(k) == 0);
        }

        const auto addable = addable_front_indices(x);
        const std::set<VectorIndex> addable_set(addable.begin(), addable.end());
        for (VectorIndex k = 1; k <= x.size(); ++k) {
            if (x.bit(k) || far.count(k) > 0) continue;
            CircuitryVector extended = x;
            extended.set_bit(k, true);
            CHECK(validate(extended).feasible == (addable_set.count(k) > 0));
        }
    }
}

TEST_CASE("base and saturated vectors bracket the addable set") {
    const CircuitryVector base = base_vector(HexLayout(2));
    CHECK(front_edge_indices(base).empty());
    CHECK(addable_front_indices(base) == std::vector<VectorIndex>{2, 3, 4, 5});

    CircuitryVector full_path = base;
    full_path.set_bit(4, true);  // 1-2-3-4 as a single circuit
    CHECK(addable_front_indices(full_path).empty());
}

TEST_CASE("random feasible sampling is feasible and seed-deterministic") {
    HexLayout layout(5);
    std::mt19937_64 rng_a(7);
    std::mt19937_64 rng_b(7);
    std::mt19937_64 rng_c(8);
    std::set<std::string> seen;
    bool any_difference = false;
    for (int i = 0; i < 200; ++i) {
        const CircuitryVector a = random_feasible(layout, rng_a);
        const CircuitryVector b = random_feasible(layout, rng_b);
        const CircuitryVector c = random_feasible(layout, rng_c);
        REQUIRE(validate(a).feasible);
        REQUIRE(a == b);
        any_difference = any_difference || !(a == c);
        seen.insert(a.serialize());
    }
    CHECK(any_difference);
    CHECK(seen.size() > 10);  // the sampler explores, not repeats
}

TEST_CASE("every solver finds the enumerated optimum on small instances") {
    for (const ObjectiveKind objective :
         {ObjectiveKind::HeatCapacity, ObjectiveKind::RatioWithLimit}) {
        for (const int tpr : {2, 3}) {
            const double optimum = enumerated_optimum(tpr, objective);
            for (const std::string name : {"direct", "evo", "local"}) {
                EvaluatorOptions options;
                options.max_simulator_calls = 2500;
                Evaluator evaluator = make_evaluator(tpr, objective, options);
                const Budget budget{2500, 86400.0, 3};
                const SolverReport report = solve(name, make_problem(evaluator), budget);

                INFO("solver " << name << " objective " << objective_name(objective) << " t=" << 2 * tpr);
                REQUIRE(report.found_feasible);
                CHECK(report.best_value == doctest::Approx(optimum).epsilon(1e-12));
                CHECK(report.simulator_calls <= 2500);
                CHECK(report.solver == name);
                CHECK(report.seed == 3);
                REQUIRE(report.best.has_value());
                CHECK(validate(*report.best).feasible);
            }
        }
    }
}

TEST_CASE("the deterministic search needs only a handful of calls at four tubes") {
    Evaluator evaluator = make_evaluator(2, ObjectiveKind::HeatCapacity);
    const SolverReport report = solve_direct(make_problem(evaluator), Budget{2500, 86400.0, 1});
    REQUIRE(report.found_feasible);
    CHECK(report.simulator_calls <= 12);
    CHECK(report.best_value == doctest::Approx(enumerated_optimum(2, ObjectiveKind::HeatCapacity))
                                   .epsilon(1e-12));
}

TEST_CASE("identical seeds reproduce identical reports") {
    for (const std::string name : {"direct", "evo", "local"}) {
        std::vector<SolverReport> reports;
        for (int run = 0; run < 2; ++run) {
            EvaluatorOptions options;
            options.max_simulator_calls = 120;
            Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity, options);
            reports.push_back(solve(name, make_problem(evaluator), Budget{120, 86400.0, 99}));
        }
        const SolverReport& a = reports[0];
        const SolverReport& b = reports[1];
        INFO("solver " << name);
        CHECK(a.best_value == b.best_value);
        CHECK(a.simulator_calls == b.simulator_calls);
        CHECK(a.attempts == b.attempts);
        CHECK(a.restarts == b.restarts);
        REQUIRE(a.best.has_value());
        REQUIRE(b.best.has_value());
        CHECK(a.best->serialize() == b.best->serialize());
        REQUIRE(a.trajectory.size() == b.trajectory.size());
        for (std::size_t i = 0; i < a.trajectory.size(); ++i) {
            CHECK(a.trajectory[i].calls == b.trajectory[i].calls);
            CHECK(a.trajectory[i].value == b.trajectory[i].value);
        }
    }
}

TEST_CASE("solver budgets cap the simulator traffic") {
    for (const std::string name : {"direct", "evo", "local"}) {
        EvaluatorOptions options;
        options.max_simulator_calls = 25;
        Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity, options);
        const SolverReport report = solve(name, make_problem(evaluator), Budget{25, 86400.0, 5});
        INFO("solver " << name);
        CHECK(report.simulator_calls <= 25);
        CHECK(evaluator.simulator_calls() <= 25);
        CHECK(report.found_feasible);  // 25 calls is plenty to see one design
    }
}

TEST_CASE("an exhausted wall clock yields the no-solution report") {
    EvaluatorOptions options;
    options.max_wall_seconds = 0.0;
    Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity, options);
    const SolverReport report =
        solve_evolutionary(make_problem(evaluator), Budget{2500, 0.0, 5}, EvolutionConfig{});
    CHECK_FALSE(report.found_feasible);
    CHECK_FALSE(report.best.has_value());
    CHECK(report.best_value == 0.0);
    CHECK(report.simulator_calls == 0);
}

TEST_CASE("improvement trajectories are strictly increasing") {
    for (const std::string name : {"direct", "evo", "local"}) {
        Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity);
        const SolverReport report = solve(name, make_problem(evaluator), Budget{400, 86400.0, 11});
        INFO("solver " << name);
        REQUIRE(report.found_feasible);
        REQUIRE_FALSE(report.trajectory.empty());
        for (std::size_t i = 1; i < report.trajectory.size(); ++i) {
            CHECK(report.trajectory[i].value > report.trajectory[i - 1].value);
            CHECK(report.trajectory[i].calls >= report.trajectory[i - 1].calls);
        }
        CHECK(report.trajectory.back().value == report.best_value);
    }
}

TEST_CASE("only feasible vectors ever reach the simulator") {
    const std::string dir = hexcirc::test::fresh_dir("solvers", "audit");
    for (const std::string name : {"direct", "evo", "local"}) {
        EvaluatorOptions options;
        options.log_path = dir + "/" + name + ".jsonl";
        options.max_simulator_calls = 80;
        Evaluator evaluator = make_evaluator(4, ObjectiveKind::HeatCapacity, options);
        const SolverReport report = solve(name, make_problem(evaluator), Budget{80, 86400.0, 17});

        int fresh_lines = 0;
        for (const std::string& line : hexcirc::test::read_lines(options.log_path)) {
            const auto parsed = nlohmann::ordered_json::parse(line);
            const CircuitryVector x =
                CircuitryVector::parse(parsed["vector"].get<std::string>());
            REQUIRE(validate(x).feasible);
            if (!parsed["cache_hit"].get<bool>()) ++fresh_lines;
        }
        INFO("solver " << name);
        CHECK(fresh_lines == report.simulator_calls);
        CHECK(report.simulator_calls == evaluator.simulator_calls());
    }
}

TEST_CASE("the dispatcher accepts exactly the three solver names") {
    Evaluator evaluator = make_evaluator(2, ObjectiveKind::HeatCapacity);
    const Problem problem = make_problem(evaluator);
    CHECK_THROWS_AS(solve("annealing", problem, Budget{}), std::invalid_argument);
    CHECK_THROWS_AS(solve("", problem, Budget{}), std::invalid_argument);
    CHECK(solve("direct", problem, Budget{}).solver == "direct");
}
