#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "doctest.h"
#include "hexcirc/enumeration.hpp"
#include "hexcirc/evaluator.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace hexcirc;

namespace {

Evaluator make_evaluator(ObjectiveKind objective, EvaluatorOptions options = {},
                         int tubes_per_row = 4) {
    HexInstance instance;
    instance.layout = HexLayout(tubes_per_row);
    return Evaluator(instance, SimulatorConfig{}, objective, PenaltyConfig{},
                     RefrigerantTable::embedded_r134a(), std::move(options));
}

CircuitryVector ones(int tubes_per_row, const std::vector<VectorIndex>& indices) {
    CircuitryVector x{HexLayout(tubes_per_row)};
    for (VectorIndex k : indices) x.set_bit(k, true);
    return x;
}

}  // namespace

TEST_CASE("heat objective evaluations report the duty directly") {
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity);
    const Evaluation e = evaluator.evaluate(base_vector(HexLayout(4)));
    REQUIRE(e.feasible);
    CHECK(e.value == e.Q_W);
    CHECK(e.raw == e.Q_W);
    CHECK(e.meets_limit);
    CHECK_FALSE(e.cache_hit);
    CHECK(e.Q_W > 1500.0);
    CHECK(e.dP_kPa > 0.0);
    CHECK(e.wall_ms > 0.0);
    CHECK(evaluator.simulator_calls() == 1);
    CHECK(evaluator.attempts() == 1);
}

TEST_CASE("ratio objective folds the heat-capacity constraint into the value") {
    Evaluator evaluator = make_evaluator(ObjectiveKind::RatioWithLimit);
    const Evaluation e = evaluator.evaluate(base_vector(HexLayout(4)));
    REQUIRE(e.feasible);
    const double floor = SimulatorConfig{}.min_delta_p_kPa;
    CHECK(e.raw == doctest::Approx(e.Q_W / std::max(e.dP_kPa, floor)).epsilon(1e-12));
    // The reference coil tops out below the 3,900 W limit, so the penalty
    // is active for every design of this instance.
    CHECK_FALSE(e.meets_limit);
    CHECK(e.value == doctest::Approx(penalized(e.raw, e.Q_W, PenaltyConfig{})).epsilon(1e-12));
    CHECK(e.value < 0.0);
}

TEST_CASE("infeasible vectors are rejected before the simulator") {
    const std::string dir = hexcirc::test::fresh_dir("evaluator", "infeasible");
    EvaluatorOptions options;
    options.log_path = dir + "/eval.jsonl";
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, options);

    const Evaluation e = evaluator.evaluate(CircuitryVector{HexLayout(4)});
    CHECK_FALSE(e.feasible);
    CHECK(e.value == -std::numeric_limits<double>::infinity());
    CHECK(evaluator.simulator_calls() == 0);
    CHECK(evaluator.infeasible_rejects() == 1);
    CHECK(evaluator.attempts() == 1);
    // Rejections leave no trace in the evaluation log.
    CHECK(hexcirc::test::read_lines(options.log_path).empty());
}

TEST_CASE("repeat evaluations come from the cache and cost no budget") {
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity);
    const CircuitryVector x = base_vector(HexLayout(4));

    const Evaluation first = evaluator.evaluate(x);
    const Evaluation second = evaluator.evaluate(x);
    CHECK_FALSE(first.cache_hit);
    CHECK(second.cache_hit);
    CHECK(second.Q_W == first.Q_W);
    CHECK(second.dP_kPa == first.dP_kPa);
    CHECK(second.value == first.value);
    CHECK(second.wall_ms == 0.0);
    CHECK(evaluator.simulator_calls() == 1);
    CHECK(evaluator.cache_hits() == 1);
    CHECK(evaluator.attempts() == 2);
}

TEST_CASE("distinct orientations are distinct cache entries") {
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity);
    const CircuitryVector x = ones(4, {1, 12, 14, 16, 23, 28});
    const auto variants = orient(decode(x));
    REQUIRE(variants.size() == 4);

    const Evaluation forward = evaluator.evaluate_directed(x, variants[0], 0);
    const Evaluation reversed = evaluator.evaluate_directed(x, variants[3], 3);
    CHECK_FALSE(forward.cache_hit);
    CHECK_FALSE(reversed.cache_hit);
    CHECK(evaluator.simulator_calls() == 2);

    // evaluate() uses the first orientation, so it must hit the cache now.
    const Evaluation again = evaluator.evaluate(x);
    CHECK(again.cache_hit);
    CHECK(again.Q_W == forward.Q_W);

    CHECK_THROWS_AS(evaluator.evaluate_directed(x, decode(x), 0), std::invalid_argument);
}

TEST_CASE("the simulator-call budget is enforced after the cache") {
    EvaluatorOptions options;
    options.max_simulator_calls = 2;
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, options, 2);

    CHECK(evaluator.calls_remaining() == 2);
    const CircuitryVector a = ones(2, {1, 6});
    const CircuitryVector b = ones(2, {1, 2, 6});
    const CircuitryVector c = ones(2, {1, 3, 6});
    CHECK(evaluator.evaluate(a).feasible);
    CHECK(evaluator.evaluate(b).feasible);
    CHECK(evaluator.calls_remaining() == 0);

    CHECK_THROWS_AS(evaluator.evaluate(c), BudgetExhausted);
    try {
        evaluator.evaluate(c);
        FAIL("expected BudgetExhausted");
    } catch (const BudgetExhausted& err) {
        CHECK(err.kind() == BudgetExhausted::Kind::Calls);
    }
    // Cached designs stay reachable after exhaustion.
    CHECK(evaluator.evaluate(a).cache_hit);
    CHECK(evaluator.simulator_calls() == 2);
}

TEST_CASE("the wall-time budget is enforced for new simulations only") {
    EvaluatorOptions options;
    options.max_wall_seconds = 1e-9;
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, options, 2);
    try {
        evaluator.evaluate(ones(2, {1, 6}));
        FAIL("expected BudgetExhausted");
    } catch (const BudgetExhausted& err) {
        CHECK(err.kind() == BudgetExhausted::Kind::Wall);
    }
    CHECK(evaluator.simulator_calls() == 0);
}

TEST_CASE("the evaluation log is one JSON object per attempt, in field order") {
    const std::string dir = hexcirc::test::fresh_dir("evaluator", "log");
    EvaluatorOptions options;
    options.log_path = dir + "/eval.jsonl";
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, options, 2);

    const CircuitryVector a = ones(2, {1, 6});
    const CircuitryVector b = ones(2, {1, 2, 6});
    evaluator.evaluate(a);
    evaluator.evaluate(b);
    evaluator.evaluate(a);  // cache hit, still logged

    const auto lines = hexcirc::test::read_lines(options.log_path);
    REQUIRE(lines.size() == 3);
    for (const std::string& line : lines) {
        CHECK(line.rfind("{\"vector\":", 0) == 0);
        const auto parsed = nlohmann::ordered_json::parse(line);
        REQUIRE(parsed.size() == 6);
        const std::vector<std::string> expected_keys = {"vector", "orientation", "Q_W",
                                                        "dP_kPa",  "wall_ms",    "cache_hit"};
        std::vector<std::string> keys;
        for (auto it = parsed.begin(); it != parsed.end(); ++it) keys.push_back(it.key());
        CHECK(keys == expected_keys);
        CHECK(parsed["orientation"].get<int>() == 0);
        CHECK(parsed["Q_W"].get<double>() > 0.0);
    }
    CHECK(nlohmann::ordered_json::parse(lines[0])["vector"].get<std::string>() == a.serialize());
    CHECK(nlohmann::ordered_json::parse(lines[2])["cache_hit"].get<bool>());
    CHECK(nlohmann::ordered_json::parse(lines[2])["wall_ms"].get<double>() == 0.0);
    CHECK_FALSE(nlohmann::ordered_json::parse(lines[0])["cache_hit"].get<bool>());
}

TEST_CASE("a replayed log turns past work into cache hits") {
    const std::string dir = hexcirc::test::fresh_dir("evaluator", "preload");
    EvaluatorOptions options;
    options.log_path = dir + "/eval.jsonl";

    std::vector<Evaluation> originals;
    const std::vector<CircuitryVector> designs = all_feasible(HexLayout(2));
    {
        Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, options, 2);
        for (const CircuitryVector& x : designs) originals.push_back(evaluator.evaluate(x));
        CHECK(evaluator.simulator_calls() == 5);
    }

    Evaluator resumed = make_evaluator(ObjectiveKind::HeatCapacity, {}, 2);
    CHECK(resumed.preload_from_log(options.log_path) == 5);
    for (std::size_t i = 0; i < designs.size(); ++i) {
        const Evaluation replayed = resumed.evaluate(designs[i]);
        CHECK(replayed.cache_hit);
        CHECK(replayed.Q_W == originals[i].Q_W);
        CHECK(replayed.dP_kPa == originals[i].dP_kPa);
    }
    CHECK(resumed.simulator_calls() == 0);
    CHECK(resumed.cache_hits() == 5);

    CHECK_THROWS_AS(resumed.preload_from_log(dir + "/missing.jsonl"), std::runtime_error);
}

TEST_CASE("concurrent evaluation keeps the counters consistent") {
    Evaluator evaluator = make_evaluator(ObjectiveKind::HeatCapacity, {}, 3);
    const std::vector<CircuitryVector> designs = all_feasible(HexLayout(3));
    REQUIRE(designs.size() == 37);

    constexpr int kThreads = 4;
    std::vector<std::vector<double>> values(kThreads);
    std::vector<std::thread> workers;
    workers.reserve(kThreads);
    for (int w = 0; w < kThreads; ++w) {
        workers.emplace_back([&evaluator, &designs, &values, w]() {
            for (const CircuitryVector& x : designs) {
                values[static_cast<std::size_t>(w)].push_back(evaluator.evaluate(x).value);
            }
        });
    }
    for (std::thread& worker : workers) worker.join();

    CHECK(evaluator.attempts() == kThreads * 37);
    CHECK(evaluator.simulator_calls() + evaluator.cache_hits() == evaluator.attempts());
    CHECK(evaluator.simulator_calls() >= 37);
    CHECK(evaluator.infeasible_rejects() == 0);
    for (int w = 1; w < kThreads; ++w) {
        REQUIRE(values[static_cast<std::size_t>(w)] == values[0]);
    }
}
