#include "hexcirc/evaluator.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace hexcirc {

using ordered_json = nlohmann::ordered_json;

Evaluator::Evaluator(HexInstance instance, SimulatorConfig sim_config, ObjectiveKind objective,
                     PenaltyConfig penalty, const RefrigerantTable& table, EvaluatorOptions options)
    : instance_(std::move(instance)),
      sim_config_(std::move(sim_config)),
      objective_(objective),
      penalty_(penalty),
      table_(table),
      options_(std::move(options)),
      start_(std::chrono::steady_clock::now()) {
    instance_.check();
    sim_config_.check();
    if (!options_.log_path.empty()) {
        log_.open(options_.log_path, std::ios::app);
        if (!log_) {
            throw std::runtime_error("Evaluator: cannot open log file " + options_.log_path);
        }
    }
}

Evaluation Evaluator::from_result(double Q_W, double dP_kPa, bool cache_hit,
                                  double wall_ms) const {
    Evaluation e;
    e.feasible = true;
    e.Q_W = Q_W;
    e.dP_kPa = dP_kPa;
    e.cache_hit = cache_hit;
    e.wall_ms = wall_ms;
    if (objective_ == ObjectiveKind::HeatCapacity) {
        e.raw = Q_W;
        e.value = Q_W;
        e.meets_limit = true;
    } else {
        e.raw = Q_W / std::max(dP_kPa, sim_config_.min_delta_p_kPa);
        e.meets_limit = Q_W >= penalty_.Q_lim_W;
        e.value = penalized(e.raw, Q_W, penalty_);
    }
    return e;
}

void Evaluator::write_log_line(const std::string& vector_text, int orientation, double Q_W,
                               double dP_kPa, double wall_ms, bool cache_hit) {
    if (!log_.is_open()) return;
    ordered_json line;
    line["vector"] = vector_text;
    line["orientation"] = orientation;
    line["Q_W"] = Q_W;
    line["dP_kPa"] = dP_kPa;
    line["wall_ms"] = wall_ms;
    line["cache_hit"] = cache_hit;
    log_ << line.dump() << '\n';
    log_.flush();
}

Evaluation Evaluator::evaluate(const CircuitryVector& x) {
    const FeasibilityReport report = validate(x);
    if (!report.feasible) {
        std::lock_guard<std::mutex> lock(mutex_);
        ++attempts_;
        ++infeasible_rejects_;
        return Evaluation{};
    }
    const CircuitryDesign directed = first_orientation(decode(x));
    return evaluate_directed(x, directed, 0);
}

Evaluation Evaluator::evaluate_directed(const CircuitryVector& x, const CircuitryDesign& directed,
                                        int orientation) {
    if (!directed.directed) {
        throw std::invalid_argument("evaluate_directed: design must be directed");
    }
    const std::string key = directed.serialize_compact();
    const std::string vector_text = x.serialize();

    {
        std::lock_guard<std::mutex> lock(mutex_);
        ++attempts_;
        const auto hit = cache_.find(key);
        if (hit != cache_.end()) {
            ++cache_hits_;
            write_log_line(vector_text, orientation, hit->second.Q_W, hit->second.dP_kPa, 0.0,
                           true);
            return from_result(hit->second.Q_W, hit->second.dP_kPa, true, 0.0);
        }
        if (simulator_calls_ >= options_.max_simulator_calls) {
            throw BudgetExhausted(BudgetExhausted::Kind::Calls,
                                  "simulator-call budget exhausted (" +
                                      std::to_string(options_.max_simulator_calls) + ")");
        }
        if (elapsed_seconds() > options_.max_wall_seconds) {
            throw BudgetExhausted(BudgetExhausted::Kind::Wall, "wall-time budget exhausted");
        }
        ++simulator_calls_;
    }

    const auto t0 = std::chrono::steady_clock::now();
    const SimulationResult sim = simulate(directed, instance_, sim_config_, table_);
    const double wall_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(key, CachedResult{sim.Q_W, sim.delta_P_kPa});
    write_log_line(vector_text, orientation, sim.Q_W, sim.delta_P_kPa, wall_ms, false);
    return from_result(sim.Q_W, sim.delta_P_kPa, false, wall_ms);
}

int Evaluator::preload_from_log(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("preload_from_log: cannot open " + path);
    }
    int loaded = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ordered_json parsed;
        try {
            parsed = ordered_json::parse(line);
        } catch (const std::exception& e) {
            throw std::runtime_error("preload_from_log: bad JSON line: " + std::string(e.what()));
        }
        const CircuitryVector x = CircuitryVector::parse(parsed.at("vector").get<std::string>());
        const int orientation = parsed.at("orientation").get<int>();
        const auto variants = orient(decode(x));
        if (orientation < 0 || orientation >= static_cast<int>(variants.size())) {
            throw std::runtime_error("preload_from_log: orientation index out of range");
        }
        const std::string key = variants[static_cast<std::size_t>(orientation)].serialize_compact();
        std::lock_guard<std::mutex> lock(mutex_);
        cache_.insert_or_assign(
            key, CachedResult{parsed.at("Q_W").get<double>(), parsed.at("dP_kPa").get<double>()});
        ++loaded;
    }
    return loaded;
}

int Evaluator::simulator_calls() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return simulator_calls_;
}

int Evaluator::cache_hits() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return cache_hits_;
}

int Evaluator::infeasible_rejects() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return infeasible_rejects_;
}

int Evaluator::attempts() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return attempts_;
}

double Evaluator::elapsed_seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

int Evaluator::calls_remaining() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return std::max(0, options_.max_simulator_calls - simulator_calls_);
}

}  // namespace hexcirc
