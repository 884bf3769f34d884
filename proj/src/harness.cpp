#include "hexcirc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "hexcirc/enumeration.hpp"
#include "hexcirc/evaluator.hpp"
#include "hexcirc/version.hpp"

namespace hexcirc {

namespace {

namespace fs = std::filesystem;

bool file_exists(const std::string& path) { return fs::exists(fs::path(path)); }

std::string comparison_csv_path(const ExperimentPlan& plan, ObjectiveKind objective) {
    return plan.out_dir + "/compare_" + objective_name(objective) + ".csv";
}

std::string evaluation_log_path(const ExperimentPlan& plan, const std::string& stage, int tubes,
                                ObjectiveKind objective, const std::string& solver_name) {
    return plan.out_dir + "/" + stage + "_t" + std::to_string(tubes) + "_" +
           objective_name(objective) + "_" + solver_name + ".jsonl";
}

SolverReport run_one_solver(const std::string& solver_name, const Problem& problem,
                            const ExperimentPlan& plan) {
    if (solver_name == "direct") return solve_direct(problem, plan.budget, plan.direct);
    if (solver_name == "evo") return solve_evolutionary(problem, plan.budget, plan.evolution);
    if (solver_name == "local") return solve_localsearch(problem, plan.budget);
    throw std::invalid_argument("unknown solver '" + solver_name + "'");
}

void check_enumeration_cap(const ExperimentPlan& plan, int tubes) {
    if (tubes > plan.enumeration_cap_tubes && !plan.override_enumeration_cap) {
        throw std::invalid_argument(
            "enumeration for t=" + std::to_string(tubes) + " exceeds the cap of t=" +
            std::to_string(plan.enumeration_cap_tubes) + "; pass the cap override to force it");
    }
}

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string join_ints(const std::vector<int>& values) {
    std::string text;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i > 0) text += ' ';
        text += std::to_string(values[i]);
    }
    return text;
}

}  // namespace

HexInstance make_instance(int tubes_per_row) {
    if (tubes_per_row < 1 || tubes_per_row > 18) {
        throw std::invalid_argument("make_instance: tubes_per_row must be in [1, 18], got " +
                                    std::to_string(tubes_per_row));
    }
    HexInstance instance;
    instance.layout = HexLayout(tubes_per_row);
    instance.check();
    return instance;
}

std::vector<int> default_tube_counts() {
    std::vector<int> counts;
    for (int tubes = 4; tubes <= 36; tubes += 2) counts.push_back(tubes);
    return counts;
}

void ExperimentPlan::check() const {
    if (tube_counts.empty()) throw std::invalid_argument("plan: instance list is empty");
    if (objectives.empty()) throw std::invalid_argument("plan: objective list is empty");
    if (solvers.empty()) throw std::invalid_argument("plan: solver list is empty");
    for (int tubes : tube_counts) {
        if (tubes < 4 || tubes > 36 || tubes % 2 != 0) {
            throw std::invalid_argument("plan: tube counts must be even and in [4, 36], got " +
                                        std::to_string(tubes));
        }
    }
    for (const std::string& solver_name : solvers) {
        if (solver_name != "direct" && solver_name != "evo" && solver_name != "local") {
            throw std::invalid_argument("plan: unknown solver '" + solver_name + "'");
        }
    }
    sim_config.check();
    if (budget.max_simulator_calls <= 0 || budget.max_wall_seconds <= 0.0) {
        throw std::invalid_argument("plan: budget limits must be positive");
    }
}

HexInstance ExperimentPlan::instance_for(int tubes) const {
    return instance_from_config(config, tubes / 2);
}

ExperimentPlan plan_from_config(const ConfigMap& config) {
    static const std::set<std::string> known_sections = {
        "instance", "simulator", "penalty", "budget", "solver.direct", "solver.evolution"};
    for (const auto& [section, keys] : config.sections()) {
        if (!known_sections.count(section)) {
            throw std::runtime_error("config: unknown section [" + section + "]");
        }
    }
    ExperimentPlan plan;
    plan.config = config;
    plan.sim_config = simulator_from_config(config);
    plan.penalty = penalty_from_config(config);
    plan.budget = budget_from_config(config);
    plan.direct = direct_from_config(config);
    plan.evolution = evolution_from_config(config);
    // Surfaces unknown [instance] keys at plan-build time instead of at the
    // first instance realization.
    instance_from_config(config, 2);
    return plan;
}

std::uint64_t Histogram::total() const {
    std::uint64_t sum = 0;
    for (std::uint64_t count : counts) sum += count;
    return sum;
}

Histogram make_histogram(const std::vector<double>& values, int bins) {
    if (bins < 1) throw std::invalid_argument("make_histogram: bins must be positive");
    Histogram histogram;
    histogram.counts.assign(static_cast<std::size_t>(bins), 0);
    if (values.empty()) return histogram;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    histogram.lo = *lo_it;
    histogram.hi = *hi_it;
    const double width = (histogram.hi - histogram.lo) / bins;
    for (double value : values) {
        int index = 0;
        if (width > 0.0) {
            index = std::min(bins - 1, static_cast<int>((value - histogram.lo) / width));
        }
        ++histogram.counts[static_cast<std::size_t>(index)];
    }
    return histogram;
}

CsvTable histogram_table(const Histogram& histogram) {
    CsvTable table;
    table.header = {"bin_lo", "bin_hi", "count"};
    const int bins = static_cast<int>(histogram.counts.size());
    const double width = bins > 0 ? (histogram.hi - histogram.lo) / bins : 0.0;
    for (int bin = 0; bin < bins; ++bin) {
        const double lo = histogram.lo + bin * width;
        const double hi = bin + 1 == bins ? histogram.hi : histogram.lo + (bin + 1) * width;
        table.rows.push_back({format_fixed(lo, 6), format_fixed(hi, 6),
                              std::to_string(histogram.counts[static_cast<std::size_t>(bin)])});
    }
    return table;
}

EnumerationStudy run_enumeration_study(const ExperimentPlan& plan, const RefrigerantTable& table) {
    plan.check();
    for (int tubes : plan.tube_counts) check_enumeration_cap(plan, tubes);
    fs::create_directories(fs::path(plan.out_dir));

    EnumerationStudy study;
    for (int tubes : plan.tube_counts) {
        const auto start = std::chrono::steady_clock::now();
        const HexInstance instance = plan.instance_for(tubes);

        EvaluatorOptions options;
        options.log_path = plan.out_dir + "/enum_t" + std::to_string(tubes) + ".jsonl";
        Evaluator evaluator(instance, plan.sim_config, ObjectiveKind::HeatCapacity, plan.penalty,
                            table, options);
        if (plan.resume && file_exists(options.log_path)) {
            evaluator.preload_from_log(options.log_path);
        }

        EnumerationStudyRow row;
        row.tubes = tubes;
        std::vector<double> q_values;
        std::vector<double> ratio_values;
        const EnumerationCounts counts =
            enumerate_feasible(instance.layout, [&](const CircuitryVector& x) {
                const CircuitryDesign design = decode(x);
                const std::vector<CircuitryDesign> oriented = orient(design);
                for (std::size_t index = 0; index < oriented.size(); ++index) {
                    const Evaluation eval =
                        evaluator.evaluate_directed(x, oriented[index], static_cast<int>(index));
                    q_values.push_back(eval.Q_W);
                    ratio_values.push_back(eval.Q_W /
                                           std::max(eval.dP_kPa, plan.sim_config.min_delta_p_kPa));
                    if (eval.Q_W >= plan.penalty.Q_lim_W) ++row.count_q_ge_limit;
                }
                return true;
            });
        row.solutions = counts.solutions;
        row.combinations = counts.combinations;

        const auto [q_lo, q_hi] = std::minmax_element(q_values.begin(), q_values.end());
        const auto [r_lo, r_hi] = std::minmax_element(ratio_values.begin(), ratio_values.end());
        row.q_min_W = *q_lo;
        row.q_max_W = *q_hi;
        row.ratio_min_WkPa = *r_lo;
        row.ratio_max_WkPa = *r_hi;
        double q_sum = 0.0;
        for (double q : q_values) q_sum += q;
        double ratio_sum = 0.0;
        for (double ratio : ratio_values) ratio_sum += ratio;
        row.q_mean_W = q_sum / static_cast<double>(q_values.size());
        row.ratio_mean_WkPa = ratio_sum / static_cast<double>(ratio_values.size());
        row.q_histogram = make_histogram(q_values);
        row.ratio_histogram = make_histogram(ratio_values);
        row.wall_s = seconds_since(start);
        study.rows.push_back(row);

        write_text_atomic(plan.out_dir + "/enumeration_study.csv",
                          write_csv(enumeration_table(study)));
        write_text_atomic(plan.out_dir + "/histogram_q_t" + std::to_string(tubes) + ".csv",
                          write_csv(histogram_table(row.q_histogram)));
        write_text_atomic(plan.out_dir + "/histogram_ratio_t" + std::to_string(tubes) + ".csv",
                          write_csv(histogram_table(row.ratio_histogram)));
    }
    write_text_atomic(plan.out_dir + "/manifest.txt", manifest_text(plan));
    return study;
}

CsvTable enumeration_table(const EnumerationStudy& study) {
    CsvTable table;
    table.header = {"tubes",         "solutions",      "combinations",   "count_q_ge_limit",
                    "q_min_W",       "q_max_W",        "q_mean_W",       "ratio_min_WkPa",
                    "ratio_max_WkPa", "ratio_mean_WkPa", "wall_s"};
    for (const EnumerationStudyRow& row : study.rows) {
        table.rows.push_back({std::to_string(row.tubes), std::to_string(row.solutions),
                              std::to_string(row.combinations),
                              std::to_string(row.count_q_ge_limit), format_fixed(row.q_min_W, 3),
                              format_fixed(row.q_max_W, 3), format_fixed(row.q_mean_W, 3),
                              format_fixed(row.ratio_min_WkPa, 3),
                              format_fixed(row.ratio_max_WkPa, 3),
                              format_fixed(row.ratio_mean_WkPa, 3), format_fixed(row.wall_s, 3)});
    }
    return table;
}

CsvTable SolverComparison::table() const {
    CsvTable table;
    table.header = {"tubes", "solver", "best_value", "time_s", "evaluations"};
    for (const ComparisonEntry& entry : entries) {
        table.rows.push_back({std::to_string(entry.tubes), entry.solver,
                              entry.solved ? format_fixed(entry.best_raw, 6) : dash_marker(),
                              format_fixed(entry.wall_s, 3),
                              std::to_string(entry.simulator_calls)});
    }

    std::vector<std::string> solver_order;
    for (const ComparisonEntry& entry : entries) {
        if (std::find(solver_order.begin(), solver_order.end(), entry.solver) ==
            solver_order.end()) {
            solver_order.push_back(entry.solver);
        }
    }
    for (const std::string& solver_name : solver_order) {
        std::vector<double> values;
        std::vector<double> times;
        std::vector<double> calls;
        for (const ComparisonEntry& entry : entries) {
            if (entry.solver != solver_name || !entry.solved) continue;
            values.push_back(entry.best_raw);
            times.push_back(entry.wall_s);
            calls.push_back(static_cast<double>(entry.simulator_calls));
        }
        const auto value_mean = geometric_mean(values);
        const auto time_mean = geometric_mean(times);
        const auto call_mean = geometric_mean(calls);
        table.rows.push_back(
            {"geomean", solver_name,
             value_mean ? format_fixed(*value_mean, 6) : dash_marker(),
             time_mean ? format_fixed(*time_mean, 3) : dash_marker(),
             call_mean ? format_fixed(*call_mean, 2) : dash_marker()});
    }
    return table;
}

std::vector<SolverComparison> run_solver_comparison(const ExperimentPlan& plan,
                                                    const RefrigerantTable& table) {
    plan.check();
    fs::create_directories(fs::path(plan.out_dir));

    std::vector<SolverComparison> comparisons;
    for (ObjectiveKind objective : plan.objectives) {
        SolverComparison comparison;
        comparison.objective = objective;
        comparison.footnote =
            "geometric means cover only the instances a solver solved; '" +
            std::string(dash_marker()) +
            "' marks runs that found no admissible design within budget";
        for (int tubes : plan.tube_counts) {
            for (const std::string& solver_name : plan.solvers) {
                const HexInstance instance = plan.instance_for(tubes);
                EvaluatorOptions options;
                options.log_path =
                    evaluation_log_path(plan, "eval", tubes, objective, solver_name);
                options.max_simulator_calls = plan.budget.max_simulator_calls;
                options.max_wall_seconds = plan.budget.max_wall_seconds;
                Evaluator evaluator(instance, plan.sim_config, objective, plan.penalty, table,
                                    options);
                if (plan.resume && file_exists(options.log_path)) {
                    evaluator.preload_from_log(options.log_path);
                }
                const Problem problem = make_problem(evaluator);
                const SolverReport report = run_one_solver(solver_name, problem, plan);

                ComparisonEntry entry;
                entry.tubes = tubes;
                entry.solver = solver_name;
                entry.solved = report.found_feasible &&
                               (objective == ObjectiveKind::HeatCapacity || report.meets_limit);
                entry.best_raw = report.best_raw;
                entry.wall_s = report.wall_seconds;
                entry.simulator_calls = report.simulator_calls;
                comparison.entries.push_back(entry);

                // Partial results survive interrupts: the table is rewritten
                // after every run.
                write_text_atomic(comparison_csv_path(plan, objective),
                                  write_csv(comparison.table()));
            }
        }
        write_text_atomic(comparison_csv_path(plan, objective) + ".footnote.txt",
                          comparison.footnote + "\n");
        comparisons.push_back(std::move(comparison));
    }
    write_text_atomic(plan.out_dir + "/manifest.txt", manifest_text(plan));
    return comparisons;
}

std::string OracleVerdict::text() const {
    std::ostringstream out;
    out << "verify t=" << tubes << " objective=" << objective_name(objective) << " threshold="
        << format_fixed(threshold * 100.0, 3) << "%\n";
    out << "  enumerated " << designs_enumerated << " designs; optimum value "
        << format_fixed(optimum_value, 6);
    if (optimum) out << " at " << optimum->serialize();
    out << "\n";
    for (const SolverGap& gap : gaps) {
        out << "  " << gap.solver << ": ";
        if (gap.solved) {
            out << "value=" << format_fixed(gap.value, 6) << " gap="
                << format_fixed(gap.gap * 100.0, 3) << "%";
        } else {
            out << "no admissible design within budget";
        }
        out << " calls=" << gap.simulator_calls << (gap.pass ? " PASS" : " FAIL") << "\n";
    }
    out << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

OracleVerdict verify_against_oracle(const ExperimentPlan& plan, int tubes, ObjectiveKind objective,
                                    double threshold, const RefrigerantTable& table) {
    plan.check();
    check_enumeration_cap(plan, tubes);
    fs::create_directories(fs::path(plan.out_dir));
    const HexInstance instance = plan.instance_for(tubes);

    OracleVerdict verdict;
    verdict.tubes = tubes;
    verdict.objective = objective;
    verdict.threshold = threshold;

    // The oracle scores designs exactly the way solvers see them: first
    // orientation, same objective and penalty.
    Evaluator oracle(instance, plan.sim_config, objective, plan.penalty, table);
    bool have_optimum = false;
    const EnumerationCounts counts =
        enumerate_feasible(instance.layout, [&](const CircuitryVector& x) {
            const Evaluation eval = oracle.evaluate(x);
            if (!have_optimum || eval.value > verdict.optimum_value) {
                have_optimum = true;
                verdict.optimum_value = eval.value;
                verdict.optimum = x;
            }
            return true;
        });
    verdict.designs_enumerated = counts.solutions;

    verdict.pass = true;
    for (const std::string& solver_name : plan.solvers) {
        EvaluatorOptions options;
        options.log_path = evaluation_log_path(plan, "verify", tubes, objective, solver_name);
        options.max_simulator_calls = plan.budget.max_simulator_calls;
        options.max_wall_seconds = plan.budget.max_wall_seconds;
        Evaluator evaluator(instance, plan.sim_config, objective, plan.penalty, table, options);
        const Problem problem = make_problem(evaluator);
        const SolverReport report = run_one_solver(solver_name, problem, plan);

        SolverGap gap;
        gap.solver = solver_name;
        gap.solved = report.found_feasible;
        gap.value = report.best_value;
        gap.simulator_calls = report.simulator_calls;
        if (report.found_feasible) {
            const double scale = std::max(std::abs(verdict.optimum_value), 1e-12);
            gap.gap = (verdict.optimum_value - report.best_value) / scale;
            gap.pass = gap.gap <= threshold;
        } else {
            gap.gap = std::numeric_limits<double>::infinity();
            gap.pass = false;
        }
        verdict.pass = verdict.pass && gap.pass;
        verdict.gaps.push_back(gap);
    }

    write_text_atomic(plan.out_dir + "/verify_t" + std::to_string(tubes) + "_" +
                          objective_name(objective) + ".txt",
                      verdict.text());
    return verdict;
}

std::optional<std::string> deviation_note(int tubes) {
    if (tubes == 10) {
        return std::string(
            "note: previously published enumeration statistics for t=10 list 3,965 solutions "
            "and 14,976 directed combinations; the connection rules implemented here give "
            "4,361 and 16,032.");
    }
    if (tubes == 12) {
        return std::string(
            "note: previously published enumeration statistics for t=12 list 54,539 solutions "
            "and 232,512 directed combinations; the connection rules implemented here give "
            "62,701 and 259,264.");
    }
    return std::nullopt;
}

std::optional<double> geometric_mean(const std::vector<double>& values) {
    if (values.empty()) return std::nullopt;
    double log_sum = 0.0;
    for (double value : values) {
        if (value <= 0.0) return std::nullopt;
        log_sum += std::log(value);
    }
    return std::exp(log_sum / static_cast<double>(values.size()));
}

std::string format_fixed(double value, int decimals) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.*f", decimals, value);
    return std::string(buffer);
}

void write_text_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path temp = target;
    temp += ".tmp";
    {
        std::ofstream out(temp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + temp.string());
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + temp.string());
    }
    fs::rename(temp, target);
}

std::string manifest_text(const ExperimentPlan& plan) {
    std::ostringstream out;
    out << "run manifest\n";
    out << "version: " << HEXCIRC_VERSION << "\n";
    out << "config_hash: " << plan.config.content_hash() << "\n";
    out << "seed: " << plan.budget.seed << "\n";
    out << "budget: max_evals=" << plan.budget.max_simulator_calls
        << " max_seconds=" << format_fixed(plan.budget.max_wall_seconds, 0) << "\n";
    out << "tube_counts: " << join_ints(plan.tube_counts) << "\n";
    std::string objective_list;
    for (std::size_t i = 0; i < plan.objectives.size(); ++i) {
        if (i > 0) objective_list += ' ';
        objective_list += objective_name(plan.objectives[i]);
    }
    out << "objectives: " << objective_list << "\n";
    std::string solver_list;
    for (std::size_t i = 0; i < plan.solvers.size(); ++i) {
        if (i > 0) solver_list += ' ';
        solver_list += plan.solvers[i];
    }
    out << "solvers: " << solver_list << "\n";
    out << "penalty: lambda=" << format_fixed(plan.penalty.lambda, 0)
        << " q_lim_W=" << format_fixed(plan.penalty.Q_lim_W, 0) << "\n";
    for (int tubes : plan.tube_counts) {
        const auto note = deviation_note(tubes);
        if (note) out << *note << "\n";
    }
    return out.str();
}

}  // namespace hexcirc
