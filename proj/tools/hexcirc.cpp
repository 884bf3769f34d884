#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "hexcirc/circuitry.hpp"
#include "hexcirc/config.hpp"
#include "hexcirc/csv.hpp"
#include "hexcirc/enumeration.hpp"
#include "hexcirc/evaluator.hpp"
#include "hexcirc/harness.hpp"
#include "hexcirc/objective.hpp"
#include "hexcirc/simulator.hpp"
#include "hexcirc/solvers.hpp"
#include "hexcirc/thermo.hpp"
#include "hexcirc/version.hpp"

namespace {

struct CommonOptions {
    std::vector<int> tubes;
    std::vector<std::string> objectives;
    std::vector<std::string> solvers;
    int budget_evals = 2500;
    double budget_seconds = 86400.0;
    std::uint64_t seed = 1;
    std::string config_path;
    std::string out_dir = "out";
    std::string properties_path;
    std::string vector_text;
    int orientation = 0;
    double threshold = 0.01;
    bool override_cap = false;
    bool resume = false;
};

bool flag_given(const CLI::App* cmd, const std::string& name) {
    const CLI::Option* option = cmd->get_option_no_throw(name);
    return option != nullptr && option->count() > 0;
}

void check_tubes(int tubes) {
    if (tubes < 4 || tubes > 36 || tubes % 2 != 0) {
        throw std::invalid_argument("--tubes must be even and in [4, 36], got " +
                                    std::to_string(tubes));
    }
}

hexcirc::ExperimentPlan build_plan(const CommonOptions& opts, const CLI::App* cmd) {
    hexcirc::ConfigMap config;
    if (!opts.config_path.empty()) config = hexcirc::ConfigMap::load(opts.config_path);
    hexcirc::ExperimentPlan plan = hexcirc::plan_from_config(config);
    if (!opts.tubes.empty()) plan.tube_counts = opts.tubes;
    for (int tubes : plan.tube_counts) check_tubes(tubes);
    if (!opts.objectives.empty()) {
        plan.objectives.clear();
        for (const std::string& name : opts.objectives) {
            plan.objectives.push_back(hexcirc::parse_objective(name));
        }
    }
    if (!opts.solvers.empty()) plan.solvers = opts.solvers;
    if (flag_given(cmd, "--budget-evals")) plan.budget.max_simulator_calls = opts.budget_evals;
    if (flag_given(cmd, "--budget-seconds")) plan.budget.max_wall_seconds = opts.budget_seconds;
    if (flag_given(cmd, "--seed")) plan.budget.seed = opts.seed;
    plan.out_dir = opts.out_dir;
    plan.override_enumeration_cap = opts.override_cap;
    plan.resume = opts.resume;
    return plan;
}

hexcirc::RefrigerantTable load_table(const std::string& path) {
    if (path.empty()) return hexcirc::RefrigerantTable::embedded_r134a();
    return hexcirc::RefrigerantTable::load(path);
}

hexcirc::SolverReport dispatch_solver(const std::string& solver_name,
                                      const hexcirc::Problem& problem,
                                      const hexcirc::ExperimentPlan& plan) {
    if (solver_name == "direct") return hexcirc::solve_direct(problem, plan.budget, plan.direct);
    if (solver_name == "evo") {
        return hexcirc::solve_evolutionary(problem, plan.budget, plan.evolution);
    }
    if (solver_name == "local") return hexcirc::solve_localsearch(problem, plan.budget);
    throw std::invalid_argument("unknown solver '" + solver_name + "'");
}

void print_deviation_notes(const std::vector<int>& tube_counts) {
    for (int tubes : tube_counts) {
        const auto note = hexcirc::deviation_note(tubes);
        if (note) std::cout << *note << "\n";
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Fin-tube coil refrigerant circuitry design: enumeration, crossflow evaporator "
        "simulation, and derivative-free optimization."};
    app.set_version_flag("--version", HEXCIRC_VERSION);
    app.require_subcommand(1);

    CommonOptions opts;
    int exit_code = 0;

    auto add_budget_flags = [&](CLI::App* cmd) {
        cmd->add_option("--budget-evals", opts.budget_evals,
                        "simulator-call budget per solver run")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--budget-seconds", opts.budget_seconds,
                        "wall-time budget per solver run [s]")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", opts.seed, "random seed for the stochastic solvers");
    };
    auto add_io_flags = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "sectioned key = value configuration file")
            ->check(CLI::ExistingFile);
        cmd->add_option("--out", opts.out_dir, "output directory (default: out)");
        cmd->add_option("--properties", opts.properties_path,
                        "refrigerant saturation-table CSV replacing the built-in R134a data")
            ->check(CLI::ExistingFile);
    };

    CLI::App* enumerate_cmd = app.add_subcommand(
        "enumerate", "exhaustively enumerate feasible designs and export distribution tables");
    enumerate_cmd->add_option("--tubes", opts.tubes,
                              "total tube counts to study (default: 4 6 8 10 12)");
    enumerate_cmd->add_flag("--override-enum-cap", opts.override_cap,
                            "allow enumeration beyond the t=12 cap");
    enumerate_cmd->add_flag("--resume", opts.resume, "preload existing evaluation logs");
    add_io_flags(enumerate_cmd);
    enumerate_cmd->callback([&]() {
        if (opts.tubes.empty()) opts.tubes = {4, 6, 8, 10, 12};
        const hexcirc::ExperimentPlan plan = build_plan(opts, enumerate_cmd);
        const hexcirc::RefrigerantTable table = load_table(opts.properties_path);
        const hexcirc::EnumerationStudy study = hexcirc::run_enumeration_study(plan, table);
        std::cout << hexcirc::write_csv(hexcirc::enumeration_table(study));
        print_deviation_notes(plan.tube_counts);
        std::cout << "outputs written to " << plan.out_dir << "\n";
    });

    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "run the coil model for one circuitry design");
    simulate_cmd->add_option("--tubes", opts.tubes, "total tube count (default: 8)");
    simulate_cmd->add_option("--vector", opts.vector_text,
                             "design as 't=<tubes>;bits=<01...>' (default: the base design)");
    simulate_cmd->add_option("--orientation", opts.orientation,
                             "index into the design's direction assignments (default: 0)")
        ->check(CLI::NonNegativeNumber);
    add_io_flags(simulate_cmd);
    simulate_cmd->callback([&]() {
        const hexcirc::ExperimentPlan plan = build_plan(opts, simulate_cmd);
        const hexcirc::RefrigerantTable table = load_table(opts.properties_path);
        int tubes = opts.tubes.empty() ? 8 : opts.tubes.front();
        check_tubes(tubes);
        std::optional<hexcirc::CircuitryVector> parsed;
        if (!opts.vector_text.empty()) {
            parsed = hexcirc::CircuitryVector::parse(opts.vector_text);
            const int vector_tubes = parsed->layout().tube_count();
            if (!opts.tubes.empty() && vector_tubes != tubes) {
                throw std::invalid_argument("--tubes disagrees with the --vector layout");
            }
            tubes = vector_tubes;
            check_tubes(tubes);
        }
        const hexcirc::HexInstance instance = plan.instance_for(tubes);
        const hexcirc::CircuitryVector x =
            parsed ? *parsed : hexcirc::base_vector(instance.layout);
        const hexcirc::FeasibilityReport feasibility = hexcirc::validate(x);
        if (!feasibility.feasible) {
            std::cout << "infeasible: " << feasibility.message << "\n";
            exit_code = 1;
            return;
        }
        const std::vector<hexcirc::CircuitryDesign> oriented =
            hexcirc::orient(hexcirc::decode(x));
        if (opts.orientation < 0 || opts.orientation >= static_cast<int>(oriented.size())) {
            throw std::invalid_argument("--orientation must be below " +
                                        std::to_string(oriented.size()));
        }
        const hexcirc::SimulationResult result =
            hexcirc::simulate(oriented[static_cast<std::size_t>(opts.orientation)], instance,
                              plan.sim_config, table);
        std::cout << "design (orientation " << opts.orientation << " of " << oriented.size()
                  << "):\n"
                  << oriented[static_cast<std::size_t>(opts.orientation)].serialize() << "\n";
        std::cout << "Q_W=" << hexcirc::format_fixed(result.Q_W, 6) << "\n";
        std::cout << "delta_P_kPa=" << hexcirc::format_fixed(result.delta_P_kPa, 6) << "\n";
        const double ratio =
            result.Q_W / std::max(result.delta_P_kPa, plan.sim_config.min_delta_p_kPa);
        std::cout << "ratio_WkPa=" << hexcirc::format_fixed(ratio, 6) << "\n";
        std::cout << "outer_iterations=" << result.outer_iterations << "\n";
        std::cout << "energy_balance_rel=" << result.energy_balance_rel << "\n";
        for (std::size_t i = 0; i < result.per_circuit.size(); ++i) {
            const hexcirc::CircuitResult& circuit = result.per_circuit[i];
            std::cout << "circuit " << i + 1
                      << ": Q_W=" << hexcirc::format_fixed(circuit.Q_W, 3)
                      << " dP_kPa=" << hexcirc::format_fixed(circuit.delta_p_kPa, 6)
                      << " outlet_quality=" << hexcirc::format_fixed(circuit.outlet.quality, 4)
                      << " outlet_superheat_K="
                      << hexcirc::format_fixed(circuit.outlet.superheat_K, 3)
                      << " outlet_p_kPa="
                      << hexcirc::format_fixed(circuit.outlet.pressure_kPa, 3) << "\n";
        }
    });

    CLI::App* solve_cmd =
        app.add_subcommand("solve", "run one derivative-free solver on one instance");
    solve_cmd->add_option("--tubes", opts.tubes, "total tube count (default: 8)");
    solve_cmd->add_option("--objective", opts.objectives, "objective to maximize (default: q)")
        ->check(CLI::IsMember({"q", "ratio"}));
    solve_cmd->add_option("--solver", opts.solvers, "solver to run (default: direct)")
        ->check(CLI::IsMember({"direct", "evo", "local"}));
    solve_cmd->add_flag("--resume", opts.resume, "preload an existing evaluation log");
    add_budget_flags(solve_cmd);
    add_io_flags(solve_cmd);
    solve_cmd->callback([&]() {
        const hexcirc::ExperimentPlan plan = build_plan(opts, solve_cmd);
        const hexcirc::RefrigerantTable table = load_table(opts.properties_path);
        const int tubes = opts.tubes.empty() ? 8 : opts.tubes.front();
        check_tubes(tubes);
        const hexcirc::ObjectiveKind objective = opts.objectives.empty()
                                                     ? hexcirc::ObjectiveKind::HeatCapacity
                                                     : plan.objectives.front();
        const std::string solver_name = opts.solvers.empty() ? "direct" : opts.solvers.front();

        const hexcirc::HexInstance instance = plan.instance_for(tubes);
        std::filesystem::create_directories(plan.out_dir);
        hexcirc::EvaluatorOptions options;
        options.log_path = plan.out_dir + "/eval_t" + std::to_string(tubes) + "_" +
                           hexcirc::objective_name(objective) + "_" + solver_name + ".jsonl";
        options.max_simulator_calls = plan.budget.max_simulator_calls;
        options.max_wall_seconds = plan.budget.max_wall_seconds;
        hexcirc::Evaluator evaluator(instance, plan.sim_config, objective, plan.penalty, table,
                                     options);
        if (plan.resume && std::filesystem::exists(options.log_path)) {
            const int loaded = evaluator.preload_from_log(options.log_path);
            std::cout << "preloaded " << loaded << " evaluations from " << options.log_path
                      << "\n";
        }
        const hexcirc::Problem problem = hexcirc::make_problem(evaluator);
        const hexcirc::SolverReport report = dispatch_solver(solver_name, problem, plan);

        std::cout << "solver=" << report.solver
                  << " objective=" << hexcirc::objective_name(report.objective)
                  << " tubes=" << tubes << " seed=" << report.seed << "\n";
        if (report.found_feasible && report.best) {
            std::cout << "best_value=" << hexcirc::format_fixed(report.best_value, 6)
                      << " Q_W=" << hexcirc::format_fixed(report.best_Q_W, 6)
                      << " dP_kPa=" << hexcirc::format_fixed(report.best_dP_kPa, 6)
                      << " raw=" << hexcirc::format_fixed(report.best_raw, 6)
                      << " meets_limit=" << (report.meets_limit ? "yes" : "no") << "\n";
            std::cout << "vector: " << report.best->serialize() << "\n";
            std::cout << "circuits:\n"
                      << hexcirc::first_orientation(hexcirc::decode(*report.best)).serialize()
                      << "\n";
        } else {
            std::cout << "no feasible design evaluated within budget\n";
        }
        std::cout << "simulator_calls=" << report.simulator_calls
                  << " cache_hits=" << report.cache_hits << " attempts=" << report.attempts
                  << " restarts=" << report.restarts
                  << " wall_s=" << hexcirc::format_fixed(report.wall_seconds, 3) << "\n";
        std::cout << "log: " << options.log_path << "\n";
    });

    CLI::App* compare_cmd = app.add_subcommand(
        "compare", "run every planned (instance, solver, objective) cell and tabulate results");
    compare_cmd->add_option("--tubes", opts.tubes,
                            "total tube counts (default: 4 6 ... 36)");
    compare_cmd->add_option("--objective", opts.objectives,
                            "objectives to run (default: q and ratio)")
        ->check(CLI::IsMember({"q", "ratio"}));
    compare_cmd->add_option("--solver", opts.solvers,
                            "solvers to run (default: direct evo local)")
        ->check(CLI::IsMember({"direct", "evo", "local"}));
    compare_cmd->add_flag("--resume", opts.resume, "preload existing evaluation logs");
    add_budget_flags(compare_cmd);
    add_io_flags(compare_cmd);
    compare_cmd->callback([&]() {
        const hexcirc::ExperimentPlan plan = build_plan(opts, compare_cmd);
        const hexcirc::RefrigerantTable table = load_table(opts.properties_path);
        const std::vector<hexcirc::SolverComparison> comparisons =
            hexcirc::run_solver_comparison(plan, table);
        for (const hexcirc::SolverComparison& comparison : comparisons) {
            std::cout << "objective: " << hexcirc::objective_name(comparison.objective) << "\n";
            std::cout << hexcirc::write_csv(comparison.table());
            std::cout << comparison.footnote << "\n\n";
        }
        std::cout << "outputs written to " << plan.out_dir << "\n";
    });

    CLI::App* verify_cmd = app.add_subcommand(
        "verify", "check solver results against the enumerated optimum for one instance");
    verify_cmd->add_option("--tubes", opts.tubes, "total tube count")->required();
    verify_cmd->add_option("--objective", opts.objectives,
                           "objectives to verify (default: q and ratio)")
        ->check(CLI::IsMember({"q", "ratio"}));
    verify_cmd->add_option("--solver", opts.solvers,
                           "solvers to verify (default: direct evo local)")
        ->check(CLI::IsMember({"direct", "evo", "local"}));
    verify_cmd->add_option("--threshold", opts.threshold,
                           "relative-gap pass threshold (default: 0.01)")
        ->check(CLI::PositiveNumber);
    verify_cmd->add_flag("--override-enum-cap", opts.override_cap,
                         "allow enumeration beyond the t=12 cap");
    add_budget_flags(verify_cmd);
    add_io_flags(verify_cmd);
    verify_cmd->callback([&]() {
        const hexcirc::ExperimentPlan plan = build_plan(opts, verify_cmd);
        const hexcirc::RefrigerantTable table = load_table(opts.properties_path);
        const int tubes = opts.tubes.front();
        check_tubes(tubes);
        for (hexcirc::ObjectiveKind objective : plan.objectives) {
            const hexcirc::OracleVerdict verdict =
                hexcirc::verify_against_oracle(plan, tubes, objective, opts.threshold, table);
            std::cout << verdict.text();
            if (!verdict.pass) exit_code = 1;
        }
    });

    CLI::App* oracle_cmd = app.add_subcommand(
        "count-oracle", "closed-form feasible-design counts from the pairing recurrence");
    oracle_cmd->add_option("--tubes", opts.tubes,
                           "total tube counts (default: 4 6 8 10 12 14)");
    oracle_cmd->callback([&]() {
        std::vector<int> tube_counts = opts.tubes;
        if (tube_counts.empty()) tube_counts = {4, 6, 8, 10, 12, 14};
        for (int tubes : tube_counts) {
            if (tubes < 2 || tubes % 2 != 0) {
                throw std::invalid_argument("--tubes must be even and positive, got " +
                                            std::to_string(tubes));
            }
            const hexcirc::EnumerationCounts counts = hexcirc::count_oracle(tubes / 2);
            std::cout << "t=" << tubes << ": solutions=" << counts.solutions
                      << " combinations=" << counts.combinations << "\n";
            const auto note = hexcirc::deviation_note(tubes);
            if (note) std::cout << *note << "\n";
        }
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return exit_code;
}
