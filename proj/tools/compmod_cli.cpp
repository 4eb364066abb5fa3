#include <CLI11.hpp>

#include <iostream>

#include "compmod/pipeline.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Compositional modeller: scenario + knowledge base -> preferred scenario model"};
    app.require_subcommand(1);

    compmod::RunConfig cfg;
    bool brute_force = false;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--kb", cfg.kb_paths, "knowledge base file (repeatable)");
        sub->add_option("--scenario", cfg.scenario_path, "scenario file");
        sub->add_option("--require", cfg.require, "required global property, e.g. \"(endogenous size-1)\"");
    };

    auto* solve = app.add_subcommand("solve", "construct and print the preferred scenario model(s)");
    common(solve);
    solve->add_option("--prefs", cfg.pref_path, "preference file");
    solve->add_option("--problem", cfg.problem_path, "standalone aDPCSP problem file");
    solve->add_option("--max-solutions", cfg.max_solutions, "number of solutions to print")
        ->check(CLI::PositiveNumber);
    solve->add_option("--format", cfg.format, "model output format")->check(CLI::IsMember({"sexpr", "ode-text"}));

    auto* dump_space = app.add_subcommand("dump-space", "print the model space");
    common(dump_space);

    auto* dump_csp = app.add_subcommand("dump-csp", "print the aDPCSP in problem-file syntax");
    common(dump_csp);
    dump_csp->add_option("--prefs", cfg.pref_path, "preference file");
    dump_csp->add_option("--problem", cfg.problem_path, "standalone aDPCSP problem file");

    auto* dump_labels = app.add_subcommand("dump-labels", "print every node label");
    common(dump_labels);
    dump_labels->add_flag("--brute-force", brute_force, "compute labels with the exhaustive oracle");
    dump_labels->add_option("--oracle-bound", cfg.oracle_bound, "maximum assumptions for the oracle");

    auto* check_kb = app.add_subcommand("check-kb", "load and validate the inputs");
    common(check_kb);

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) {
            if (!cfg.problem_path && cfg.kb_paths.empty() && !cfg.scenario_path)
                throw compmod::Error("MissingInput", "solve needs --problem or --kb/--scenario");
            auto r = compmod::run_solve(cfg);
            std::cout << r.text;
            if (r.status == 2) std::cerr << "UnsatisfiableScenario: no assignment satisfies the constraints\n";
            return r.status;
        }
        if (dump_space->parsed()) std::cout << compmod::run_dump_space(cfg);
        if (dump_csp->parsed()) std::cout << compmod::run_dump_csp(cfg);
        if (dump_labels->parsed()) std::cout << compmod::run_dump_labels(cfg, brute_force);
        if (check_kb->parsed()) std::cout << compmod::run_check_kb(cfg);
    } catch (const compmod::LocatedError& e) {
        std::cerr << e.message() << "\n";
        return 1;
    } catch (const compmod::Error& e) {
        std::cerr << e.what() << "\n";
        return 1;
    }
    return 0;
}
