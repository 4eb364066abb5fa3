#pragma once

#include <optional>
#include <string>
#include <vector>

#include "compmod/adpcsp.hpp"
#include "compmod/csp_io.hpp"
#include "compmod/kb.hpp"
#include "compmod/modelspace.hpp"

namespace compmod {

struct RunConfig {
    std::vector<std::string> kb_paths;
    std::optional<std::string> scenario_path;
    std::optional<std::string> pref_path;
    std::optional<std::string> problem_path;  // standalone CSP, bypasses the front end
    std::vector<std::string> require;         // s-expressions
    std::size_t max_solutions = 1;
    std::size_t oracle_bound = 16;
    std::string format = "sexpr";  // or "ode-text"
};

// An error pinned to a source file and line (line 0 when unknown).
class LocatedError : public Error {
public:
    LocatedError(const Error& e, std::string file, int line)
        : Error(e.kind(), strip(e)), file_(std::move(file)), line_(line) {}
    const std::string& file() const noexcept { return file_; }
    int line() const noexcept { return line_; }
    std::string message() const;  // "file:line: kind: msg"

private:
    std::string file_;
    int line_;
    static std::string strip(const Error& e);
};

struct Inputs {
    KnowledgeBase kb;
    Scenario scenario;
    std::vector<Term> goals;
    std::optional<PreferenceSpec> prefs;
};

// Throws LocatedError for anything wrong in the input files.
Inputs load_inputs(const RunConfig& cfg);

struct Stages {
    ModelSpace space;
    ADPCSP csp;
};
Stages build_stages(const Inputs& in);

// Assumption terms for one solution, in attribute order.
std::vector<Term> solution_assumptions(const ADPCSP& csp, const Assignment& a);

struct RunResult {
    std::string text;
    int status = 0;  // 0 solutions found, 2 unsatisfiable
};

RunResult run_solve(const RunConfig& cfg);
std::string run_dump_space(const RunConfig& cfg);
std::string run_dump_csp(const RunConfig& cfg);
std::string run_dump_labels(const RunConfig& cfg, bool brute_force);
std::string run_check_kb(const RunConfig& cfg);

} // namespace compmod
