#include "compmod/pipeline.hpp"

#include <fstream>
#include <sstream>

namespace compmod {

std::string LocatedError::strip(const Error& e) {
    std::string msg = e.what();
    std::string prefix = e.kind() + ": ";
    if (msg.compare(0, prefix.size(), prefix) == 0) msg.erase(0, prefix.size());
    return msg;
}

std::string LocatedError::message() const {
    std::string loc = file_.empty() ? "" : file_ + ":";
    if (line_ > 0) loc += std::to_string(line_) + ":";
    return (loc.empty() ? "" : loc + " ") + what();
}

namespace {

struct SourceFile {
    std::string path;
    std::vector<Positioned> forms;
};

SourceFile read_source(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw LocatedError(Error("FileNotFound", "cannot open " + path), path, 0);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return {path, parse_with_positions(ss.str())};
    } catch (const ParseError& e) {
        // The line is already in the location prefix.
        std::string msg = LocatedError(e, "", 0).what();
        auto at = msg.rfind(" at line ");
        if (at != std::string::npos) msg.erase(at);
        auto colon = msg.find(": ");
        throw LocatedError(Error(e.kind(), colon == std::string::npos ? msg : msg.substr(colon + 2)), path,
                           e.line());
    }
}

std::vector<Term> terms_of(const SourceFile& f) {
    std::vector<Term> out;
    for (const auto& p : f.forms) out.push_back(p.term);
    return out;
}

// Maps an index into the concatenated forms of `files` back to file:line.
[[noreturn]] void relocate(const Error& e, std::size_t index, const std::vector<const SourceFile*>& files) {
    for (const auto* f : files) {
        if (index < f->forms.size()) throw LocatedError(e, f->path, f->forms[index].line);
        index -= f->forms.size();
    }
    throw LocatedError(e, files.empty() ? "" : files.back()->path, 0);
}

Term parse_flag_term(const std::string& text) {
    try {
        return parse_one(text);
    } catch (const Error& e) {
        throw LocatedError(e, "--require", 0);
    }
}

} // namespace

Inputs load_inputs(const RunConfig& cfg) {
    std::vector<SourceFile> sources;
    for (const auto& p : cfg.kb_paths) sources.push_back(read_source(p));
    if (cfg.scenario_path) sources.push_back(read_source(*cfg.scenario_path));
    std::vector<const SourceFile*> files;
    std::vector<Term> forms;
    for (const auto& s : sources) {
        files.push_back(&s);
        for (const auto& p : s.forms) forms.push_back(p.term);
    }
    Inputs in;
    try {
        in.kb.load(forms);
    } catch (const KbError& e) {
        relocate(e, e.form_index(), files);
    } catch (const Error& e) {
        throw LocatedError(e, "", 0);
    }
    const auto& scs = in.kb.scenarios();
    if (scs.empty()) {
        if (cfg.scenario_path)
            throw LocatedError(Error("MissingScenario", "no defScenario form"), *cfg.scenario_path, 0);
        in.scenario = Scenario{};
    } else {
        if (!cfg.scenario_path && scs.size() > 1)
            throw LocatedError(Error("MissingScenario", "several scenarios defined; pass --scenario"), "", 0);
        in.scenario = scs.back();
    }
    in.goals = in.kb.requirements();
    for (const auto& r : cfg.require) in.goals.push_back(parse_flag_term(r));
    if (cfg.pref_path) {
        SourceFile pf = read_source(*cfg.pref_path);
        try {
            in.prefs = parse_preferences(terms_of(pf));
        } catch (const KbError& e) {
            relocate(e, e.form_index(), {&pf});
        }
    }
    return in;
}

Stages build_stages(const Inputs& in) {
    Stages s;
    s.space = generate_model_space(in.kb, in.scenario, in.goals);
    s.csp = build_adcsp(s.space);
    if (in.prefs) s.csp = attach_preferences(std::move(s.csp), in.prefs->ordering, in.prefs->assignments);
    return s;
}

std::vector<Term> solution_assumptions(const ADPCSP& csp, const Assignment& a) {
    std::vector<Term> out;
    for (std::size_t x = 0; x < a.size(); ++x)
        if (a[x] && *a[x] < csp.attributes[x].value_terms.size()) out.push_back(csp.attributes[x].value_terms[*a[x]]);
    return out;
}

namespace {

ADPCSP load_problem(const std::string& path) {
    SourceFile f = read_source(path);
    try {
        return parse_problem(terms_of(f));
    } catch (const KbError& e) {
        relocate(e, e.form_index(), {&f});
    }
}

std::string header(std::size_t k, const Solution& s) {
    return ";; solution " + std::to_string(k) + " :omp " + s.omp.str() + "\n";
}

} // namespace

RunResult run_solve(const RunConfig& cfg) {
    RunResult r;
    if (cfg.problem_path) {
        ADPCSP csp = load_problem(*cfg.problem_path);
        auto sols = solve(csp, cfg.max_solutions);
        for (std::size_t k = 0; k < sols.size(); ++k)
            r.text += header(k + 1, sols[k]) + csp.assignment_str(sols[k].assignment) + "\n";
        if (sols.empty()) {
            r.text = ";; no solution\n";
            r.status = 2;
        }
        return r;
    }
    Inputs in = load_inputs(cfg);
    Stages st = build_stages(in);
    auto sols = solve(st.csp, cfg.max_solutions);
    if (sols.empty()) {
        r.text = ";; no solution\n";
        r.status = 2;
        return r;
    }
    for (std::size_t k = 0; k < sols.size(); ++k) {
        auto as = solution_assumptions(st.csp, sols[k].assignment);
        r.text += header(k + 1, sols[k]) + "(assumptions";
        for (const auto& a : as) r.text += "\n  " + a.str();
        r.text += ")\n";
        ScenarioModel m = extract_scenario_model(st.space, as);
        r.text += cfg.format == "ode-text" ? render_model_ode(m) : render_model_sexpr(m);
    }
    return r;
}

std::string run_dump_space(const RunConfig& cfg) {
    Inputs in = load_inputs(cfg);
    return generate_model_space(in.kb, in.scenario, in.goals).dump();
}

std::string run_dump_csp(const RunConfig& cfg) {
    if (cfg.problem_path) return dump_csp(load_problem(*cfg.problem_path));
    Inputs in = load_inputs(cfg);
    return dump_csp(build_stages(in).csp);
}

std::string run_dump_labels(const RunConfig& cfg, bool brute_force) {
    Inputs in = load_inputs(cfg);
    ModelSpace space = generate_model_space(in.kb, in.scenario, in.goals);
    const ATMS& atms = space.atms;
    std::vector<Label> labels;
    if (brute_force) labels = atms.brute_force_labels(cfg.oracle_bound);
    std::string out;
    for (NodeId n = 0; n < atms.size(); ++n) {
        Label l = brute_force ? labels[n] : atms.label(n);
        canonicalise(l);
        out += std::to_string(n) + " " + atms.datum(n) + " :label " + atms.label_str(l) + "\n";
    }
    return out;
}

std::string run_check_kb(const RunConfig& cfg) {
    Inputs in = load_inputs(cfg);
    std::ostringstream out;
    out << ";; classes " << in.kb.entity_declarations() << "\n";
    out << ";; properties " << in.kb.properties().size() << "\n";
    out << ";; fragments " << in.kb.fragments().size() << "\n";
    out << ";; scenarios " << in.kb.scenarios().size() << "\n";
    out << ";; requirements " << in.kb.requirements().size() << "\n";
    return out.str();
}

} // namespace compmod
