#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "compmod/adpcsp.hpp"
#include "compmod/compose.hpp"
#include "compmod/csp_io.hpp"
#include "compmod/kb.hpp"
#include "compmod/modelspace.hpp"
#include "compmod/omp.hpp"
#include "compmod/pipeline.hpp"
#include "compmod/terms.hpp"

namespace py = pybind11;
using namespace compmod;

namespace {

std::vector<std::string> strs(const std::vector<Term>& ts) {
    std::vector<std::string> out;
    for (const auto& t : ts) out.push_back(t.str());
    return out;
}

std::vector<Term> terms(const std::vector<std::string>& texts) {
    std::vector<Term> out;
    for (const auto& s : texts) out.push_back(parse_one(s));
    return out;
}

KnowledgeBase load_texts(const std::vector<std::string>& texts) {
    std::vector<Term> forms;
    for (const auto& t : texts)
        for (auto& f : parse(t)) forms.push_back(std::move(f));
    return load_kb(forms);
}

const Scenario& pick_scenario(const KnowledgeBase& kb, const std::optional<std::string>& name) {
    const auto& scs = kb.scenarios();
    if (scs.empty()) throw Error("MissingScenario", "no defScenario form");
    if (!name) return scs.back();
    for (const auto& s : scs)
        if (s.name == *name) return s;
    throw Error("MissingScenario", *name);
}

py::list solutions_to_py(const ADPCSP& csp, const std::vector<Solution>& sols) {
    py::list out;
    for (const auto& s : sols) {
        py::dict assignment;
        for (std::size_t x = 0; x < s.assignment.size(); ++x)
            if (s.assignment[x]) assignment[py::str(csp.attributes[x].name)] = csp.attributes[x].domain[*s.assignment[x]];
        py::dict d;
        d["assignment"] = assignment;
        d["omp"] = s.omp.str();
        d["assumptions"] = strs(solution_assumptions(csp, s.assignment));
        out.append(d);
    }
    return out;
}

} // namespace

PYBIND11_MODULE(_compmod, m) {
    m.doc() = "Compositional modelling with order-of-magnitude preferences";

    py::register_exception<Error>(m, "CompmodError");

    m.def("parse", [](const std::string& text) { return strs(parse(text)); },
          "Parse s-expressions and return their canonical printed forms.");
    m.def("match", [](const std::string& pattern, const std::string& instance) -> std::optional<std::string> {
        auto s = match_pattern(parse_one(pattern), parse_one(instance));
        if (!s) return std::nullopt;
        return print_substitution(*s);
    });

    m.def("compare_omps",
          [](const std::string& ordering_text, const std::map<std::string, unsigned>& p1,
             const std::map<std::string, unsigned>& p2) {
              auto spec = parse_preferences(parse(ordering_text));
              return std::string(to_string(compare(OMP::from_counts(spec.ordering, p1),
                                                   OMP::from_counts(spec.ordering, p2))));
          },
          py::arg("ordering"), py::arg("p1"), py::arg("p2"));

    m.def("compose", [](const std::vector<std::string>& relations) {
        std::vector<ComposableRelation> rels;
        for (const auto& r : relations) {
            auto c = classify_relation(parse_one(r));
            if (!c) throw Error("MalformedTerm", "not an equation: " + r);
            rels.push_back(std::move(*c));
        }
        auto res = compose_relations(std::move(rels));
        if (auto* t = std::get_if<Term>(&res)) return t->str();
        const auto& nc = std::get<NonComposable>(res);
        throw Error("NonComposable", nc.first.str() + " and " + nc.second.str() + " (" + nc.reason + ")");
    });
    m.def("render_infix", [](const std::string& t) { return render_infix(parse_one(t)); });

    py::class_<KnowledgeBase>(m, "KnowledgeBase")
        .def_property_readonly("fragments",
                               [](const KnowledgeBase& kb) {
                                   std::vector<std::string> out;
                                   for (const auto& f : kb.fragments()) out.push_back(f.name);
                                   return out;
                               })
        .def_property_readonly("scenarios", [](const KnowledgeBase& kb) {
            std::vector<std::string> out;
            for (const auto& s : kb.scenarios()) out.push_back(s.name);
            return out;
        });
    m.def("load_kb", &load_texts, py::arg("texts"), "Load knowledge base and scenario texts.");

    py::class_<ModelSpace>(m, "ModelSpace")
        .def("dump", &ModelSpace::dump)
        .def_property_readonly("assumptions",
                               [](const ModelSpace& s) {
                                   std::vector<std::string> out;
                                   for (NodeId n : s.assumption_order) out.push_back(s.atms.datum(n));
                                   return out;
                               })
        .def_property_readonly("nogoods", [](const ModelSpace& s) {
            std::vector<std::string> out;
            for (const auto& e : s.atms.label(ATMS::bottom())) out.push_back(s.atms.env_str(e));
            return out;
        });
    m.def(
        "generate_model_space",
        [](const KnowledgeBase& kb, std::optional<std::string> scenario, const std::vector<std::string>& goals) {
            std::vector<Term> g = terms(goals);
            for (const auto& r : kb.requirements()) g.push_back(r);
            return generate_model_space(kb, pick_scenario(kb, scenario), g);
        },
        py::arg("kb"), py::arg("scenario") = py::none(), py::arg("goals") = std::vector<std::string>{});
    m.def(
        "extract_model",
        [](const ModelSpace& s, const std::vector<std::string>& assumptions, const std::string& format) {
            auto model = extract_scenario_model(s, terms(assumptions));
            return format == "ode-text" ? render_model_ode(model) : render_model_sexpr(model);
        },
        py::arg("space"), py::arg("assumptions"), py::arg("format") = "sexpr");

    py::class_<ADPCSP>(m, "ADPCSP")
        .def("dump", [](const ADPCSP& c) { return dump_csp(c); })
        .def_property_readonly("attributes", [](const ADPCSP& c) {
            py::list out;
            for (const auto& a : c.attributes)
                out.append(py::make_tuple(a.name, a.domain, a.origin ? a.origin->str() : std::string()));
            return out;
        });
    m.def("build_adcsp", &build_adcsp, py::arg("space"));
    m.def(
        "attach_preferences",
        [](const ADPCSP& csp, const std::string& prefs_text) {
            auto spec = parse_preferences(parse(prefs_text));
            return attach_preferences(csp, spec.ordering, spec.assignments);
        },
        py::arg("csp"), py::arg("prefs"));
    m.def("parse_problem", [](const std::string& text) { return parse_problem(parse(text)); });
    m.def(
        "solve", [](const ADPCSP& csp, std::size_t n) { return solutions_to_py(csp, solve(csp, n)); },
        py::arg("csp"), py::arg("max_solutions") = 1);
    m.def(
        "brute_force_solve", [](const ADPCSP& csp) { return solutions_to_py(csp, brute_force_solve(csp)); },
        py::arg("csp"));
    m.def(
        "evaluate",
        [](const ADPCSP& csp, const std::map<std::string, std::string>& named) {
            std::vector<std::pair<std::string, std::string>> v(named.begin(), named.end());
            auto e = evaluate(csp, v);
            return py::make_tuple(to_string(e.verdict), e.omp.str());
        },
        py::arg("csp"), py::arg("assignment"));

    m.def(
        "run",
        [](const std::vector<std::string>& kb, std::optional<std::string> scenario, std::optional<std::string> prefs,
           std::optional<std::string> problem, std::size_t max_solutions, const std::string& format) {
            RunConfig cfg;
            cfg.kb_paths = kb;
            cfg.scenario_path = scenario;
            cfg.pref_path = prefs;
            cfg.problem_path = problem;
            cfg.max_solutions = max_solutions;
            cfg.format = format;
            auto r = run_solve(cfg);
            return py::make_tuple(r.text, r.status);
        },
        py::arg("kb") = std::vector<std::string>{}, py::arg("scenario") = py::none(), py::arg("prefs") = py::none(),
        py::arg("problem") = py::none(), py::arg("max_solutions") = 1, py::arg("format") = "sexpr",
        "Run the file-based pipeline; returns (text, status).");
}
