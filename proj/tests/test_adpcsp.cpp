#include <doctest.h>

#include "compmod/adpcsp.hpp"
#include "compmod/csp_io.hpp"
#include "support.hpp"

using namespace compmod;

namespace {

ADPCSP example_problem() {
    return parse_problem(parse(testsupport::read_file(testsupport::corpus_path("predation-example.problem"))));
}

using Named = std::vector<std::pair<std::string, std::string>>;

ADPCSP frog_csp() {
    auto kb = load_kb(parse(testsupport::read_file(testsupport::corpus_path("population-dynamics.kb")) +
                            testsupport::read_file(testsupport::corpus_path("frog.scenario"))));
    return build_adcsp(generate_model_space(kb, kb.scenarios().back()));
}

} // namespace

TEST_CASE("translation of a single population space") {
    auto csp = frog_csp();
    REQUIRE(csp.attributes.size() == 2);
    CHECK(csp.attributes[0].domain == std::vector<std::string>{"yes", "no"});
    CHECK(csp.attributes[0].value_terms[1].str() == "(not (relevant growth frog))");
    CHECK(csp.attributes[1].domain == std::vector<std::string>{"exponential", "logistic", "other"});
    CHECK(csp.attributes[1].value_terms[1].str() == "(model size-1 logistic)");
    REQUIRE(csp.compatibility.size() == 1);
    CHECK(csp.compatibility[0].forbidden == std::vector<AttrValue>{{0, 0}, {1, 2}});
    CHECK(build_adcsp(ModelSpace{}).attributes.empty());
}

TEST_CASE("preferences attach by pattern") {
    auto csp = frog_csp();
    RawOrdering raw;
    raw.bpqs = {{"p-exp", "growth"}, {"p-log", "growth"}};
    raw.bpq_order = {{"p-exp", "p-log"}};
    auto ord = BPQOrdering::validate(raw);
    auto with = attach_preferences(csp, ord, {{parse_one("(model * logistic)"), "p-log"},
                                              {parse_one("(model ?s exponential)"), "p-exp"}});
    CHECK(with.prefs[1][1].str() == "{p-log:1}");
    CHECK(with.prefs[1][0].str() == "{p-exp:1}");
    CHECK(with.prefs[1][2].empty());
    CHECK(with.prefs[0][0].empty());
    auto sols = solve(with, 5);
    REQUIRE(sols.size() == 1);
    CHECK(with.assignment_str(sols[0].assignment) == "((x1 yes) (x2 logistic))");
    CHECK_THROWS_WITH_AS(attach_preferences(csp, ord, {{parse_one("(model * logistic)"), "p-none"}}),
                         doctest::Contains("UnknownBPQ"), Error);
    auto none = attach_preferences(csp, ord, {});
    for (const auto& ps : none.prefs)
        for (const auto& p : ps) CHECK(p.empty());
}

TEST_CASE("evaluating assignments against the solution conditions") {
    auto csp = example_problem();
    auto ev = evaluate(csp, Named{{"x1", "yes"}, {"x2", "yes"}, {"x3", "yes"}, {"x4", "other"}, {"x5", "other"},
                                  {"x6", "Lotka-Volterra"}});
    CHECK(ev.verdict == Verdict::Solution);
    CHECK(ev.omp.str() == "{p-other:2 p-lotka-volterra:1}");
    CHECK(evaluate(csp, Named{{"x1", "no"}, {"x2", "no"}, {"x3", "no"}, {"x4", "other"}}).verdict ==
          Verdict::ActivityViolation);
    CHECK(evaluate(csp, Named{{"x1", "yes"}, {"x2", "no"}, {"x3", "no"}}).verdict == Verdict::ActivityViolation);
    CHECK(evaluate(csp, Named{{"x1", "yes"}, {"x2", "yes"}, {"x3", "yes"}, {"x4", "logistic"}, {"x5", "other"},
                              {"x6", "Lotka-Volterra"}})
              .verdict == Verdict::CompatibilityViolation);
    CHECK_THROWS_AS(evaluate(csp, Named{{"x9", "yes"}}), Error);
    CHECK_THROWS_AS(evaluate(csp, Named{{"x1", "maybe"}}), Error);
}

TEST_CASE("the six-attribute problem has one solution") {
    auto csp = example_problem();
    for (std::size_t max : {1, 3, 10}) {
        auto sols = solve(csp, max);
        REQUIRE(sols.size() == 1);
        CHECK(csp.assignment_str(sols[0].assignment) ==
              "((x1 yes) (x2 yes) (x3 yes) (x4 logistic) (x5 logistic) (x6 Holling))");
        CHECK(sols[0].omp.str() == "{p-logistic:2 p-holling:1}");
    }
    auto brute = brute_force_solve(csp);
    REQUIRE(brute.size() == 1);
    CHECK(brute[0].assignment == solve(csp, 1)[0].assignment);
}

TEST_CASE("degenerate problems") {
    ADPCSP empty;
    empty.ordering = BPQOrdering::validate({});
    auto sols = solve(empty, 3);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].assignment.empty());

    ADPCSP one = parse_problem(parse("(attribute x (a b c)) (activity x ())"));
    CHECK(solve(one, 5).size() == 3);
    CHECK(brute_force_solve(one).size() == 3);

    ADPCSP unsat = parse_problem(parse("(attribute x (a)) (activity x ()) (nogood ((x a)))"));
    CHECK(solve(unsat, 1).empty());
    CHECK(brute_force_solve(unsat).empty());
}

TEST_CASE("random problems: solver matches the enumeration oracle") {
    testsupport::Rng rng(23);
    for (int i = 0; i < 120; ++i) {
        auto csp = testsupport::random_csp(rng, 6, 3);
        auto expect = testsupport::oracle_maximal(csp);
        std::set<Assignment> got, brute;
        for (const auto& s : solve(csp, 1000)) got.insert(s.assignment);
        for (const auto& s : brute_force_solve(csp)) brute.insert(s.assignment);
        CHECK(got == expect);
        CHECK(brute == expect);
        auto first = solve(csp, 1);
        if (!first.empty()) CHECK(expect.count(first[0].assignment));
    }
}

TEST_CASE("search invariants: committed preference, potential bound, activity closure") {
    testsupport::Rng rng(29);
    for (int i = 0; i < 80; ++i) {
        auto csp = testsupport::random_csp(rng, 6, 3);
        auto valid = testsupport::oracle_valid(csp);
        testsupport::OmpOracle oracle(*csp.ordering);
        auto observer = [&](const SearchEvent& e) {
            if (!e.assignment) return;
            const Assignment& a = *e.assignment;
            CHECK(*e.cp == testsupport::oracle_pref(csp, a));
            if (e.kind != SearchEvent::Kind::Expand) return;
            for (const auto& s : valid) {
                bool extends = true;
                for (std::size_t x = 0; x < a.size(); ++x)
                    if (a[x] && s[x] != a[x]) extends = false;
                if (extends)
                    CHECK(oracle.compare(*e.pp, testsupport::oracle_pref(csp, s)) != PrefCmp::Less);
            }
        };
        auto sols = solve(csp, 1000, observer);
        for (const auto& s : sols) {
            auto act = csp.activated(s.assignment);
            for (std::size_t x = 0; x < act.size(); ++x) CHECK(act[x] == s.assignment[x].has_value());
        }
    }
}

TEST_CASE("solving is deterministic") {
    testsupport::Rng rng(31);
    for (int i = 0; i < 30; ++i) {
        auto csp = testsupport::random_csp(rng);
        auto a = solve(csp, 100), b = solve(csp, 100);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a[k].assignment == b[k].assignment);
    }
}
