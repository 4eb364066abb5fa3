#include "compmod/adpcsp.hpp"

#include <algorithm>
#include <map>

namespace compmod {

std::size_t ADPCSP::attribute_index(const std::string& name) const {
    for (std::size_t i = 0; i < attributes.size(); ++i)
        if (attributes[i].name == name) return i;
    throw Error("UnknownAttribute", name);
}

std::size_t ADPCSP::value_index(std::size_t attr, const std::string& value) const {
    const auto& d = attributes.at(attr).domain;
    auto it = std::find(d.begin(), d.end(), value);
    if (it == d.end()) throw Error("UnknownValue", attributes[attr].name + ":" + value);
    return static_cast<std::size_t>(it - d.begin());
}

void ADPCSP::normalise_prefs() {
    prefs.resize(attributes.size());
    for (std::size_t i = 0; i < attributes.size(); ++i) prefs[i].resize(attributes[i].domain.size(), empty_omp());
}

std::vector<bool> ADPCSP::activated(const Assignment& a) const {
    std::vector<bool> active(attributes.size(), false);
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& c : activity) {
            if (active[c.target]) continue;
            bool holds = std::all_of(c.trigger.begin(), c.trigger.end(),
                                     [&](const AttrValue& p) { return active[p.first] && a[p.first] == p.second; });
            if (holds) active[c.target] = changed = true;
        }
    }
    return active;
}

bool ADPCSP::violates_compatibility(const Assignment& a) const {
    for (const auto& c : compatibility)
        if (std::all_of(c.forbidden.begin(), c.forbidden.end(),
                        [&](const AttrValue& p) { return a[p.first] == p.second; }))
            return true;
    return false;
}

OMP ADPCSP::preference(const Assignment& a) const {
    OMP out = empty_omp();
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && i < prefs.size() && *a[i] < prefs[i].size()) out = combine(out, prefs[i][*a[i]]);
    return out;
}

std::string ADPCSP::assignment_str(const Assignment& a) const {
    std::string out = "(";
    bool first = true;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        if (!first) out += ' ';
        first = false;
        out += "(" + attributes[i].name + " " + attributes[i].domain[*a[i]] + ")";
    }
    return out + ")";
}

ADPCSP build_adcsp(const ModelSpace& space) {
    ADPCSP csp;
    std::map<Literal, AttrValue> lit;
    std::vector<std::vector<Term>> subjects;

    for (NodeId n : space.assumption_order) {
        const auto& info = space.assumption_info.at(n);
        if (!info.relevance) continue;
        std::size_t x = csp.attributes.size();
        Attribute a;
        a.domain = {"yes", "no"};
        a.origin = info.term;
        a.value_terms = {info.term, Term::list({Term::symbol("not"), info.term})};
        csp.attributes.push_back(std::move(a));
        subjects.push_back(info.subjects);
        lit[{n, true}] = {x, 0};
        lit[{n, false}] = {x, 1};
    }
    std::map<std::string, std::size_t> model_class;
    for (NodeId n : space.assumption_order) {
        const auto& info = space.assumption_info.at(n);
        if (info.relevance) continue;
        auto [it, fresh] = model_class.emplace(info.class_key, csp.attributes.size());
        if (fresh) {
            Attribute a;
            a.origin = Term::list({Term::symbol("model"), info.subjects.front(), Term::wildcard()});
            csp.attributes.push_back(std::move(a));
            subjects.push_back(info.subjects);
        }
        auto& a = csp.attributes[it->second];
        lit[{n, true}] = {it->second, a.domain.size()};
        a.domain.push_back(info.model_name);
        a.value_terms.push_back(info.term);
    }
    for (std::size_t i = 0; i < csp.attributes.size(); ++i) csp.attributes[i].name = "x" + std::to_string(i + 1);

    auto translate = [&](const Environment& e) {
        std::vector<AttrValue> out;
        for (const auto& l : e.literals()) {
            auto it = lit.find(l);
            if (it == lit.end()) throw Error("UntranslatableLiteral", space.atms.env_str(e));
            out.push_back(it->second);
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    for (std::size_t x = 0; x < csp.attributes.size(); ++x) {
        Label acc{Environment()};
        for (const auto& s : subjects[x]) {
            auto node = space.find_node(s);
            if (!node) {
                acc.clear();
                break;
            }
            Label next;
            for (const auto& h : acc)
                for (const auto& e : space.atms.label(*node)) {
                    auto m = h.merged(e);
                    if (!space.class_contradictory(m)) insert_minimal(next, m);
                }
            acc = std::move(next);
        }
        canonicalise(acc);
        for (const auto& e : acc) {
            if (space.atms.is_nogood_env(e)) continue;
            auto trig = translate(e);
            if (std::any_of(trig.begin(), trig.end(), [&](const AttrValue& p) { return p.first == x; })) continue;
            csp.activity.push_back({x, std::move(trig)});
        }
    }
    Label nogoods = space.atms.label(ATMS::bottom());
    canonicalise(nogoods);
    for (const auto& e : nogoods) csp.compatibility.push_back({translate(e)});
    csp.normalise_prefs();
    return csp;
}

ADPCSP attach_preferences(ADPCSP csp, OrderingPtr ordering,
                          const std::vector<std::pair<Term, std::string>>& assignments) {
    for (const auto& [pat, bpq] : assignments)
        if (!ordering || !ordering->has_bpq(bpq)) throw Error("UnknownBPQ", bpq);
    csp.ordering = ordering;
    csp.prefs.clear();
    csp.normalise_prefs();
    std::vector<Term> patterns;
    for (const auto& [pat, bpq] : assignments) {
        Term p = pat;
        try {
            p = pat.has_head("not") && pat.size() == 2 ? Term::list({pat[0], normalise_assumption(pat[1])})
                                                       : normalise_assumption(pat);
        } catch (const Error&) {
        }
        patterns.push_back(std::move(p));
    }
    for (std::size_t x = 0; x < csp.attributes.size(); ++x)
        for (std::size_t v = 0; v < csp.attributes[x].value_terms.size(); ++v)
            for (std::size_t k = 0; k < patterns.size(); ++k)
                if (match_pattern(patterns[k], csp.attributes[x].value_terms[v]))
                    csp.prefs[x][v] = combine(csp.prefs[x][v], OMP::single(ordering, assignments[k].second));
    return csp;
}

const char* to_string(Verdict v) {
    switch (v) {
    case Verdict::Solution: return "solution";
    case Verdict::ActivityViolation: return "activity-violation";
    case Verdict::CompatibilityViolation: return "compatibility-violation";
    }
    return "?";
}

Evaluation evaluate(const ADPCSP& csp, const Assignment& a) {
    if (a.size() != csp.attributes.size()) throw Error("UnknownAttribute", "assignment size mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] && *a[i] >= csp.attributes[i].domain.size())
            throw Error("UnknownValue", csp.attributes[i].name + ":" + std::to_string(*a[i]));
    auto active = csp.activated(a);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] && !active[i])
            return {Verdict::ActivityViolation, csp.empty_omp(), csp.attributes[i].name + " assigned but not active"};
        if (!a[i] && active[i])
            return {Verdict::ActivityViolation, csp.empty_omp(), csp.attributes[i].name + " active but unassigned"};
    }
    for (const auto& c : csp.compatibility)
        if (std::all_of(c.forbidden.begin(), c.forbidden.end(),
                        [&](const AttrValue& p) { return a[p.first] == p.second; })) {
            Assignment t(a.size());
            for (const auto& [x, v] : c.forbidden) t[x] = v;
            return {Verdict::CompatibilityViolation, csp.empty_omp(), "forbidden " + csp.assignment_str(t)};
        }
    return {Verdict::Solution, csp.preference(a), ""};
}

Evaluation evaluate(const ADPCSP& csp, const std::vector<std::pair<std::string, std::string>>& named) {
    Assignment a(csp.attributes.size());
    for (const auto& [x, v] : named) {
        auto i = csp.attribute_index(x);
        a[i] = csp.value_index(i, v);
    }
    return evaluate(csp, a);
}

std::vector<Solution> brute_force_solve(const ADPCSP& csp, std::size_t bound) {
    const std::size_t n = csp.attributes.size();
    std::size_t total = 1;
    for (const auto& a : csp.attributes) {
        std::size_t k = a.domain.size() + 1;
        if (total > bound / k) throw Error("OracleBoundExceeded", "more than " + std::to_string(bound) + " assignments");
        total *= k;
    }
    std::vector<Solution> valid;
    Assignment a(n);
    for (;;) {
        auto ev = evaluate(csp, a);
        if (ev.verdict == Verdict::Solution) valid.push_back({a, ev.omp});
        std::size_t i = 0;
        for (; i < n; ++i) {
            std::size_t next = a[i] ? *a[i] + 1 : 0;
            if (next < csp.attributes[i].domain.size()) {
                a[i] = next;
                break;
            }
            a[i].reset();
        }
        if (i == n) break;
    }
    // Many assignments share a preference; compare the distinct ones.
    std::vector<OMP> distinct;
    std::vector<std::size_t> key;
    for (const auto& s : valid) {
        auto it = std::find(distinct.begin(), distinct.end(), s.omp);
        key.push_back(static_cast<std::size_t>(it - distinct.begin()));
        if (it == distinct.end()) distinct.push_back(s.omp);
    }
    std::vector<bool> maximal(distinct.size(), true);
    for (std::size_t i = 0; i < distinct.size(); ++i)
        for (std::size_t j = 0; j < distinct.size() && maximal[i]; ++j)
            if (compare(distinct[j], distinct[i]) == PrefCmp::Greater) maximal[i] = false;
    std::vector<Solution> out;
    for (std::size_t i = 0; i < valid.size(); ++i)
        if (maximal[key[i]]) out.push_back(valid[i]);
    return out;
}

} // namespace compmod
