#include "compmod/kb.hpp"

#include <algorithm>
#include <set>

namespace compmod {

namespace {

[[noreturn]] void fail(const char* kind, const std::string& msg, std::size_t idx) {
    throw KbError(kind, msg, idx);
}

std::string form_name(const Term& f, std::size_t idx) {
    if (f.size() < 2 || !f[1].is_symbol())
        fail("MalformedForm", "missing name in " + f.head().str(), idx);
    return f[1].name();
}

// Reads ":key value" pairs after the head and name.
std::vector<std::pair<std::string, Term>> keyword_args(const Term& f, std::size_t idx,
                                                       const std::set<std::string>& allowed) {
    std::vector<std::pair<std::string, Term>> out;
    for (std::size_t i = 2; i < f.size(); i += 2) {
        if (!f[i].is_symbol() || f[i].name().empty() || f[i].name()[0] != ':')
            fail("MalformedForm", "expected keyword, got " + f[i].str(), idx);
        if (!allowed.count(f[i].name()))
            fail("MalformedForm", "unknown keyword " + f[i].name() + " in " + f.head().name(), idx);
        if (i + 1 >= f.size()) fail("MalformedForm", "keyword " + f[i].name() + " has no value", idx);
        out.emplace_back(f[i].name(), f[i + 1]);
    }
    return out;
}

const std::vector<Term>& as_list(const Term& t, const std::string& what, std::size_t idx) {
    if (!t.is_compound()) fail("MalformedForm", what + " must be a list, got " + t.str(), idx);
    return t.items();
}

// Top-level `=` in relation terms is the same relation as `==`.
Term normalise_relation(const Term& t) {
    if (t.has_head("=")) {
        auto items = t.items();
        items[0] = Term::symbol("==");
        return Term::list(std::move(items));
    }
    if (t.has_head("not") && t.size() == 2) return Term::list({t[0], normalise_relation(t[1])});
    return t;
}

std::vector<std::string> vars_of(const Term& t) {
    std::vector<std::string> v;
    t.collect_variables(v);
    return v;
}

void check_vars(const Term& t, const std::set<std::string>& allowed, const std::string& owner,
                const char* where, std::size_t idx) {
    for (const auto& v : vars_of(t))
        if (!allowed.count(v))
            fail("FreeVariableViolation",
                 owner + ": ?" + v + " in " + where + " " + t.str() + " is not a declared participant",
                 idx);
}

} // namespace

bool ModelFragment::has_negated_conditions() const {
    return std::any_of(structural.begin(), structural.end(), [](const Term& t) { return t.has_head("not"); });
}

Term normalise_assumption(const Term& t) {
    if (t.has_head("relevant-competition")) {
        std::vector<Term> items{Term::symbol("relevant"), Term::symbol("competition")};
        items.insert(items.end(), t.items().begin() + 1, t.items().end());
        return Term::list(std::move(items));
    }
    return t;
}

AssumptionForm parse_assumption(const Term& raw) {
    Term t = normalise_assumption(raw);
    if (t.has_head("relevant")) {
        if (t.size() < 3 || !t[1].is_symbol())
            throw Error("MalformedAssumption", "expected (relevant <name> <subject>...), got " + t.str());
        return Relevance{t[1].name(), std::vector<Term>(t.items().begin() + 2, t.items().end())};
    }
    if (t.has_head("model")) {
        if (t.size() != 3 || !t[2].is_symbol())
            throw Error("MalformedAssumption", "expected (model <subject> <name>), got " + t.str());
        return ModelChoice{t[1], t[2].name()};
    }
    throw Error("MalformedAssumption", "not a relevance or model assumption: " + t.str());
}

KnowledgeBase::KnowledgeBase() {
    auto seed = [&](const char* n, std::optional<std::string> sup) {
        classes_[n] = EntityClass{n, std::move(sup), {}, true};
    };
    seed("variable", std::nullopt);
    seed("stock", "variable");
    seed("flow", "variable");
    seed("population", std::nullopt);
    seed("parameter", std::nullopt);
    seed("phenomenon", std::nullopt);
}

bool KnowledgeBase::is_subtype(const std::string& a, const std::string& b) const {
    if (!has_class(a)) throw Error("UnknownType", a);
    if (!has_class(b)) throw Error("UnknownType", b);
    std::string cur = a;
    for (std::size_t guard = 0; guard <= classes_.size(); ++guard) {
        if (cur == b) return true;
        const auto& c = classes_.at(cur);
        if (!c.superclass) return false;
        cur = *c.superclass;
    }
    return false;
}

std::vector<std::string> KnowledgeBase::features(const std::string& c) const {
    if (!has_class(c)) throw Error("UnknownType", c);
    std::vector<std::string> out;
    std::string cur = c;
    for (std::size_t guard = 0; guard <= classes_.size(); ++guard) {
        const auto& k = classes_.at(cur);
        for (const auto& f : k.features)
            if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
        if (!k.superclass) break;
        cur = *k.superclass;
    }
    return out;
}

void KnowledgeBase::check_name_free(const std::string& name, std::size_t idx) const {
    for (const auto& p : properties_)
        if (p.name == name) fail("DuplicateName", name, idx);
    for (const auto& f : fragments_)
        if (f.name == name) fail("DuplicateName", name, idx);
}

void KnowledgeBase::load(const std::vector<Term>& forms) {
    static const std::set<std::string> heads{"defEntity", "defproperty", "defModelFragment",
                                             "defScenario", "require"};
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const auto& f = forms[i];
        if (!f.is_compound() || f.size() == 0 || !f.head().is_symbol() || !heads.count(f.head().name()))
            fail("UnknownDefForm", f.is_compound() && f.size() ? f.head().str() : f.str(), i);
    }
    // Entities first so that later forms may use classes declared anywhere in the input.
    std::map<std::string, std::size_t> seen;
    for (std::size_t i = 0; i < forms.size(); ++i)
        if (forms[i].head().is_symbol("defEntity")) load_entity(forms[i], i, seen);
    check_hierarchy(seen);
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const auto& f = forms[i];
        const auto& h = f.head().name();
        if (h == "defproperty") load_property(f, i);
        else if (h == "defModelFragment") load_fragment(f, i);
        else if (h == "defScenario") load_scenario(f, i);
        else if (h == "require") {
            if (f.size() != 2 || !f[1].is_compound() || f[1].has_variables())
                fail("MalformedForm", "expected (require <ground relation>), got " + f.str(), i);
            requirements_.push_back(f[1]);
        }
    }
}

void KnowledgeBase::load_entity(const Term& f, std::size_t idx, std::map<std::string, std::size_t>& seen) {
    std::string name = form_name(f, idx);
    if (seen.count(name)) fail("DuplicateName", "entity " + name, idx);
    auto it = classes_.find(name);
    if (it != classes_.end() && !it->second.builtin) fail("DuplicateName", "entity " + name, idx);
    seen[name] = idx;
    EntityClass c{name, std::nullopt, {}, false};
    bool had_builtin = it != classes_.end();
    if (had_builtin) c.superclass = it->second.superclass;
    for (const auto& [k, v] : keyword_args(f, idx, {":subclass-of", ":participants"})) {
        if (k == ":subclass-of") {
            const Term* sup = &v;
            if (v.is_compound()) {
                if (v.size() != 1) fail("MalformedForm", ":subclass-of takes one class", idx);
                sup = &v[0];
            }
            if (!sup->is_symbol()) fail("MalformedForm", ":subclass-of expects a class name", idx);
            c.superclass = sup->name();
        } else {
            for (const auto& p : as_list(v, ":participants", idx)) {
                if (!p.is_symbol()) fail("MalformedForm", "participant feature must be a symbol", idx);
                c.features.push_back(p.name());
            }
        }
    }
    classes_[name] = std::move(c);
    ++entity_decls_;
}

void KnowledgeBase::check_hierarchy(const std::map<std::string, std::size_t>& seen) const {
    for (const auto& [name, c] : classes_) {
        std::size_t idx = seen.count(name) ? seen.at(name) : 0;
        if (c.superclass && !has_class(*c.superclass))
            fail("UnknownType", "superclass " + *c.superclass + " of " + name, idx);
        std::set<std::string> path{name};
        std::string cur = name;
        while (classes_.at(cur).superclass) {
            cur = *classes_.at(cur).superclass;
            if (!has_class(cur)) break;
            if (!path.insert(cur).second) fail("CyclicHierarchy", "through " + name, idx);
        }
    }
}

ParticipantSpec KnowledgeBase::read_spec(const Term& t, std::size_t idx) const {
    if (!t.is_compound() || t.size() == 0 || !t[0].is_variable())
        fail("MalformedForm", "participant spec must start with a variable: " + t.str(), idx);
    ParticipantSpec s;
    s.var = t[0].name();
    for (std::size_t i = 1; i < t.size(); i += 2) {
        if (i + 1 >= t.size() || !t[i].is_symbol())
            fail("MalformedForm", "bad participant spec " + t.str(), idx);
        const auto& k = t[i].name();
        const auto& v = t[i + 1];
        if (k == ":type") {
            if (!v.is_symbol()) fail("MalformedForm", ":type expects a class name", idx);
            s.type = v.name();
        } else if (k == ":name") {
            if (!v.is_symbol()) fail("MalformedForm", ":name expects a symbol", idx);
            s.name_hint = v.name();
        } else if (k == ":entity") {
            if (!v.is_compound() || v.size() != 2 || !v[0].is_symbol())
                fail("MalformedForm", ":entity expects (<feature> <participant>)", idx);
            s.entity_anchor = v;
        } else {
            fail("MalformedForm", "unknown participant keyword " + k, idx);
        }
    }
    if (s.type.empty()) fail("MalformedForm", "participant ?" + s.var + " has no :type", idx);
    if (!has_class(s.type)) fail("UnknownType", "?" + s.var + " :type " + s.type, idx);
    return s;
}

namespace {

// (feature ?owner) on participant ?v reads as the relation (feature ?owner ?v).
Term anchor_relation(const ParticipantSpec& s) {
    auto items = s.entity_anchor->items();
    items.push_back(Term::variable(s.var));
    return Term::list(std::move(items));
}

std::set<std::string> spec_vars(const std::vector<ParticipantSpec>& a, std::size_t idx) {
    std::set<std::string> out;
    for (const auto& s : a)
        if (!out.insert(s.var).second) fail("MalformedForm", "participant ?" + s.var + " declared twice", idx);
    return out;
}

} // namespace

void KnowledgeBase::load_property(const Term& f, std::size_t idx) {
    PropertyDef p;
    p.name = form_name(f, idx);
    check_name_free(p.name, idx);
    bool have_prop = false;
    for (const auto& [k, v] : keyword_args(
             f, idx, {":source-participants", ":structural-conditions", ":structural-condition", ":property"})) {
        if (k == ":source-participants") {
            for (const auto& s : as_list(v, k, idx)) p.sources.push_back(read_spec(s, idx));
        } else if (k == ":property") {
            if (!v.is_compound()) fail("MalformedForm", ":property must be a relation", idx);
            p.property = v;
            have_prop = true;
        } else {
            for (const auto& c : as_list(v, k, idx)) {
                if (!c.is_compound() || c.size() == 0)
                    fail("MalformedForm", "condition must be a relation: " + c.str(), idx);
                p.conditions.push_back(normalise_relation(c));
            }
        }
    }
    if (!have_prop) fail("MalformedForm", "property " + p.name + " has no :property", idx);
    auto vars = spec_vars(p.sources, idx);
    for (const auto& s : p.sources)
        if (s.entity_anchor) {
            check_vars(*s.entity_anchor, vars, p.name, ":entity", idx);
            p.conditions.push_back(anchor_relation(s));
        }
    for (const auto& c : p.conditions) {
        if (c.has_head("not") && c.size() != 2) fail("MalformedForm", "(not <relation>) expected", idx);
        if (c.has_head("or"))
            for (std::size_t k = 1; k < c.size(); ++k)
                if (c[k].has_head("not")) fail("MalformedForm", "negation inside (or ...)", idx);
        check_vars(c, vars, p.name, "condition", idx);
    }
    check_vars(p.property, vars, p.name, "property", idx);
    properties_.push_back(std::move(p));
}

void KnowledgeBase::load_fragment(const Term& f, std::size_t idx) {
    ModelFragment m;
    m.name = form_name(f, idx);
    check_name_free(m.name, idx);
    for (const auto& [k, v] : keyword_args(f, idx,
                                           {":source-participants", ":target-participants",
                                            ":target-participant", ":structural-conditions",
                                            ":structural-condition", ":postconditions", ":assumptions",
                                            ":purpose-required"})) {
        const auto& items = as_list(v, k, idx);
        for (const auto& t : items) {
            if (k == ":source-participants") m.sources.push_back(read_spec(t, idx));
            else if (k == ":target-participants" || k == ":target-participant") m.targets.push_back(read_spec(t, idx));
            else {
                if (!t.is_compound() || t.size() == 0)
                    fail("MalformedForm", k + " entries must be relations: " + t.str(), idx);
                if (k == ":assumptions") {
                    Term a = normalise_assumption(t);
                    try {
                        parse_assumption(a);
                    } catch (const Error& e) {
                        fail("MalformedAssumption", m.name + ": " + e.what(), idx);
                    }
                    m.assumptions.push_back(a);
                } else if (k == ":purpose-required") {
                    m.purpose_required.push_back(normalise_relation(t));
                } else {
                    Term r = normalise_relation(t);
                    if (r.has_head("not") || r.has_head("or"))
                        fail("MalformedForm", m.name + ": negated or disjunctive conditions are only allowed in properties", idx);
                    if (k == ":postconditions") m.postconditions.push_back(r);
                    else m.structural.push_back(r);
                }
            }
        }
    }
    auto src = spec_vars(m.sources, idx);
    auto all = src;
    for (const auto& s : m.targets)
        if (!all.insert(s.var).second)
            fail("MalformedForm", "participant ?" + s.var + " declared twice", idx);
    for (const auto& s : m.sources)
        if (s.entity_anchor) {
            check_vars(*s.entity_anchor, src, m.name, ":entity", idx);
            m.structural.push_back(anchor_relation(s));
        }
    for (const auto& s : m.targets)
        if (s.entity_anchor) {
            check_vars(*s.entity_anchor, all, m.name, ":entity", idx);
            m.postconditions.push_back(anchor_relation(s));
        }
    for (const auto& t : m.structural) check_vars(t, src, m.name, "structural condition", idx);
    for (const auto& t : m.postconditions) check_vars(t, all, m.name, "postcondition", idx);
    for (const auto& t : m.assumptions) check_vars(t, src, m.name, "assumption", idx);
    for (const auto& t : m.purpose_required) check_vars(t, all, m.name, "purpose-required property", idx);
    fragments_.push_back(std::move(m));
}

void KnowledgeBase::load_scenario(const Term& f, std::size_t idx) {
    Scenario s;
    s.name = form_name(f, idx);
    for (const auto& o : scenarios_)
        if (o.name == s.name) fail("DuplicateName", "scenario " + s.name, idx);
    std::set<std::string> declared;
    for (const auto& [k, v] : keyword_args(f, idx, {":entities", ":relations"})) {
        for (const auto& t : as_list(v, k, idx)) {
            if (k == ":entities") {
                if (!t.is_compound() || t.size() != 3 || !t[0].is_symbol() || !t[1].is_symbol(":type") ||
                    !t[2].is_symbol())
                    fail("MalformedForm", "entity must read (<name> :type <class>): " + t.str(), idx);
                if (!has_class(t[2].name())) fail("UnknownType", t[0].name() + " :type " + t[2].name(), idx);
                if (!declared.insert(t[0].name()).second) fail("DuplicateName", "participant " + t[0].name(), idx);
                s.participants.emplace_back(t[0].name(), t[2].name());
            } else {
                if (!t.is_compound() || t.size() == 0 || !t.head().is_symbol() || t.has_variables() ||
                    t.has_wildcards())
                    fail("MalformedForm", "scenario relation must be ground: " + t.str(), idx);
                s.relations.push_back(normalise_relation(t));
            }
        }
    }
    for (const auto& r : s.relations)
        for (std::size_t i = 1; i < r.size(); ++i)
            if (r[i].is_symbol() && !r[i].is_symbol("source") && !r[i].is_symbol("sink") &&
                !declared.count(r[i].name()))
                fail("UndeclaredParticipant", r[i].name() + " in " + r.str(), idx);
    scenarios_.push_back(std::move(s));
}

namespace {

void expand_or(const ModelFragment& base, std::size_t pos, ModelFragment cur, std::vector<ModelFragment>& out,
               int& counter) {
    if (pos == base.structural.size()) {
        if (counter >= 0) cur.name = base.name + "/" + std::to_string(++counter);
        out.push_back(std::move(cur));
        return;
    }
    const auto& c = base.structural[pos];
    if (c.has_head("or")) {
        for (std::size_t k = 1; k < c.size(); ++k) {
            auto next = cur;
            next.structural.push_back(c[k]);
            expand_or(base, pos + 1, std::move(next), out, counter);
        }
    } else {
        cur.structural.push_back(c);
        expand_or(base, pos + 1, std::move(cur), out, counter);
    }
}

} // namespace

ModelFragment property_to_fragment(const PropertyDef& p) {
    ModelFragment m;
    m.name = p.name;
    m.sources = p.sources;
    m.structural = p.conditions;
    m.postconditions = {p.property};
    m.from_property = true;
    return m;
}

std::vector<ModelFragment> KnowledgeBase::all_fragments() const {
    std::vector<ModelFragment> out;
    for (const auto& p : properties_) {
        auto m = property_to_fragment(p);
        bool has_or = std::any_of(m.structural.begin(), m.structural.end(),
                                  [](const Term& t) { return t.has_head("or"); });
        if (!has_or) {
            out.push_back(std::move(m));
            continue;
        }
        ModelFragment shell = m;
        shell.structural.clear();
        int counter = 0;
        expand_or(m, 0, shell, out, counter);
    }
    for (const auto& f : fragments_) out.push_back(f);
    return out;
}

KnowledgeBase load_kb(const std::vector<Term>& forms) {
    KnowledgeBase kb;
    kb.load(forms);
    return kb;
}

} // namespace compmod
