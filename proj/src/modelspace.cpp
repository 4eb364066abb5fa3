#include "compmod/modelspace.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace compmod {

std::optional<NodeId> ModelSpace::find_node(const Term& t) const {
    for (const auto* m : {&participant_nodes, &relation_nodes, &assumption_nodes}) {
        auto it = m->find(t);
        if (it != m->end()) return it->second;
    }
    return std::nullopt;
}

std::vector<Literal> ModelSpace::complements(const Literal& l) const {
    if (!l.positive) return {Literal{l.node, true}};
    auto it = assumption_info.find(l.node);
    if (it == assumption_info.end() || it->second.relevance) return {Literal{l.node, false}};
    std::vector<Literal> out;
    for (NodeId a : assumption_order) {
        if (a == l.node) continue;
        const auto& info = assumption_info.at(a);
        if (!info.relevance && info.class_key == it->second.class_key) out.push_back({a, true});
    }
    return out;
}

bool ModelSpace::class_contradictory(const Environment& e) const {
    if (e.contradictory()) return true;
    std::set<std::string> seen;
    for (const auto& l : e.literals()) {
        if (!l.positive) continue;
        auto it = assumption_info.find(l.node);
        if (it == assumption_info.end() || it->second.relevance) continue;
        if (!seen.insert(it->second.class_key).second) return true;
    }
    return false;
}

Label ModelSpace::negation_environments(const Label& l) const {
    Label acc{Environment()};
    for (const auto& f : l) {
        if (class_contradictory(f)) continue;
        Label next;
        for (const auto& h : acc) {
            bool falsified = false;
            for (const auto& lit : f.literals()) {
                for (const auto& c : complements(lit))
                    if (h.contains(c)) { falsified = true; break; }
                if (falsified) break;
            }
            if (falsified) {
                insert_minimal(next, h);
                continue;
            }
            for (const auto& lit : f.literals())
                for (const auto& c : complements(lit)) {
                    auto h2 = h.merged(Environment({c}));
                    if (!class_contradictory(h2)) insert_minimal(next, h2);
                }
        }
        acc = std::move(next);
    }
    return acc;
}

std::string ModelSpace::dump() const {
    std::string out = ";; nodes\n" + atms.dump() + ";; justifications\n";
    for (const auto& j : atms.justifications()) {
        out += "(";
        for (std::size_t i = 0; i < j.antecedents.size(); ++i) {
            if (i) out += ' ';
            const auto& l = j.antecedents[i];
            out += l.positive ? std::to_string(l.node) : "(not " + std::to_string(l.node) + ")";
        }
        out += ") -> " + std::to_string(j.consequent) + "\n";
    }
    return out;
}

namespace {

struct Match {
    Substitution sigma;
    std::vector<Term> instances;  // one per positive structural condition
    std::string key;
};

bool positive_condition(const Term& c) { return !c.has_head("not"); }

class Builder {
public:
    Builder(const KnowledgeBase& kb, ModelSpace& space, const GenerateOptions& opts)
        : kb_(kb), s_(space), opts_(opts), frags_(kb.all_fragments()) {
        for (const auto& [r, n] : s_.relation_nodes) index(r);
    }

    void seed(const Scenario& sc) {
        for (const auto& [name, type] : sc.participants) {
            NodeId n = participant(Term::symbol(name), type);
            s_.atms.add_justification({}, n);
            s_.premises.insert(n);
        }
        for (const auto& r : sc.relations) {
            NodeId n = relation(r);
            s_.atms.add_justification({}, n);
            s_.premises.insert(n);
        }
    }

    void run() {
        positive_fixpoint();
        bool any_negated = false;
        for (std::size_t i = 0; i < frags_.size(); ++i) {
            if (!frags_[i].has_negated_conditions()) continue;
            any_negated = true;
            for (auto& m : matches(frags_[i])) apply_negated(i, m);
        }
        if (any_negated) {
            std::size_t before = applied_.size();
            positive_fixpoint();
            if (applied_.size() != before)
                throw Error("NonStratifiable",
                            "fragments depend on relations derived under negated conditions");
        }
    }

    std::vector<Match> matches(const ModelFragment& f) const {
        std::vector<Match> out;
        std::vector<const Term*> conds;
        for (const auto& c : f.structural)
            if (positive_condition(c)) conds.push_back(&c);
        Substitution sigma;
        std::vector<Term> inst;
        search(f, conds, 0, sigma, inst, out);
        std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) { return a.key < b.key; });
        return out;
    }

private:
    const KnowledgeBase& kb_;
    ModelSpace& s_;
    const GenerateOptions& opts_;
    std::vector<ModelFragment> frags_;
    std::map<std::pair<std::string, std::size_t>, std::vector<Term>> by_head_;
    std::map<std::string, std::size_t> gensym_;
    std::set<std::string> applied_;
    std::size_t justified_ = 0;

    NodeId participant(const Term& name, const std::string& type) {
        auto it = s_.participant_nodes.find(name);
        if (it != s_.participant_nodes.end()) return it->second;
        NodeId n = s_.atms.add_node(name.str());
        s_.participant_nodes.emplace(name, n);
        s_.participant_order.push_back(name);
        s_.participant_types.emplace(name, type);
        return n;
    }

    NodeId relation(const Term& r) {
        auto it = s_.relation_nodes.find(r);
        if (it != s_.relation_nodes.end()) return it->second;
        NodeId n = s_.atms.add_node(r.str());
        s_.relation_nodes.emplace(r, n);
        index(r);
        return n;
    }

    void index(const Term& r) {
        std::string h = r.size() && r.head().is_symbol() ? r.head().name() : "";
        by_head_[{h, r.size()}].push_back(r);
    }

    NodeId assumption(const Term& a) {
        auto it = s_.assumption_nodes.find(a);
        if (it != s_.assumption_nodes.end()) return it->second;
        NodeId n = s_.atms.add_assumption(a.str());
        s_.assumption_nodes.emplace(a, n);
        s_.assumption_order.push_back(n);
        AssumptionInfo info;
        info.term = a;
        auto form = parse_assumption(a);
        if (auto* r = std::get_if<Relevance>(&form)) {
            info.relevance = true;
            info.class_key = a.str();
            info.subjects = r->subjects;
        } else {
            auto& m = std::get<ModelChoice>(form);
            info.class_key = m.subject.str();
            info.model_name = m.name;
            info.subjects = {m.subject};
        }
        s_.assumption_info.emplace(n, std::move(info));
        return n;
    }

    std::string gensym(const std::string& hint) {
        for (;;) {
            std::string name = hint + "-" + std::to_string(++gensym_[hint]);
            if (!s_.participant_nodes.count(Term::symbol(name))) return name;
        }
    }

    bool source_ok(const ParticipantSpec& spec, const Term& value) const {
        auto it = s_.participant_types.find(value);
        return it != s_.participant_types.end() && kb_.is_subtype(it->second, spec.type);
    }

    void search(const ModelFragment& f, const std::vector<const Term*>& conds, std::size_t i,
                Substitution& sigma, std::vector<Term>& inst, std::vector<Match>& out) const {
        if (i < conds.size()) {
            const Term& pat = *conds[i];
            std::string h = pat.size() && pat.head().is_symbol() ? pat.head().name() : "";
            auto scan = [&](const std::vector<Term>& rels) {
                for (const auto& r : rels) {
                    auto m = match_pattern(pat, r, sigma);
                    if (!m) continue;
                    auto saved = sigma;
                    sigma = std::move(*m);
                    inst.push_back(r);
                    search(f, conds, i + 1, sigma, inst, out);
                    inst.pop_back();
                    sigma = std::move(saved);
                }
            };
            if (!h.empty()) {
                auto it = by_head_.find({h, pat.size()});
                if (it != by_head_.end()) scan(it->second);
            } else {
                for (const auto& [k, rels] : by_head_) scan(rels);
            }
            return;
        }
        bind_sources(f, 0, sigma, inst, out);
    }

    void bind_sources(const ModelFragment& f, std::size_t k, Substitution& sigma, std::vector<Term>& inst,
                      std::vector<Match>& out) const {
        if (k == f.sources.size()) {
            std::set<Term> used;
            std::string key;
            for (const auto& spec : f.sources) {
                const Term& v = sigma.at(spec.var);
                if (!source_ok(spec, v) || !used.insert(v).second) return;
                key += v.str() + " ";
            }
            key += "|";
            for (const auto& t : inst) key += " " + t.str();
            Substitution src;
            for (const auto& spec : f.sources) src.emplace(spec.var, sigma.at(spec.var));
            out.push_back({std::move(src), inst, std::move(key)});
            return;
        }
        const auto& spec = f.sources[k];
        if (sigma.count(spec.var)) {
            bind_sources(f, k + 1, sigma, inst, out);
            return;
        }
        for (const auto& p : s_.participant_order) {
            if (!source_ok(spec, p)) continue;
            sigma.emplace(spec.var, p);
            bind_sources(f, k + 1, sigma, inst, out);
            sigma.erase(spec.var);
        }
    }

    void positive_fixpoint() {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < frags_.size(); ++i) {
                if (frags_[i].has_negated_conditions()) continue;
                for (auto& m : matches(frags_[i]))
                    if (apply(i, m, {})) progress = true;
            }
        }
    }

    // Adds the justification for one matched instance tuple; instantiates
    // targets and postconditions on the first application of (fragment, σ).
    bool apply(std::size_t fi, const Match& m, const std::vector<Literal>& extra) {
        const auto& f = frags_[fi];
        std::string sig = print_substitution(m.sigma);
        std::string key = std::to_string(fi) + " " + m.key;
        for (const auto& l : extra) key += (l.positive ? " +" : " -") + std::to_string(l.node);
        if (!applied_.insert(key).second) return false;
        if (++justified_ > opts_.max_applications)
            throw Error("FixpointBudgetExceeded",
                        "more than " + std::to_string(opts_.max_applications) + " fragment applications");
        std::vector<Literal> ante;
        for (const auto& a : f.assumptions) ante.push_back({assumption(apply_subst(m.sigma, a)), true});
        for (const auto& spec : f.sources) ante.push_back({s_.participant_nodes.at(m.sigma.at(spec.var)), true});
        for (const auto& t : m.instances) ante.push_back({s_.relation_nodes.at(t), true});
        ante.insert(ante.end(), extra.begin(), extra.end());

        auto app_key = std::make_pair(f.name, sig);
        auto it = s_.application_nodes.find(app_key);
        if (it != s_.application_nodes.end()) {
            s_.atms.add_justification(ante, it->second);
            return true;
        }
        NodeId app = s_.atms.add_node("(apply " + f.name + " " + sig + ")");
        s_.application_nodes.emplace(app_key, app);
        s_.atms.add_justification(ante, app);
        Substitution sigma = m.sigma;
        for (const auto& spec : f.targets) {
            Term name = Term::symbol(gensym(spec.name_hint ? *spec.name_hint : spec.var));
            sigma.emplace(spec.var, name);
            s_.atms.add_justification({{app, true}}, participant(name, spec.type));
        }
        for (const auto& post : f.postconditions)
            s_.atms.add_justification({{app, true}}, relation(apply_subst(sigma, post)));
        Application rec{f.name, sigma, app, {}};
        for (const auto& pi : f.purpose_required) rec.purpose_required.push_back(apply_subst(sigma, pi));
        s_.applications.push_back(std::move(rec));
        return true;
    }

    void apply_negated(std::size_t fi, const Match& m) {
        const auto& f = frags_[fi];
        Label hs{Environment()};
        for (const auto& c : f.structural) {
            if (positive_condition(c)) continue;
            Term pat = apply_subst(m.sigma, c[1]);
            Label support;
            for (const auto& [rel, node] : s_.relation_nodes)
                if (match_pattern(pat, rel))
                    for (const auto& e : s_.atms.label(node)) insert_minimal(support, e);
            Label neg = s_.negation_environments(support);
            Label next;
            for (const auto& h : hs)
                for (const auto& g : neg) {
                    auto e = h.merged(g);
                    if (!s_.class_contradictory(e)) insert_minimal(next, e);
                }
            hs = std::move(next);
        }
        for (const auto& h : hs) apply(fi, m, h.literals());
    }
};

void add_nogood_unless_contradictory(ModelSpace& s, const Environment& e) {
    if (s.class_contradictory(e)) return;
    s.atms.add_nogood(e.literals());
}

} // namespace

std::vector<Substitution> match_fragment(const ModelFragment& fragment, const ModelSpace& space,
                                         const KnowledgeBase& kb) {
    // Builder::matches only reads the space.
    GenerateOptions opts;
    Builder b(kb, const_cast<ModelSpace&>(space), opts);
    std::vector<Substitution> out;
    std::set<std::string> seen;
    for (auto& m : b.matches(fragment))
        if (seen.insert(print_substitution(m.sigma)).second) out.push_back(std::move(m.sigma));
    return out;
}

void detect_inconsistencies(ModelSpace& s) {
    // Non-composable equations on one target.
    std::map<std::pair<std::string, std::string>, std::vector<std::pair<ComposableRelation, NodeId>>> groups;
    for (const auto& [rel, node] : s.relation_nodes) {
        auto c = classify_relation(rel);
        if (!c) continue;
        groups[{c->head, c->target.str()}].emplace_back(std::move(*c), node);
    }
    for (const auto& [key, rels] : groups)
        for (std::size_t i = 0; i < rels.size(); ++i)
            for (std::size_t j = i + 1; j < rels.size(); ++j) {
                if (composable(rels[i].first, rels[j].first)) continue;
                Label li = s.atms.label(rels[i].second), lj = s.atms.label(rels[j].second);
                for (const auto& a : li)
                    for (const auto& b : lj) add_nogood_unless_contradictory(s, a.merged(b));
            }
    // Purpose-required properties.
    for (const auto& app : s.applications) {
        for (const auto& pi : app.purpose_required) {
            auto it = s.relation_nodes.find(pi);
            Label neg = it == s.relation_nodes.end() ? Label{Environment()}
                                                     : s.negation_environments(s.atms.label(it->second));
            Label la = s.atms.label(app.node);
            for (const auto& e : la)
                for (const auto& h : neg) add_nogood_unless_contradictory(s, e.merged(h));
        }
    }
    // Required global properties.
    for (const auto& g : s.goals) {
        auto it = s.relation_nodes.find(g);
        if (it == s.relation_nodes.end()) {
            s.atms.add_nogood({});
            continue;
        }
        for (const auto& h : s.negation_environments(s.atms.label(it->second)))
            add_nogood_unless_contradictory(s, h);
    }
}

ModelSpace generate_model_space(const KnowledgeBase& kb, const Scenario& scenario, const std::vector<Term>& goals,
                                const GenerateOptions& opts) {
    ModelSpace s;
    s.goals = goals;
    Builder b(kb, s, opts);
    b.seed(scenario);
    b.run();
    detect_inconsistencies(s);
    return s;
}

namespace {

void add_flow_equations(std::set<Term>& rels) {
    std::vector<Term> extra;
    for (const auto& r : rels) {
        if (!r.has_head("flow") || r.size() != 4) continue;
        const Term& f = r[1];
        if (!r[2].is_symbol("source"))
            extra.push_back(Term::list({Term::symbol("d/dt"), r[2], Term::list({Term::symbol("C-sub"), f})}));
        if (!r[3].is_symbol("sink"))
            extra.push_back(Term::list({Term::symbol("d/dt"), r[3], Term::list({Term::symbol("C-add"), f})}));
    }
    rels.insert(extra.begin(), extra.end());
}

} // namespace

ScenarioModel extract_scenario_model(const ModelSpace& space, const std::vector<Term>& assumptions) {
    std::vector<Literal> lits;
    for (const auto& raw : assumptions) {
        bool positive = !raw.has_head("not");
        Term a = normalise_assumption(positive ? raw : (raw.size() == 2 ? raw[1] : raw));
        auto it = space.assumption_nodes.find(a);
        if (it == space.assumption_nodes.end()) throw Error("UnknownAssumption", a.str());
        lits.push_back({it->second, positive});
    }
    Environment env(lits);
    if (space.class_contradictory(env))
        throw Error("InconsistentAssumptionSet", "conflicting choices in " + space.atms.env_str(env));
    for (const auto& ng : space.atms.label(ATMS::bottom()))
        if (ng.subset_of(env)) throw Error("InconsistentAssumptionSet", "nogood " + space.atms.env_str(ng));
    auto in = space.atms.closure(env);
    if (in[ATMS::bottom()]) throw Error("InconsistentAssumptionSet", "derives ⊥");

    ScenarioModel m;
    for (const auto& p : space.participant_order)
        if (in[space.participant_nodes.at(p)]) m.participants.push_back(p);
    std::set<Term> rels;
    for (const auto& [r, n] : space.relation_nodes)
        if (in[n]) rels.insert(r);
    add_flow_equations(rels);

    std::map<std::pair<std::string, std::string>, std::vector<ComposableRelation>> groups;
    std::vector<Term> out;
    for (const auto& r : rels) {
        auto c = classify_relation(r);
        if (!c) {
            out.push_back(r);
            continue;
        }
        groups[{c->head, c->target.str()}].push_back(std::move(*c));
    }
    for (auto& [key, g] : groups) {
        auto res = compose_relations(std::move(g));
        if (auto* nc = std::get_if<NonComposable>(&res))
            throw Error("NonComposable", nc->first.str() + " and " + nc->second.str() + " (" + nc->reason + ")");
        out.push_back(std::get<Term>(res));
    }
    std::sort(m.participants.begin(), m.participants.end(), [](const Term& a, const Term& b) { return a.str() < b.str(); });
    std::sort(out.begin(), out.end(), [](const Term& a, const Term& b) { return a.str() < b.str(); });
    m.relations = std::move(out);
    return m;
}

std::string render_model_sexpr(const ScenarioModel& m) {
    std::string out = "(scenario-model\n  (participants";
    for (const auto& p : m.participants) out += "\n    " + p.str();
    out += ")\n  (relations";
    for (const auto& r : m.relations) out += "\n    " + r.str();
    return out + "))\n";
}

std::string render_model_ode(const ScenarioModel& m) {
    std::string out;
    for (const auto& r : m.relations)
        if (r.has_head("d/dt") && r.size() == 3) out += render_infix(r) + "\n";
    for (const auto& r : m.relations)
        if (r.has_head("==") && r.size() == 3) out += render_infix(r) + "\n";
    return out;
}

} // namespace compmod
