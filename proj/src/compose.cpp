#include "compmod/compose.hpp"

#include <algorithm>
#include <map>

namespace compmod {

const char* to_string(Functor f) {
    switch (f) {
    case Functor::Add: return "C-add";
    case Functor::Sub: return "C-sub";
    case Functor::Mul: return "C-mul";
    case Functor::Div: return "C-div";
    case Functor::If: return "C-if";
    case Functor::Else: return "C-else";
    case Functor::Plain: return "plain";
    }
    return "?";
}

std::optional<ComposableRelation> classify_relation(const Term& rel) {
    if (!(rel.has_head("==") || rel.has_head("d/dt")) || rel.size() != 3) return std::nullopt;
    ComposableRelation c;
    c.head = rel.head().name();
    c.target = rel[1];
    c.source = rel;
    const Term& rhs = rel[2];
    static const std::map<std::string, Functor> unary{
        {"C-add", Functor::Add}, {"C-sub", Functor::Sub}, {"C-mul", Functor::Mul},
        {"C-div", Functor::Div}, {"C-else", Functor::Else}};
    if (rhs.is_compound() && rhs.size() > 0 && rhs.head().is_symbol()) {
        const auto& h = rhs.head().name();
        auto it = unary.find(h);
        if (it != unary.end()) {
            if (rhs.size() != 2) throw Error("MalformedTerm", h + " takes one formula: " + rel.str());
            c.functor = it->second;
            c.formula = rhs[1];
            return c;
        }
        if (h == "C-if") {
            // (C-if antecedent formula :priority p)
            if (rhs.size() != 5 || !rhs[3].is_symbol(":priority") || !rhs[4].is_number() ||
                rhs[4].value().den != 1)
                throw Error("MalformedTerm", "expected (C-if a f :priority <int>): " + rel.str());
            c.functor = Functor::If;
            c.antecedent = rhs[1];
            c.formula = rhs[2];
            c.priority = static_cast<long>(rhs[4].value().num);
            return c;
        }
    }
    c.functor = Functor::Plain;
    c.formula = rhs;
    return c;
}

bool composable(Functor f1, long p1, Functor f2, long p2) {
    auto additive = [](Functor f) { return f == Functor::Add || f == Functor::Sub; };
    auto multiplicative = [](Functor f) { return f == Functor::Mul || f == Functor::Div; };
    if (additive(f1) && additive(f2)) return true;
    if (multiplicative(f1) && multiplicative(f2)) return true;
    if (f1 == Functor::If && f2 == Functor::If) return p1 != p2;
    if ((f1 == Functor::If && f2 == Functor::Else) || (f1 == Functor::Else && f2 == Functor::If)) return true;
    return false;
}

bool composable(const ComposableRelation& a, const ComposableRelation& b) {
    return composable(a.functor, a.priority, b.functor, b.priority);
}

namespace {

bool by_text(const Term& a, const Term& b) { return a.str() < b.str(); }

Term op(const char* name, std::vector<Term> args) {
    args.insert(args.begin(), Term::symbol(name));
    return Term::list(std::move(args));
}

Term sum_of(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(), by_text);
    if (ts.size() == 1) return ts.front();
    return op("+", std::move(ts));
}

Term product_of(std::vector<Term> ts) {
    std::sort(ts.begin(), ts.end(), by_text);
    if (ts.size() == 1) return ts.front();
    // Built like the reader builds it: the `*` token is a wildcard.
    ts.insert(ts.begin(), Term::wildcard());
    return Term::list(std::move(ts));
}

} // namespace

Composition compose_relations(std::vector<ComposableRelation> rels) {
    if (rels.empty()) throw Error("MalformedTerm", "nothing to compose");
    for (std::size_t i = 0; i < rels.size(); ++i)
        if (rels[i].head != rels[0].head || rels[i].target != rels[0].target)
            throw Error("MalformedTerm", "relations do not share a target");
    std::sort(rels.begin(), rels.end(),
              [](const ComposableRelation& a, const ComposableRelation& b) { return a.source.str() < b.source.str(); });
    const Term head = Term::symbol(rels[0].head);
    const Term& v = rels[0].target;
    if (rels.size() == 1 && rels[0].functor == Functor::Plain) return rels[0].source;
    for (std::size_t i = 0; i < rels.size(); ++i)
        for (std::size_t j = i + 1; j < rels.size(); ++j)
            if (!composable(rels[i], rels[j]))
                return NonComposable{rels[i].source, rels[j].source,
                                     std::string(to_string(rels[i].functor)) + " with " +
                                         to_string(rels[j].functor)};
    Functor f0 = rels[0].functor;
    if (f0 == Functor::Plain)
        return NonComposable{rels[0].source, rels[0].source, "plain relation"};
    if (f0 == Functor::Add || f0 == Functor::Sub) {
        std::vector<Term> plus, minus;
        for (const auto& r : rels) (r.functor == Functor::Add ? plus : minus).push_back(r.formula);
        Term rhs;
        if (minus.empty()) rhs = sum_of(plus);
        else if (plus.empty()) rhs = op("-", {sum_of(minus)});
        else rhs = op("-", {sum_of(plus), sum_of(minus)});
        return Term::list({head, v, rhs});
    }
    if (f0 == Functor::Mul || f0 == Functor::Div) {
        std::vector<Term> num, den;
        for (const auto& r : rels) (r.functor == Functor::Mul ? num : den).push_back(r.formula);
        Term n = num.empty() ? Term::number(1) : product_of(num);
        Term rhs = den.empty() ? n : op("/", {n, product_of(den)});
        return Term::list({head, v, rhs});
    }
    // Selection family.
    std::vector<const ComposableRelation*> ifs;
    const ComposableRelation* else_rel = nullptr;
    for (const auto& r : rels) {
        if (r.functor == Functor::If) ifs.push_back(&r);
        else else_rel = &r;
    }
    if (!else_rel) return NonComposable{ifs.front()->source, ifs.front()->source, "selection without C-else"};
    std::sort(ifs.begin(), ifs.end(), [](auto* a, auto* b) { return a->priority > b->priority; });
    Term rhs = else_rel->formula;
    for (auto it = ifs.rbegin(); it != ifs.rend(); ++it)
        rhs = op("if", {(*it)->antecedent, (*it)->formula, rhs});
    return Term::list({head, v, rhs});
}

namespace {

// `*` reads as the wildcard token; in formula heads it is multiplication.
std::string op_name(const Term& t) {
    if (!t.is_compound() || t.size() == 0) return "";
    if (t.head().is_wildcard()) return "*";
    return t.head().is_symbol() ? t.head().name() : "";
}

int precedence(const Term& t) {
    const auto h = op_name(t);
    if (h.empty()) return 100;
    if (h == "if") return 0;
    if (h == "+" || (h == "-" && t.size() > 2)) return 1;
    if (h == "*" || h == "/") return 2;
    if (h == "-") return 3;
    return 100;
}

std::string infix(const Term& t);

std::string wrap(const Term& t, int min_prec) {
    auto s = infix(t);
    return precedence(t) < min_prec ? "(" + s + ")" : s;
}

std::string infix(const Term& t) {
    const auto h = op_name(t);
    if (h.empty()) return t.str();
    if (h == "==" && t.size() == 3) return infix(t[1]) + " = " + infix(t[2]);
    if (h == "d/dt" && t.size() == 3) return "d/dt " + infix(t[1]) + " = " + infix(t[2]);
    if (h == "if" && t.size() == 4)
        return "if " + infix(t[1]) + " then " + wrap(t[2], 1) + " else " + infix(t[3]);
    if ((h == "+" || h == "*") && t.size() >= 3) {
        std::string out;
        for (std::size_t i = 1; i < t.size(); ++i) {
            if (i > 1) out += h == "+" ? " + " : "*";
            out += wrap(t[i], precedence(t));
        }
        return out;
    }
    if (h == "-" && t.size() == 2) return "-" + wrap(t[1], 3);
    if (h == "-" && t.size() >= 3) {
        std::string out = wrap(t[1], 1);
        for (std::size_t i = 2; i < t.size(); ++i) out += " - " + wrap(t[i], 2);
        return out;
    }
    if (h == "/" && t.size() == 3) return wrap(t[1], 2) + " / " + wrap(t[2], 3);
    return t.str();
}

} // namespace

std::string render_infix(const Term& t) { return infix(t); }

} // namespace compmod
