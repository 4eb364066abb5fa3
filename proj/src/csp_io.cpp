#include "compmod/csp_io.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "compmod/kb.hpp"

namespace compmod {

namespace {

[[noreturn]] void fail(const std::string& kind, const std::string& msg, std::size_t idx) {
    throw KbError(kind, msg, idx);
}

const std::string& symbol_name(const Term& t, const char* what, std::size_t idx) {
    if (!t.is_symbol()) fail("MalformedForm", std::string("expected ") + what + ", got " + t.str(), idx);
    return t.name();
}

// (a op b op c ...) -> consecutive pairs.
void read_chain(const Term& chain, const char* op, std::size_t idx,
                std::vector<std::pair<std::string, std::string>>& out) {
    if (!chain.is_compound() || chain.size() < 3 || chain.size() % 2 == 0)
        fail("MalformedForm", std::string("expected (a ") + op + " b): " + chain.str(), idx);
    for (std::size_t i = 1; i < chain.size(); i += 2)
        if (!chain[i].is_symbol(op)) fail("MalformedForm", std::string("expected ") + op + " in " + chain.str(), idx);
    for (std::size_t i = 0; i + 2 < chain.size(); i += 2)
        out.emplace_back(symbol_name(chain[i], "a name", idx), symbol_name(chain[i + 2], "a name", idx));
}

OrderingPtr finish_ordering(const RawOrdering& raw, std::size_t idx) {
    try {
        return BPQOrdering::validate(raw);
    } catch (const KbError&) {
        throw;
    } catch (const Error& e) {
        std::string msg = e.what();
        auto cut = msg.find(": ");
        throw KbError(e.kind(), cut == std::string::npos ? msg : msg.substr(cut + 2), idx);
    }
}

} // namespace

bool read_ordering_form(const Term& f, std::size_t idx, RawOrdering& raw) {
    if (f.has_head("defBPQ")) {
        if (f.size() != 4 || !f[2].is_symbol(":magnitude"))
            fail("MalformedForm", "expected (defBPQ name :magnitude m): " + f.str(), idx);
        raw.bpqs.emplace_back(symbol_name(f[1], "a BPQ name", idx), symbol_name(f[3], "a magnitude", idx));
        return true;
    }
    if (f.has_head("defMagnitude")) {
        for (std::size_t i = 1; i < f.size(); ++i) raw.magnitudes.push_back(symbol_name(f[i], "a magnitude", idx));
        return true;
    }
    if (f.has_head("defMagnitudeOrder")) {
        for (std::size_t i = 1; i < f.size(); ++i) read_chain(f[i], "<<", idx, raw.magnitude_order);
        return true;
    }
    if (f.has_head("defBPQOrder")) {
        for (std::size_t i = 1; i < f.size(); ++i) read_chain(f[i], "<", idx, raw.bpq_order);
        return true;
    }
    return false;
}

PreferenceSpec parse_preferences(const std::vector<Term>& forms) {
    RawOrdering raw;
    PreferenceSpec out;
    std::vector<std::size_t> pref_idx;
    std::size_t last = 0;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const Term& f = forms[i];
        if (read_ordering_form(f, i, raw)) {
            last = i;
            continue;
        }
        if (f.has_head("defPreference")) {
            if (f.size() != 3) fail("MalformedForm", "expected (defPreference pattern bpq): " + f.str(), i);
            out.assignments.emplace_back(f[1], symbol_name(f[2], "a BPQ", i));
            pref_idx.push_back(i);
            continue;
        }
        fail("UnknownDefForm", f.str(), i);
    }
    out.ordering = finish_ordering(raw, last);
    for (std::size_t k = 0; k < out.assignments.size(); ++k)
        if (!out.ordering->has_bpq(out.assignments[k].second))
            fail("UnknownBPQ", out.assignments[k].second, pref_idx[k]);
    return out;
}

ADPCSP parse_problem(const std::vector<Term>& forms) {
    RawOrdering raw;
    ADPCSP csp;
    std::map<std::string, std::size_t> index;
    std::size_t last = 0;

    auto attr = [&](const Term& t, std::size_t i) {
        auto it = index.find(symbol_name(t, "an attribute", i));
        if (it == index.end()) fail("UnknownAttribute", t.str(), i);
        return it->second;
    };
    auto value = [&](std::size_t x, const Term& t, std::size_t i) {
        const auto& d = csp.attributes[x].domain;
        auto it = std::find(d.begin(), d.end(), t.str());
        if (it == d.end()) fail("UnknownValue", csp.attributes[x].name + ":" + t.str(), i);
        return static_cast<std::size_t>(it - d.begin());
    };
    auto pairs = [&](const Term& list, std::size_t i) {
        if (!list.is_compound()) fail("MalformedForm", "expected ((x v) ...): " + list.str(), i);
        std::vector<AttrValue> out;
        for (const auto& p : list.items()) {
            if (!p.is_compound() || p.size() != 2) fail("MalformedForm", "expected (x v): " + p.str(), i);
            std::size_t x = attr(p[0], i);
            out.emplace_back(x, value(x, p[1], i));
        }
        std::sort(out.begin(), out.end());
        return out;
    };

    // Attributes first so that constraints may precede them.
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const Term& f = forms[i];
        if (!f.has_head("attribute")) continue;
        if (!(f.size() == 3 || (f.size() == 5 && f[3].is_symbol(":origin"))) || !f[2].is_compound())
            fail("MalformedForm", "expected (attribute x (v ...) [:origin t]): " + f.str(), i);
        Attribute a;
        a.name = symbol_name(f[1], "an attribute name", i);
        if (index.count(a.name)) fail("DuplicateName", a.name, i);
        for (const auto& v : f[2].items()) {
            if (!v.is_atom()) fail("MalformedForm", "value " + v.str(), i);
            a.domain.push_back(v.str());
            if (std::count(a.domain.begin(), a.domain.end(), a.domain.back()) > 1)
                fail("DuplicateName", a.name + ":" + a.domain.back(), i);
        }
        if (f.size() == 5) {
            a.origin = f[4];
            for (const auto& v : a.domain) {
                if (f[4].has_head("model") && f[4].size() == 3)
                    a.value_terms.push_back(Term::list({f[4][0], f[4][1], Term::symbol(v)}));
                else if (v == "yes")
                    a.value_terms.push_back(f[4]);
                else if (v == "no")
                    a.value_terms.push_back(Term::list({Term::symbol("not"), f[4]}));
                else
                    fail("MalformedForm", "origin does not fit value " + v, i);
            }
        }
        index.emplace(a.name, csp.attributes.size());
        csp.attributes.push_back(std::move(a));
    }
    std::vector<std::tuple<std::size_t, std::size_t, std::string, std::size_t>> prefs;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        const Term& f = forms[i];
        if (f.has_head("attribute")) continue;
        if (read_ordering_form(f, i, raw)) {
            last = i;
        } else if (f.has_head("activity")) {
            if (f.size() != 3) fail("MalformedForm", "expected (activity x ((y v) ...)): " + f.str(), i);
            std::size_t x = attr(f[1], i);
            auto trig = pairs(f[2], i);
            for (const auto& [y, v] : trig)
                if (y == x) fail("MalformedForm", "attribute triggers itself: " + f.str(), i);
            csp.activity.push_back({x, std::move(trig)});
        } else if (f.has_head("nogood")) {
            if (f.size() != 2) fail("MalformedForm", "expected (nogood ((x v) ...)): " + f.str(), i);
            csp.compatibility.push_back({pairs(f[1], i)});
        } else if (f.has_head("compatible")) {
            if (f.size() != 3 || !f[1].is_compound() || !f[2].is_compound())
                fail("MalformedForm", "expected (compatible (x ...) ((v ...) ...)): " + f.str(), i);
            std::vector<std::size_t> scope;
            for (const auto& t : f[1].items()) scope.push_back(attr(t, i));
            std::set<std::vector<std::size_t>> allowed;
            for (const auto& tup : f[2].items()) {
                if (!tup.is_compound() || tup.size() != scope.size())
                    fail("MalformedForm", "tuple does not fit scope: " + tup.str(), i);
                std::vector<std::size_t> vals;
                for (std::size_t k = 0; k < scope.size(); ++k) vals.push_back(value(scope[k], tup[k], i));
                allowed.insert(vals);
            }
            std::vector<std::size_t> vals(scope.size(), 0);
            for (;;) {
                if (!allowed.count(vals)) {
                    std::vector<AttrValue> forb;
                    for (std::size_t k = 0; k < scope.size(); ++k) forb.emplace_back(scope[k], vals[k]);
                    std::sort(forb.begin(), forb.end());
                    csp.compatibility.push_back({std::move(forb)});
                }
                std::size_t k = 0;
                for (; k < scope.size(); ++k) {
                    if (++vals[k] < csp.attributes[scope[k]].domain.size()) break;
                    vals[k] = 0;
                }
                if (k == scope.size()) break;
            }
        } else if (f.has_head("preference")) {
            if (f.size() != 3 || !f[1].is_compound() || f[1].size() != 2)
                fail("MalformedForm", "expected (preference (x v) bpq): " + f.str(), i);
            std::size_t x = attr(f[1][0], i);
            prefs.emplace_back(x, value(x, f[1][1], i), symbol_name(f[2], "a BPQ", i), i);
        } else {
            fail("UnknownDefForm", f.str(), i);
        }
    }
    csp.ordering = finish_ordering(raw, last);
    csp.normalise_prefs();
    for (const auto& [x, v, bpq, i] : prefs) {
        if (!csp.ordering->has_bpq(bpq)) fail("UnknownBPQ", bpq, i);
        csp.prefs[x][v] = combine(csp.prefs[x][v], OMP::single(csp.ordering, bpq));
    }
    return csp;
}

std::string dump_ordering(const BPQOrdering& ord) {
    const auto& raw = ord.raw();
    std::string out;
    std::set<std::string> used;
    for (const auto& [b, m] : raw.bpqs) used.insert(m);
    for (const auto& m : raw.magnitudes)
        if (!used.count(m)) out += "(defMagnitude " + m + ")\n";
    for (const auto& [b, m] : raw.bpqs) out += "(defBPQ " + b + " :magnitude " + m + ")\n";
    for (const auto& [lo, hi] : raw.magnitude_order) out += "(defMagnitudeOrder (" + lo + " << " + hi + "))\n";
    for (const auto& [lo, hi] : raw.bpq_order) out += "(defBPQOrder (" + lo + " < " + hi + "))\n";
    return out;
}

std::string dump_csp(const ADPCSP& csp) {
    std::string out;
    if (csp.ordering) out += dump_ordering(*csp.ordering);
    auto pair_list = [&](const std::vector<AttrValue>& ps) {
        std::string s = "(";
        for (std::size_t k = 0; k < ps.size(); ++k) {
            if (k) s += ' ';
            s += "(" + csp.attributes[ps[k].first].name + " " + csp.attributes[ps[k].first].domain[ps[k].second] + ")";
        }
        return s + ")";
    };
    for (const auto& a : csp.attributes) {
        out += "(attribute " + a.name + " (";
        for (std::size_t k = 0; k < a.domain.size(); ++k) out += (k ? " " : "") + a.domain[k];
        out += ")";
        if (a.origin) out += " :origin " + a.origin->str();
        out += ")\n";
    }
    for (const auto& c : csp.activity)
        out += "(activity " + csp.attributes[c.target].name + " " + pair_list(c.trigger) + ")\n";
    for (const auto& c : csp.compatibility) out += "(nogood " + pair_list(c.forbidden) + ")\n";
    if (csp.ordering)
        for (std::size_t x = 0; x < csp.attributes.size() && x < csp.prefs.size(); ++x)
            for (std::size_t v = 0; v < csp.prefs[x].size(); ++v)
                for (std::size_t b = 0; b < csp.ordering->bpq_count(); ++b)
                    for (unsigned k = 0; k < csp.prefs[x][v].count(b); ++k)
                        out += "(preference (" + csp.attributes[x].name + " " + csp.attributes[x].domain[v] + ") " +
                               csp.ordering->bpq_name(b) + ")\n";
    return out;
}

} // namespace compmod
