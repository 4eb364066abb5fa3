// Random instance generators and independent oracles shared by the unit
// and acceptance tests.
#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <sstream>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "compmod/adpcsp.hpp"
#include "compmod/atms.hpp"
#include "compmod/omp.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline std::string corpus_path(const std::string& name) { return std::string(COMPMOD_CORPUS_DIR) + "/" + name; }

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}
inline bool chance(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// ---------------------------------------------------------------- orderings

// Edges only go from lower to higher index, so every draw is acyclic.
inline compmod::OrderingPtr random_ordering(Rng& rng, std::size_t max_mags = 3, std::size_t max_per_mag = 4) {
    compmod::RawOrdering raw;
    std::size_t nm = uniform(rng, 1, max_mags);
    for (std::size_t m = 0; m < nm; ++m) {
        std::string mag = "m" + std::to_string(m);
        std::size_t nb = uniform(rng, 1, max_per_mag);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < nb; ++i) {
            names.push_back("b" + std::to_string(m) + std::to_string(i));
            raw.bpqs.emplace_back(names.back(), mag);
        }
        for (std::size_t i = 0; i < nb; ++i)
            for (std::size_t j = i + 1; j < nb; ++j)
                if (chance(rng, 0.4)) raw.bpq_order.emplace_back(names[i], names[j]);
    }
    for (std::size_t i = 0; i < nm; ++i)
        for (std::size_t j = i + 1; j < nm; ++j)
            if (chance(rng, 0.5)) raw.magnitude_order.emplace_back("m" + std::to_string(i), "m" + std::to_string(j));
    return compmod::BPQOrdering::validate(raw);
}

inline compmod::OMP random_omp(Rng& rng, const compmod::OrderingPtr& ord, unsigned max_count = 3) {
    compmod::OMP p(ord);
    for (std::size_t b = 0; b < ord->bpq_count(); ++b)
        if (chance(rng, 0.5)) p.add(b, static_cast<unsigned>(uniform(rng, 0, max_count)));
    return p;
}

// The nine-BPQ, three-magnitude example ordering: O2 << O1, O2 << O3.
inline compmod::OrderingPtr example_ordering() {
    compmod::RawOrdering raw;
    for (const char* b : {"b11", "b12", "b13", "b14", "b15"}) raw.bpqs.emplace_back(b, "O1");
    for (const char* b : {"b21", "b22", "b23"}) raw.bpqs.emplace_back(b, "O2");
    raw.bpqs.emplace_back("b31", "O3");
    raw.magnitude_order = {{"O2", "O1"}, {"O2", "O3"}};
    raw.bpq_order = {{"b12", "b11"}, {"b13", "b11"}, {"b14", "b12"}, {"b15", "b12"}, {"b15", "b13"}, {"b22", "b21"}};
    return compmod::BPQOrdering::validate(raw);
}

// The two-level order written out from its definition, using a closure
// computed here rather than the library's.
class OmpOracle {
public:
    explicit OmpOracle(const compmod::BPQOrdering& ord) : ord_(ord) {
        const auto& raw = ord.raw();
        std::size_t n = ord.bpq_count(), m = ord.magnitude_count();
        lt_.assign(n, std::vector<bool>(n, false));
        mlt_.assign(m, std::vector<bool>(m, false));
        for (const auto& [lo, hi] : raw.bpq_order) lt_[ord.bpq_index(lo)][ord.bpq_index(hi)] = true;
        for (const auto& [lo, hi] : raw.magnitude_order) mlt_[ord.magnitude_index(lo)][ord.magnitude_index(hi)] = true;
        close(lt_);
        close(mlt_);
    }

    bool leq_in(const compmod::OMP& p1, const compmod::OMP& p2, std::size_t mag) const {
        for (std::size_t bi : members(mag)) {
            unsigned s1 = p1.count(bi), s2 = p2.count(bi);
            for (std::size_t bj : members(mag))
                if (lt_[bi][bj]) {
                    s1 += p1.count(bj);
                    s2 += p2.count(bj);
                }
            if (s1 > s2) return false;
        }
        return true;
    }
    bool less_in(const compmod::OMP& p1, const compmod::OMP& p2, std::size_t mag) const {
        return leq_in(p1, p2, mag) && !leq_in(p2, p1, mag);
    }
    bool leq(const compmod::OMP& p1, const compmod::OMP& p2) const {
        for (std::size_t i = 0; i < ord_.magnitude_count(); ++i) {
            if (leq_in(p1, p2, i)) continue;
            bool rescued = false;
            for (std::size_t j = 0; j < ord_.magnitude_count() && !rescued; ++j)
                rescued = mlt_[i][j] && less_in(p1, p2, j);
            if (!rescued) return false;
        }
        return true;
    }
    compmod::PrefCmp compare(const compmod::OMP& p1, const compmod::OMP& p2) const {
        bool a = leq(p1, p2), b = leq(p2, p1);
        if (a && b) return compmod::PrefCmp::Equal;
        if (a) return compmod::PrefCmp::Less;
        if (b) return compmod::PrefCmp::Greater;
        return compmod::PrefCmp::Incomparable;
    }

private:
    const compmod::BPQOrdering& ord_;
    std::vector<std::vector<bool>> lt_, mlt_;

    std::vector<std::size_t> members(std::size_t mag) const {
        std::vector<std::size_t> out;
        for (std::size_t b = 0; b < ord_.bpq_count(); ++b)
            if (ord_.magnitude_of(b) == mag) out.push_back(b);
        return out;
    }
    static void close(std::vector<std::vector<bool>>& r) {
        for (std::size_t k = 0; k < r.size(); ++k)
            for (std::size_t i = 0; i < r.size(); ++i)
                for (std::size_t j = 0; j < r.size(); ++j)
                    if (r[i][k] && r[k][j]) r[i][j] = true;
    }
};

// -------------------------------------------------------------------- ATMS

struct Network {
    std::size_t assumptions = 0;
    std::size_t derived = 0;
    // Node ids as the ATMS assigns them: 0 is ⊥, then assumptions, then derived.
    std::vector<compmod::Justification> justifications;
};

inline Network random_network(Rng& rng, std::size_t k, std::size_t max_justs = 30) {
    Network net;
    net.assumptions = k;
    net.derived = uniform(rng, 1, 8);
    std::size_t nj = uniform(rng, 1, max_justs);
    for (std::size_t i = 0; i < nj; ++i) {
        compmod::Justification j;
        bool nogood = chance(rng, 0.15);
        j.consequent = nogood ? 0 : static_cast<compmod::NodeId>(1 + k + uniform(rng, 0, net.derived - 1));
        std::size_t na = uniform(rng, nogood ? 1 : 0, 3);
        for (std::size_t a = 0; a < na; ++a) {
            if (chance(rng, 0.65) || net.derived == 0) {
                auto node = static_cast<compmod::NodeId>(1 + uniform(rng, 0, k - 1));
                j.antecedents.push_back({node, !chance(rng, 0.25)});
            } else {
                auto node = static_cast<compmod::NodeId>(1 + k + uniform(rng, 0, net.derived - 1));
                if (node != j.consequent) j.antecedents.push_back({node, true});
            }
        }
        net.justifications.push_back(std::move(j));
    }
    return net;
}

inline compmod::ATMS build_network(const Network& net, const std::vector<std::size_t>& order) {
    compmod::ATMS atms;
    for (std::size_t i = 0; i < net.assumptions; ++i) atms.add_assumption("a" + std::to_string(i + 1));
    for (std::size_t i = 0; i < net.derived; ++i) atms.add_node("n" + std::to_string(i + 1));
    for (std::size_t idx : order) atms.add_justification(net.justifications[idx].antecedents, net.justifications[idx].consequent);
    return atms;
}

// Forward chaining written independently of the library.
inline std::vector<bool> derive(const Network& net, const std::vector<int>& signs) {
    // signs[a] for assumption a (0-based): +1 holds, -1 negated, 0 absent.
    std::size_t total = 1 + net.assumptions + net.derived;
    std::vector<bool> in(total, false);
    for (std::size_t a = 0; a < net.assumptions; ++a) in[1 + a] = signs[a] > 0;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& j : net.justifications) {
            if (in[j.consequent]) continue;
            bool ok = true;
            for (const auto& l : j.antecedents) {
                bool holds = l.positive ? bool(in[l.node]) : signs[l.node - 1] < 0;
                if (!holds) { ok = false; break; }
            }
            if (ok) in[j.consequent] = changed = true;
        }
    }
    return in;
}

inline std::vector<int> signs_of(const compmod::Environment& e, std::size_t k) {
    std::vector<int> s(k, 0);
    for (const auto& l : e.literals()) s[l.node - 1] = l.positive ? 1 : -1;
    return s;
}

inline compmod::Environment env_of(const std::vector<int>& signs) {
    std::vector<compmod::Literal> lits;
    for (std::size_t a = 0; a < signs.size(); ++a)
        if (signs[a]) lits.push_back({static_cast<compmod::NodeId>(a + 1), signs[a] > 0});
    return compmod::Environment(lits);
}

inline bool subset(const compmod::Environment& a, const compmod::Environment& b) {
    return std::includes(b.literals().begin(), b.literals().end(), a.literals().begin(), a.literals().end());
}

// Minimal environments per node, from all 3^k signed environments. An
// environment is minimal when dropping any one literal loses the node (or
// consistency), which is enough because derivation is monotone.
inline std::vector<std::set<std::vector<compmod::Literal>>> oracle_labels(const Network& net) {
    std::size_t k = net.assumptions, total = 1 + k + net.derived;
    std::size_t codes = 1;
    for (std::size_t i = 0; i < k; ++i) codes *= 3;
    std::vector<std::size_t> pow3(k, 1);
    for (std::size_t i = 1; i < k; ++i) pow3[i] = pow3[i - 1] * 3;
    auto signs_at = [&](std::size_t code) {
        std::vector<int> s(k, 0);
        for (std::size_t i = 0; i < k; ++i, code /= 3) s[i] = code % 3 == 0 ? 0 : (code % 3 == 1 ? 1 : -1);
        return s;
    };
    std::vector<std::uint8_t> in(codes * total);
    for (std::size_t c = 0; c < codes; ++c) {
        auto d = derive(net, signs_at(c));
        for (std::size_t n = 0; n < total; ++n) in[c * total + n] = d[n];
    }
    auto holds = [&](std::size_t c, std::size_t n) {
        return in[c * total + n] && (n == 0 || !in[c * total]);
    };
    std::vector<std::set<std::vector<compmod::Literal>>> out(total);
    for (std::size_t c = 0; c < codes; ++c) {
        for (std::size_t n = 0; n < total; ++n) {
            if (!holds(c, n)) continue;
            bool minimal = true;
            for (std::size_t i = 0, rest = c; i < k && minimal; ++i, rest /= 3)
                if (rest % 3) minimal = !holds(c - (rest % 3) * pow3[i], n);
            if (minimal) out[n].insert(env_of(signs_at(c)).literals());
        }
    }
    return out;
}

inline std::set<std::vector<compmod::Literal>> as_set(const compmod::Label& l) {
    std::set<std::vector<compmod::Literal>> out;
    for (const auto& e : l) out.insert(e.literals());
    return out;
}

// --------------------------------------------------------------------- CSP

inline compmod::ADPCSP random_csp(Rng& rng, std::size_t max_attrs = 8, std::size_t max_vals = 3) {
    compmod::ADPCSP csp;
    csp.ordering = random_ordering(rng, 3, 3);
    std::size_t n = uniform(rng, 1, max_attrs);
    for (std::size_t i = 0; i < n; ++i) {
        compmod::Attribute a;
        a.name = "x" + std::to_string(i + 1);
        std::size_t d = uniform(rng, 1, max_vals);
        for (std::size_t v = 0; v < d; ++v) a.domain.push_back("v" + std::to_string(v));
        csp.attributes.push_back(std::move(a));
    }
    for (std::size_t x = 0; x < n; ++x) {
        if (x == 0 || chance(rng, 0.35)) {
            csp.activity.push_back({x, {}});
            continue;
        }
        std::size_t nt = uniform(rng, 1, 2);
        for (std::size_t t = 0; t < nt; ++t) {
            std::vector<compmod::AttrValue> trig;
            std::size_t len = uniform(rng, 1, 2);
            for (std::size_t l = 0; l < len; ++l) {
                std::size_t y = uniform(rng, 0, n - 1);
                if (y == x || std::any_of(trig.begin(), trig.end(), [&](auto& p) { return p.first == y; })) continue;
                trig.emplace_back(y, uniform(rng, 0, csp.attributes[y].domain.size() - 1));
            }
            if (trig.empty()) continue;
            std::sort(trig.begin(), trig.end());
            csp.activity.push_back({x, std::move(trig)});
        }
    }
    std::size_t nc = uniform(rng, 0, 5);
    for (std::size_t c = 0; c < nc; ++c) {
        std::vector<compmod::AttrValue> forb;
        std::size_t len = uniform(rng, 1, 3);
        for (std::size_t l = 0; l < len; ++l) {
            std::size_t y = uniform(rng, 0, n - 1);
            if (std::any_of(forb.begin(), forb.end(), [&](auto& p) { return p.first == y; })) continue;
            forb.emplace_back(y, uniform(rng, 0, csp.attributes[y].domain.size() - 1));
        }
        std::sort(forb.begin(), forb.end());
        csp.compatibility.push_back({std::move(forb)});
    }
    csp.normalise_prefs();
    for (std::size_t x = 0; x < n; ++x)
        for (auto& p : csp.prefs[x]) {
            if (chance(rng, 0.3)) continue;
            p = compmod::OMP(csp.ordering);
            p.add(uniform(rng, 0, csp.ordering->bpq_count() - 1), static_cast<unsigned>(uniform(rng, 1, 2)));
        }
    return csp;
}

// Valid solutions by direct enumeration: an attribute is assigned exactly
// when the least fixpoint of the activity rules activates it.
inline std::vector<compmod::Assignment> oracle_valid(const compmod::ADPCSP& csp) {
    std::size_t n = csp.attributes.size();
    std::vector<compmod::Assignment> out;
    compmod::Assignment a(n);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == n) {
            std::vector<bool> act(n, false);
            for (bool grown = true; grown;) {
                grown = false;
                for (const auto& c : csp.activity) {
                    if (act[c.target]) continue;
                    bool ok = true;
                    for (const auto& [y, v] : c.trigger) ok = ok && act[y] && a[y] && *a[y] == v;
                    if (ok) act[c.target] = grown = true;
                }
            }
            for (std::size_t x = 0; x < n; ++x)
                if (act[x] != a[x].has_value()) return;
            for (const auto& c : csp.compatibility) {
                bool all = true;
                for (const auto& [y, v] : c.forbidden) all = all && a[y] && *a[y] == v;
                if (all) return;
            }
            out.push_back(a);
            return;
        }
        a[i].reset();
        rec(i + 1);
        for (std::size_t v = 0; v < csp.attributes[i].domain.size(); ++v) {
            a[i] = v;
            rec(i + 1);
        }
        a[i].reset();
    };
    rec(0);
    return out;
}

inline compmod::OMP oracle_pref(const compmod::ADPCSP& csp, const compmod::Assignment& a) {
    compmod::OMP p(csp.ordering);
    for (std::size_t x = 0; x < a.size(); ++x)
        if (a[x])
            for (std::size_t b = 0; b < csp.ordering->bpq_count(); ++b) p.add(b, csp.prefs[x][*a[x]].count(b));
    return p;
}

inline std::set<compmod::Assignment> oracle_maximal(const compmod::ADPCSP& csp) {
    OmpOracle o(*csp.ordering);
    auto valid = oracle_valid(csp);
    // Many assignments share a preference; compare the distinct ones.
    std::map<std::string, compmod::OMP> distinct;
    std::vector<std::string> keys;
    for (const auto& a : valid) {
        auto p = oracle_pref(csp, a);
        keys.push_back(p.str());
        distinct.emplace(keys.back(), p);
    }
    std::set<std::string> maximal;
    for (const auto& [k, p] : distinct) {
        bool dominated = false;
        for (const auto& [k2, q] : distinct)
            if (o.compare(q, p) == compmod::PrefCmp::Greater) { dominated = true; break; }
        if (!dominated) maximal.insert(k);
    }
    std::set<compmod::Assignment> out;
    for (std::size_t i = 0; i < valid.size(); ++i)
        if (maximal.count(keys[i])) out.insert(valid[i]);
    return out;
}

} // namespace testsupport
