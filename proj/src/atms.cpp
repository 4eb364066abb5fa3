#include "compmod/atms.hpp"

#include <algorithm>
#include <deque>

namespace compmod {

const char* to_string(NodeKind k) {
    switch (k) {
    case NodeKind::Assumption: return "assumption";
    case NodeKind::Derived: return "node";
    case NodeKind::Nogood: return "nogood";
    }
    return "?";
}

Environment::Environment(std::vector<Literal> lits) : lits_(std::move(lits)) {
    std::sort(lits_.begin(), lits_.end());
    lits_.erase(std::unique(lits_.begin(), lits_.end()), lits_.end());
}

bool Environment::contradictory() const {
    for (std::size_t i = 1; i < lits_.size(); ++i)
        if (lits_[i].node == lits_[i - 1].node) return true;
    return false;
}

bool Environment::subset_of(const Environment& o) const {
    if (lits_.size() > o.lits_.size()) return false;
    return std::includes(o.lits_.begin(), o.lits_.end(), lits_.begin(), lits_.end());
}

bool Environment::contains(const Literal& l) const {
    return std::binary_search(lits_.begin(), lits_.end(), l);
}

Environment Environment::merged(const Environment& o) const {
    Environment e;
    e.lits_.reserve(lits_.size() + o.lits_.size());
    std::set_union(lits_.begin(), lits_.end(), o.lits_.begin(), o.lits_.end(),
                   std::back_inserter(e.lits_));
    return e;
}

bool insert_minimal(Label& l, const Environment& e) {
    for (const auto& x : l)
        if (x.subset_of(e)) return false;
    l.erase(std::remove_if(l.begin(), l.end(), [&](const Environment& x) { return e.subset_of(x); }),
            l.end());
    l.insert(std::upper_bound(l.begin(), l.end(), e), e);
    return true;
}

void canonicalise(Label& l) {
    Label out;
    std::sort(l.begin(), l.end());
    for (const auto& e : l) insert_minimal(out, e);
    l = std::move(out);
}

ATMS::ATMS() { nodes_.push_back({NodeKind::Nogood, "⊥", {}, {}}); }

NodeId ATMS::add_assumption(std::string datum) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    Environment self({Literal{id, true}});
    Label l;
    if (!is_nogood_env(self)) l.push_back(self);
    nodes_.push_back({NodeKind::Assumption, std::move(datum), std::move(l), {}});
    return id;
}

NodeId ATMS::add_node(std::string datum) {
    NodeId id = static_cast<NodeId>(nodes_.size());
    nodes_.push_back({NodeKind::Derived, std::move(datum), {}, {}});
    return id;
}

void ATMS::check(NodeId n) const {
    if (n >= nodes_.size()) throw Error("UnknownNode", "node " + std::to_string(n));
}

NodeKind ATMS::kind(NodeId n) const {
    check(n);
    return nodes_[n].kind;
}

const std::string& ATMS::datum(NodeId n) const {
    check(n);
    return nodes_[n].datum;
}

const Label& ATMS::label(NodeId n) const {
    check(n);
    return nodes_[n].label;
}

std::vector<NodeId> ATMS::assumptions() const {
    std::vector<NodeId> out;
    for (NodeId i = 0; i < nodes_.size(); ++i)
        if (nodes_[i].kind == NodeKind::Assumption) out.push_back(i);
    return out;
}

bool ATMS::is_nogood_env(const Environment& e) const {
    for (const auto& ng : nodes_[bottom()].label)
        if (ng.subset_of(e)) return true;
    return false;
}

void ATMS::add_justification(std::vector<Literal> antecedents, NodeId consequent) {
    check(consequent);
    if (nodes_[consequent].kind == NodeKind::Assumption)
        throw Error("AssumptionConsequent", "assumption " + nodes_[consequent].datum +
                                                " cannot be a consequent");
    for (const auto& l : antecedents) {
        check(l.node);
        if (!l.positive && nodes_[l.node].kind != NodeKind::Assumption)
            throw Error("NegatedDerivedAntecedent", nodes_[l.node].datum);
        if (l.node == bottom()) throw Error("MalformedJustification", "⊥ used as antecedent");
    }
    std::size_t j = justs_.size();
    justs_.push_back({std::move(antecedents), consequent});
    for (const auto& l : justs_[j].antecedents) {
        auto& cons = nodes_[l.node].consumers;
        if (cons.empty() || cons.back() != j) cons.push_back(j);
    }
    propagate({j});
}

Label ATMS::weave(const Justification& j) const {
    Label acc;
    if (!is_nogood_env(Environment())) acc.push_back(Environment());
    for (const auto& lit : j.antecedents) {
        Label next;
        if (!lit.positive) {
            Environment neg({lit});
            for (const auto& e : acc) {
                auto m = e.merged(neg);
                if (!m.contradictory() && !is_nogood_env(m)) insert_minimal(next, m);
            }
        } else {
            for (const auto& e : acc)
                for (const auto& f : nodes_[lit.node].label) {
                    auto m = e.merged(f);
                    if (!m.contradictory() && !is_nogood_env(m)) insert_minimal(next, m);
                }
        }
        acc = std::move(next);
        if (acc.empty()) break;
    }
    return acc;
}

void ATMS::propagate(std::vector<std::size_t> initial) {
    std::deque<std::size_t> work(initial.begin(), initial.end());
    while (!work.empty()) {
        std::size_t j = work.front();
        work.pop_front();
        const auto& just = justs_[j];
        NodeId c = just.consequent;
        Label woven = weave(just);
        Label& lab = nodes_[c].label;
        bool changed = false;
        for (const auto& e : woven)
            if (insert_minimal(lab, e)) changed = true;
        if (!changed) continue;
        if (c == bottom()) {
            prune_nogoods();
            // Pruning can only shrink labels, but justifications of ⊥ may
            // now weave differently; nothing else needs revisiting.
            continue;
        }
        for (auto k : nodes_[c].consumers) work.push_back(k);
    }
}

void ATMS::prune_nogoods() {
    for (NodeId i = 1; i < nodes_.size(); ++i) {
        auto& l = nodes_[i].label;
        l.erase(std::remove_if(l.begin(), l.end(), [&](const Environment& e) { return is_nogood_env(e); }),
                l.end());
    }
}

std::vector<bool> ATMS::closure(const Environment& env) const {
    std::vector<bool> in(nodes_.size(), false);
    std::vector<bool> neg(nodes_.size(), false);
    for (const auto& l : env.literals()) {
        if (l.node >= nodes_.size()) continue;
        if (l.positive) {
            if (nodes_[l.node].kind == NodeKind::Assumption) in[l.node] = true;
        } else {
            neg[l.node] = true;
        }
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& j : justs_) {
            if (in[j.consequent]) continue;
            bool ok = true;
            for (const auto& l : j.antecedents)
                if (l.positive ? !in[l.node] : !neg[l.node]) { ok = false; break; }
            if (ok) { in[j.consequent] = true; changed = true; }
        }
    }
    return in;
}

std::vector<Label> ATMS::brute_force_labels(std::size_t bound) const {
    auto as = assumptions();
    if (as.size() > bound)
        throw Error("OracleBoundExceeded", std::to_string(as.size()) + " assumptions exceed bound " +
                                              std::to_string(bound));
    std::size_t k = as.size();
    std::vector<Label> deriving(nodes_.size());
    std::vector<int> digit(k, 0);  // 0 absent, 1 positive, 2 negative
    for (;;) {
        std::vector<Literal> lits;
        for (std::size_t i = 0; i < k; ++i)
            if (digit[i]) lits.push_back({as[i], digit[i] == 1});
        Environment e(std::move(lits));
        auto in = closure(e);
        for (NodeId n = 0; n < nodes_.size(); ++n)
            if (in[n]) insert_minimal(deriving[n], e);
        std::size_t i = 0;
        while (i < k && digit[i] == 2) digit[i++] = 0;
        if (i == k) break;
        ++digit[i];
    }
    const Label& nogoods = deriving[bottom()];
    for (NodeId n = 1; n < nodes_.size(); ++n) {
        auto& l = deriving[n];
        l.erase(std::remove_if(l.begin(), l.end(),
                               [&](const Environment& e) {
                                   for (const auto& ng : nogoods)
                                       if (ng.subset_of(e)) return true;
                                   return false;
                               }),
                l.end());
    }
    return deriving;
}

Label ATMS::brute_force_label(NodeId n, std::size_t bound) const {
    check(n);
    return brute_force_labels(bound)[n];
}

std::string ATMS::env_str(const Environment& e) const {
    std::string out = "{";
    for (std::size_t i = 0; i < e.size(); ++i) {
        if (i) out += ' ';
        const auto& l = e.literals()[i];
        out += l.positive ? nodes_[l.node].datum : "(not " + nodes_[l.node].datum + ")";
    }
    return out + "}";
}

std::string ATMS::label_str(const Label& l) const {
    std::string out = "{";
    for (std::size_t i = 0; i < l.size(); ++i) {
        if (i) out += ' ';
        out += env_str(l[i]);
    }
    return out + "}";
}

std::string ATMS::dump() const {
    std::string out;
    for (NodeId i = 0; i < nodes_.size(); ++i) {
        out += std::to_string(i) + " " + to_string(nodes_[i].kind) + " " + nodes_[i].datum +
               " :label " + label_str(nodes_[i].label) + "\n";
    }
    return out;
}

} // namespace compmod
