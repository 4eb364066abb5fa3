#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "compmod/error.hpp"

namespace compmod {

using NodeId = std::uint32_t;

enum class NodeKind { Assumption, Derived, Nogood };
const char* to_string(NodeKind k);

struct Literal {
    NodeId node;
    bool positive = true;

    friend bool operator==(const Literal&, const Literal&) = default;
    friend auto operator<=>(const Literal& a, const Literal& b) {
        if (a.node != b.node) return a.node <=> b.node;
        // Positive before negative for a given node.
        return b.positive <=> a.positive;
    }
};

// Sorted, duplicate-free list of literals.
class Environment {
public:
    Environment() = default;
    explicit Environment(std::vector<Literal> lits);

    const std::vector<Literal>& literals() const { return lits_; }
    std::size_t size() const { return lits_.size(); }
    bool empty() const { return lits_.empty(); }
    bool contradictory() const;  // holds both a and ¬a
    bool subset_of(const Environment& other) const;
    bool contains(const Literal& l) const;
    Environment merged(const Environment& other) const;

    friend bool operator==(const Environment&, const Environment&) = default;
    friend bool operator<(const Environment& a, const Environment& b) {
        if (a.lits_.size() != b.lits_.size()) return a.lits_.size() < b.lits_.size();
        return a.lits_ < b.lits_;
    }

private:
    std::vector<Literal> lits_;
};

// Minimal antichain of environments, kept in canonical (size, lexicographic) order.
using Label = std::vector<Environment>;

// Inserts e unless subsumed; drops members e subsumes. Returns true on insert.
bool insert_minimal(Label& l, const Environment& e);
void canonicalise(Label& l);

struct Justification {
    std::vector<Literal> antecedents;
    NodeId consequent;
};

class ATMS {
public:
    ATMS();

    static constexpr NodeId bottom() { return 0; }

    NodeId add_assumption(std::string datum);
    NodeId add_node(std::string datum);
    void add_justification(std::vector<Literal> antecedents, NodeId consequent);
    void add_nogood(std::vector<Literal> literals) { add_justification(std::move(literals), bottom()); }

    std::size_t size() const { return nodes_.size(); }
    NodeKind kind(NodeId n) const;
    const std::string& datum(NodeId n) const;
    const Label& label(NodeId n) const;
    const std::vector<Justification>& justifications() const { return justs_; }
    std::vector<NodeId> assumptions() const;

    bool is_nogood_env(const Environment& e) const;

    // Forward closure of the network under a set of literals. Negative
    // antecedents hold iff the negative literal is in `env`.
    std::vector<bool> closure(const Environment& env) const;

    // From-first-principles label (test oracle). Throws OracleBoundExceeded.
    Label brute_force_label(NodeId n, std::size_t bound = 16) const;
    std::vector<Label> brute_force_labels(std::size_t bound = 16) const;

    std::string env_str(const Environment& e) const;
    std::string label_str(const Label& l) const;
    // One line per node: "<id> <kind> <datum> :label {env...}".
    std::string dump() const;

private:
    struct Node {
        NodeKind kind;
        std::string datum;
        Label label;
        std::vector<std::size_t> consumers;  // justification indices
    };
    std::vector<Node> nodes_;
    std::vector<Justification> justs_;

    void check(NodeId n) const;
    Label weave(const Justification& j) const;
    void propagate(std::vector<std::size_t> work);
    void prune_nogoods();
};

} // namespace compmod
