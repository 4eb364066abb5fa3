#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "compmod/terms.hpp"

namespace compmod {

enum class Functor { Add, Sub, Mul, Div, If, Else, Plain };
const char* to_string(Functor f);

// One equation `(== v rhs)` or `(d/dt v rhs)` split into its parts.
struct ComposableRelation {
    std::string head;  // "==" or "d/dt"
    Term target;
    Functor functor = Functor::Plain;
    long priority = 0;  // If only
    Term antecedent;    // If only
    Term formula;
    Term source;        // the relation as written
};

// nullopt for anything that is not an equation on a single target.
// Throws MalformedTerm for a malformed composable functor.
std::optional<ComposableRelation> classify_relation(const Term& rel);

bool composable(Functor f1, long p1, Functor f2, long p2);
bool composable(const ComposableRelation& a, const ComposableRelation& b);

struct NonComposable {
    Term first;
    Term second;
    std::string reason;
};

using Composition = std::variant<Term, NonComposable>;

// All relations must share head and target.
Composition compose_relations(std::vector<ComposableRelation> rels);

// Infix rendering of formulas and equations, e.g. "d/dt size-1 = births-1 - deaths-1".
std::string render_infix(const Term& t);

} // namespace compmod
