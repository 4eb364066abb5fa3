#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "compmod/modelspace.hpp"
#include "compmod/omp.hpp"
#include "compmod/terms.hpp"

namespace compmod {

struct Attribute {
    std::string name;
    std::vector<std::string> domain;
    std::optional<Term> origin;     // (relevant ...) or (model <subject> *)
    std::vector<Term> value_terms;  // assumption term per value; (not a) for `no`
};

// (attribute, value) indices.
using AttrValue = std::pair<std::size_t, std::size_t>;

// `target` is active when every pair of `trigger` holds. An empty trigger
// makes the target always active.
struct ActivityConstraint {
    std::size_t target;
    std::vector<AttrValue> trigger;
};

struct CompatibilityConstraint {
    std::vector<AttrValue> forbidden;
};

// Per attribute: value index, or nullopt when unassigned (inactive).
using Assignment = std::vector<std::optional<std::size_t>>;

class ADPCSP {
public:
    std::vector<Attribute> attributes;
    std::vector<ActivityConstraint> activity;
    std::vector<CompatibilityConstraint> compatibility;
    std::vector<std::vector<OMP>> prefs;  // [attribute][value]
    OrderingPtr ordering;

    std::size_t attribute_index(const std::string& name) const;  // UnknownAttribute
    std::size_t value_index(std::size_t attr, const std::string& value) const;  // UnknownValue
    // Fills missing preference slots with empty OMPs.
    void normalise_prefs();
    OMP empty_omp() const { return OMP(ordering); }

    // Least fixpoint of activity propagation over the assigned values.
    std::vector<bool> activated(const Assignment& a) const;
    bool violates_compatibility(const Assignment& a) const;
    OMP preference(const Assignment& a) const;

    std::string assignment_str(const Assignment& a) const;
};

ADPCSP build_adcsp(const ModelSpace& space);

// Patterns are assumption terms; a `no` value is matched by (not <pattern>).
ADPCSP attach_preferences(ADPCSP csp, OrderingPtr ordering,
                          const std::vector<std::pair<Term, std::string>>& assignments);

enum class Verdict { Solution, ActivityViolation, CompatibilityViolation };
const char* to_string(Verdict v);

struct Evaluation {
    Verdict verdict;
    OMP omp;
    std::string detail;
};

Evaluation evaluate(const ADPCSP& csp, const Assignment& a);
// Named form: attribute name -> value name. Throws UnknownAttribute/UnknownValue.
Evaluation evaluate(const ADPCSP& csp, const std::vector<std::pair<std::string, std::string>>& named);

struct Solution {
    Assignment assignment;
    OMP omp;
};

struct SearchEvent {
    enum class Kind { Expand, Accept, Reject, Prune } kind;
    std::size_t node;
    std::string detail;
    const Assignment* assignment = nullptr;  // the node's partial assignment
    const OMP* cp = nullptr;
    const OMP* pp = nullptr;
};

struct SolveStats {
    std::size_t created = 0;
    std::size_t expanded = 0;
    std::size_t pruned = 0;
};

std::vector<Solution> solve(const ADPCSP& csp, std::size_t max_solutions,
                            const std::function<void(const SearchEvent&)>& observer = {},
                            SolveStats* stats = nullptr);

// Exhaustive optimality oracle. Throws OracleBoundExceeded when the number of
// candidate assignments exceeds `bound`.
std::vector<Solution> brute_force_solve(const ADPCSP& csp, std::size_t bound = 2'000'000);

} // namespace compmod
