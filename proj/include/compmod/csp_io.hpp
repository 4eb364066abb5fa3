#pragma once

#include <string>
#include <utility>
#include <vector>

#include "compmod/adpcsp.hpp"
#include "compmod/omp.hpp"
#include "compmod/terms.hpp"

namespace compmod {

// Consumes defBPQ, defMagnitude, defMagnitudeOrder and defBPQOrder forms.
// Returns false for any other form.
bool read_ordering_form(const Term& form, std::size_t index, RawOrdering& raw);

struct PreferenceSpec {
    OrderingPtr ordering;
    std::vector<std::pair<Term, std::string>> assignments;  // (assumption pattern, BPQ)
};

// Ordering forms plus (defPreference <pattern> <bpq>). Errors are KbError.
PreferenceSpec parse_preferences(const std::vector<Term>& forms);

// Standalone problem file: ordering forms plus
//   (attribute x (v ...) [:origin t])
//   (activity x ((y v) ...))
//   (nogood ((x v) ...))
//   (compatible (x y ...) ((v w ...) ...))   allowed tuples
//   (preference (x v) bpq)
ADPCSP parse_problem(const std::vector<Term>& forms);

std::string dump_ordering(const BPQOrdering& ord);
// Canonical listing in the problem-file syntax.
std::string dump_csp(const ADPCSP& csp);

} // namespace compmod
