#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "compmod/terms.hpp"

namespace compmod {

// Validation error tied to a top-level form (0-based index into the input).
class KbError : public Error {
public:
    KbError(std::string kind, const std::string& msg, std::size_t form_index)
        : Error(std::move(kind), msg), form_index_(form_index) {}
    std::size_t form_index() const noexcept { return form_index_; }

private:
    std::size_t form_index_;
};

struct EntityClass {
    std::string name;
    std::optional<std::string> superclass;
    std::vector<std::string> features;
    bool builtin = false;
};

struct ParticipantSpec {
    std::string var;  // without '?'
    std::string type;
    std::optional<std::string> name_hint;
    std::optional<Term> entity_anchor;  // e.g. (size ?p)
};

struct ModelFragment {
    std::string name;
    std::vector<ParticipantSpec> sources;
    std::vector<ParticipantSpec> targets;
    std::vector<Term> structural;  // may contain (not t) only for properties
    std::vector<Term> postconditions;
    std::vector<Term> assumptions;
    std::vector<Term> purpose_required;
    bool from_property = false;

    bool has_negated_conditions() const;
};

struct PropertyDef {
    std::string name;
    std::vector<ParticipantSpec> sources;
    std::vector<Term> conditions;
    Term property;
};

struct Scenario {
    std::string name;
    std::vector<std::pair<std::string, std::string>> participants;  // (name, class)
    std::vector<Term> relations;
};

struct Relevance {
    std::string name;
    std::vector<Term> subjects;
};
struct ModelChoice {
    Term subject;
    std::string name;
};
using AssumptionForm = std::variant<Relevance, ModelChoice>;

// Throws MalformedAssumption.
AssumptionForm parse_assumption(const Term& t);
// Rewrites (relevant-competition a b) to (relevant competition a b).
Term normalise_assumption(const Term& t);

class KnowledgeBase {
public:
    KnowledgeBase();

    const std::vector<PropertyDef>& properties() const { return properties_; }
    const std::vector<ModelFragment>& fragments() const { return fragments_; }
    const std::vector<Scenario>& scenarios() const { return scenarios_; }
    const std::vector<Term>& requirements() const { return requirements_; }
    // defEntity forms read from input (built-ins excluded).
    std::size_t entity_declarations() const { return entity_decls_; }
    const std::map<std::string, EntityClass>& classes() const { return classes_; }

    bool has_class(const std::string& c) const { return classes_.count(c) > 0; }
    // Reflexive-transitive; throws UnknownType.
    bool is_subtype(const std::string& a, const std::string& b) const;
    // Own plus inherited features.
    std::vector<std::string> features(const std::string& c) const;

    // Properties as fragments first, then fragments, in declaration order.
    std::vector<ModelFragment> all_fragments() const;

    // Adds the forms to this KB. Forms are validated as they are read.
    void load(const std::vector<Term>& forms);

private:
    std::map<std::string, EntityClass> classes_;
    std::vector<PropertyDef> properties_;
    std::vector<ModelFragment> fragments_;
    std::vector<Scenario> scenarios_;
    std::vector<Term> requirements_;
    std::size_t entity_decls_ = 0;

    void load_entity(const Term& f, std::size_t idx, std::map<std::string, std::size_t>& seen);
    void load_property(const Term& f, std::size_t idx);
    void load_fragment(const Term& f, std::size_t idx);
    void load_scenario(const Term& f, std::size_t idx);
    void check_name_free(const std::string& name, std::size_t idx) const;
    void check_hierarchy(const std::map<std::string, std::size_t>& seen) const;
    ParticipantSpec read_spec(const Term& t, std::size_t idx) const;
};

KnowledgeBase load_kb(const std::vector<Term>& forms);

ModelFragment property_to_fragment(const PropertyDef& p);

} // namespace compmod
