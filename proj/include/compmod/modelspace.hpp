#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "compmod/atms.hpp"
#include "compmod/compose.hpp"
#include "compmod/kb.hpp"
#include "compmod/terms.hpp"

namespace compmod {

struct Application {
    std::string fragment;
    Substitution sigma;  // sources and targets
    NodeId node;
    std::vector<Term> purpose_required;  // instantiated
};

// How an assumption node takes part in the CSP translation.
struct AssumptionInfo {
    Term term;
    bool relevance = false;
    std::string class_key;  // own printed term for relevance, printed subject for models
    std::string model_name;
    std::vector<Term> subjects;
};

class ModelSpace {
public:
    ATMS atms;
    std::map<Term, NodeId> participant_nodes;
    std::map<Term, NodeId> relation_nodes;
    std::map<Term, NodeId> assumption_nodes;
    std::map<std::pair<std::string, std::string>, NodeId> application_nodes;

    std::vector<Term> participant_order;  // creation order
    std::map<Term, std::string> participant_types;
    std::vector<NodeId> assumption_order;
    std::map<NodeId, AssumptionInfo> assumption_info;
    std::vector<Application> applications;
    std::set<NodeId> premises;
    std::vector<Term> goals;

    std::optional<NodeId> find_node(const Term& t) const;
    // Complementary literals for one literal (¬a for a relevance, the
    // sibling models for a model choice, +a for ¬a).
    std::vector<Literal> complements(const Literal& l) const;
    // Holds a and ¬a, or two models of one subject.
    bool class_contradictory(const Environment& e) const;
    // Minimal environments that falsify every environment of `l`.
    Label negation_environments(const Label& l) const;

    // Canonical listing: nodes, justifications, labels.
    std::string dump() const;
};

struct GenerateOptions {
    std::size_t max_applications = 200000;
};

std::vector<Substitution> match_fragment(const ModelFragment& fragment, const ModelSpace& space,
                                         const KnowledgeBase& kb);

// Builds the space to fixpoint and records all inconsistencies.
ModelSpace generate_model_space(const KnowledgeBase& kb, const Scenario& scenario,
                                const std::vector<Term>& goals = {}, const GenerateOptions& opts = {});

void detect_inconsistencies(ModelSpace& space);

struct ScenarioModel {
    std::vector<Term> participants;
    std::vector<Term> relations;
};

// `assumptions` holds (relevant ...), (model ...) and (not (relevant ...)) terms.
ScenarioModel extract_scenario_model(const ModelSpace& space, const std::vector<Term>& assumptions);

std::string render_model_sexpr(const ScenarioModel& m);
std::string render_model_ode(const ScenarioModel& m);

} // namespace compmod
