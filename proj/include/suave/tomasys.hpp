#ifndef SUAVE_TOMASYS_HPP
#define SUAVE_TOMASYS_HPP

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace suave::tomasys {

// Quality attribute names. Both are higher-is-better.
inline constexpr const char* kQaWaterVisibility = "water_visibility";
inline constexpr const char* kQaPerformance = "performance";

enum class ComponentStatus { AVAILABLE, FAILED };
enum class GroundingStatus { OK, ERROR };

/// UNSET is the explicit "no status yet" state a freshly created objective
/// carries until the first analyze/plan cycle grounds it.
enum class ObjectiveStatus { UNSET, OK, ERROR };

using QaMap = std::map<std::string, double>;  // qa name -> value

struct Component {
    std::string name;
    ComponentStatus status = ComponentStatus::AVAILABLE;
};

struct Function {
    std::string id;           // "F1", "F2", "F3"
    std::string name;
    std::string description;
};

struct FunctionDesign {
    std::string id;           // "FD1" .. "FD6"
    std::string name;
    std::string solves;       // function id
    std::vector<std::string> required_components;
    QaMap expected_qas;
};

struct Objective {
    std::string id;
    std::string function_id;
    ObjectiveStatus status = ObjectiveStatus::UNSET;
    QaMap required_qas;       // always empty in this mission model
};

struct FunctionGrounding {
    std::string id;
    std::string objective_id;
    std::string design_id;
    GroundingStatus status = GroundingStatus::OK;
    QaMap measured_qas;
};

class KbError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Configuration produced by plan(): objective id -> chosen design id, or
/// nullopt when no feasible design exists (caller keeps the last safe mode).
using Configuration = std::map<std::string, std::optional<std::string>>;

/// Runtime knowledge base: functions, function designs, components,
/// objectives, groundings and the latest measured QA values. The analyze and
/// plan steps of the MAPE-K loop operate directly on it.
class KnowledgeBase {
public:
    KnowledgeBase() = default;

    /// The static mission catalog: maintain_motion / generate_search_path /
    /// follow_pipeline, their six designs and the six thrusters. No
    /// objectives exist until the mission coordinator sets them.
    static KnowledgeBase initial();

    // Catalog construction (also used by tests that build small random KBs).
    void add_function(Function f);
    void add_design(FunctionDesign fd);
    void add_component(Component c);

    std::string set_objective(const std::string& function_id,
                              QaMap required_qas = {});
    void remove_objective(const std::string& objective_id);

    void update_measured_qa(const std::string& name, double value, double stamp);
    void update_component_status(const std::string& name, ComponentStatus status);

    /// Re-evaluates every grounding: ERROR when a measured QA undercuts the
    /// design's expectation or a required component has failed, OK otherwise.
    /// Objectives inherit ERROR from their grounding. Returns the per-
    /// grounding statuses.
    std::vector<std::pair<std::string, GroundingStatus>> analyze();

    /// For each objective needing (re)grounding — no grounding yet, grounding
    /// in ERROR, or a strictly better feasible design available — selects the
    /// feasible design with the highest expected performance. Feasible means
    /// all required components AVAILABLE and every expected QA with a current
    /// measurement satisfies expected <= measured. Ties break to the lowest
    /// design index. An objective with an empty feasible set maps to nullopt
    /// and is marked ERROR; the caller keeps its last safe mode.
    Configuration plan();

    FunctionGrounding& apply_grounding(const std::string& objective_id,
                                       const std::string& design_id);

    /// True when the design's components are all AVAILABLE and no current
    /// measurement undercuts one of its expected QAs.
    bool design_feasible(const FunctionDesign& fd) const;

    // Accessors.
    const std::map<std::string, Function>& functions() const { return functions_; }
    const std::map<std::string, FunctionDesign>& designs() const { return designs_; }
    const std::map<std::string, Component>& components() const { return components_; }
    const std::map<std::string, Objective>& objectives() const { return objectives_; }
    const std::map<std::string, FunctionGrounding>& groundings() const { return groundings_; }
    const QaMap& measured_qas() const { return measured_; }

    Objective* find_objective(const std::string& id);
    const Objective* objective_for_function(const std::string& function_id) const;
    FunctionGrounding* grounding_for_objective(const std::string& objective_id);
    const FunctionGrounding* grounding_for_objective(const std::string& objective_id) const;

    // Test hook: force a grounding status (randomized-KB oracle checks).
    void set_grounding_status(const std::string& grounding_id, GroundingStatus s);

    /// Snapshot of every instance and status as a JSON document.
    std::string to_json() const;

private:
    std::map<std::string, Function> functions_;
    std::map<std::string, FunctionDesign> designs_;
    std::map<std::string, Component> components_;
    std::map<std::string, Objective> objectives_;
    std::map<std::string, FunctionGrounding> groundings_;
    QaMap measured_;
};

/// Numeric suffix ordering for ids like "FD4"; used for tie-breaking.
int design_index(const std::string& design_id);

}  // namespace suave::tomasys

#endif
