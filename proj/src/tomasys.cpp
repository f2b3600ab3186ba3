#include "suave/tomasys.hpp"

#include <algorithm>
#include <limits>

#include "json.hpp"

namespace suave::tomasys {

namespace {

const char* status_name(ComponentStatus s) {
    return s == ComponentStatus::AVAILABLE ? "AVAILABLE" : "FAILED";
}
const char* status_name(GroundingStatus s) {
    return s == GroundingStatus::OK ? "OK" : "ERROR";
}
const char* status_name(ObjectiveStatus s) {
    switch (s) {
        case ObjectiveStatus::UNSET: return "UNSET";
        case ObjectiveStatus::OK: return "OK";
        case ObjectiveStatus::ERROR: return "ERROR";
    }
    return "?";
}

}  // namespace

int design_index(const std::string& design_id) {
    int idx = 0;
    for (char c : design_id)
        if (c >= '0' && c <= '9') idx = idx * 10 + (c - '0');
    return idx;
}

KnowledgeBase KnowledgeBase::initial() {
    KnowledgeBase kb;
    kb.add_function({"F1", "maintain_motion", "Maintain the motion of the robot"});
    kb.add_function({"F2", "generate_search_path",
                     "Generate a path to search for the pipeline"});
    kb.add_function({"F3", "follow_pipeline", "Follow and inspect the pipeline"});

    std::vector<std::string> thrusters;
    for (int i = 1; i <= 6; ++i) {
        std::string name = "thruster_" + std::to_string(i);
        kb.add_component({name, ComponentStatus::AVAILABLE});
        thrusters.push_back(name);
    }

    kb.add_design({"FD1", "all_thrusters", "F1", thrusters,
                   {{kQaPerformance, 1.0}}});
    kb.add_design({"FD2", "recover_thrusters", "F1", {},
                   {{kQaPerformance, 0.5}}});
    kb.add_design({"FD3", "spiral_low", "F2", {},
                   {{kQaWaterVisibility, 0.5}, {kQaPerformance, 0.25}}});
    kb.add_design({"FD4", "spiral_medium", "F2", {},
                   {{kQaWaterVisibility, 1.0}, {kQaPerformance, 0.5}}});
    kb.add_design({"FD5", "spiral_high", "F2", {},
                   {{kQaWaterVisibility, 2.0}, {kQaPerformance, 1.0}}});
    kb.add_design({"FD6", "follow_pipeline", "F3", {}, {}});
    return kb;
}

void KnowledgeBase::add_function(Function f) {
    functions_[f.id] = std::move(f);
}

void KnowledgeBase::add_design(FunctionDesign fd) {
    if (!functions_.count(fd.solves))
        throw KbError("design " + fd.id + " solves unknown function " + fd.solves);
    for (const auto& c : fd.required_components)
        if (!components_.count(c))
            throw KbError("design " + fd.id + " requires unknown component " + c);
    designs_[fd.id] = std::move(fd);
}

void KnowledgeBase::add_component(Component c) {
    components_[c.name] = std::move(c);
}

std::string KnowledgeBase::set_objective(const std::string& function_id,
                                         QaMap required_qas) {
    if (!functions_.count(function_id))
        throw KbError("unknown function: " + function_id);
    if (objective_for_function(function_id))
        throw KbError("function " + function_id + " already has an active objective");
    std::string id = "O_" + function_id;
    objectives_[id] = Objective{id, function_id, ObjectiveStatus::UNSET,
                                std::move(required_qas)};
    return id;
}

void KnowledgeBase::remove_objective(const std::string& objective_id) {
    auto it = objectives_.find(objective_id);
    if (it == objectives_.end())
        throw KbError("unknown objective: " + objective_id);
    for (auto g = groundings_.begin(); g != groundings_.end();) {
        if (g->second.objective_id == objective_id)
            g = groundings_.erase(g);
        else
            ++g;
    }
    objectives_.erase(it);
}

void KnowledgeBase::update_measured_qa(const std::string& name, double value,
                                       double /*stamp*/) {
    if (name != kQaWaterVisibility && name != kQaPerformance)
        throw KbError("unknown quality attribute: " + name);
    if (name == kQaWaterVisibility && value < 0.0)
        throw KbError("water_visibility out of range: " + std::to_string(value));
    measured_[name] = value;
    for (auto& [id, fg] : groundings_) {
        const auto& fd = designs_.at(fg.design_id);
        if (fd.expected_qas.count(name)) fg.measured_qas[name] = value;
    }
}

void KnowledgeBase::update_component_status(const std::string& name,
                                            ComponentStatus status) {
    auto it = components_.find(name);
    if (it == components_.end()) throw KbError("unknown component: " + name);
    it->second.status = status;
}

std::vector<std::pair<std::string, GroundingStatus>> KnowledgeBase::analyze() {
    std::vector<std::pair<std::string, GroundingStatus>> out;
    for (auto& [id, fg] : groundings_) {
        const auto& fd = designs_.at(fg.design_id);
        bool error = false;
        for (const auto& [qa, meas] : fg.measured_qas) {
            auto exp = fd.expected_qas.find(qa);
            if (exp != fd.expected_qas.end() && meas < exp->second) error = true;
        }
        for (const auto& c : fd.required_components)
            if (components_.at(c).status == ComponentStatus::FAILED) error = true;
        fg.status = error ? GroundingStatus::ERROR : GroundingStatus::OK;
        out.emplace_back(id, fg.status);
    }
    for (auto& [id, o] : objectives_) {
        const auto* fg = grounding_for_objective(id);
        if (fg && fg->status == GroundingStatus::ERROR)
            o.status = ObjectiveStatus::ERROR;
    }
    return out;
}

bool KnowledgeBase::design_feasible(const FunctionDesign& fd) const {
    for (const auto& c : fd.required_components)
        if (components_.at(c).status == ComponentStatus::FAILED) return false;
    for (const auto& [qa, exp] : fd.expected_qas) {
        auto meas = measured_.find(qa);
        // No measurement yet: the design is unconstrained by this QA.
        if (meas != measured_.end() && exp > meas->second) return false;
    }
    return true;
}

Configuration KnowledgeBase::plan() {
    Configuration config;
    for (auto& [oid, o] : objectives_) {
        const FunctionGrounding* current = nullptr;
        for (const auto& [gid, fg] : groundings_)
            if (fg.objective_id == oid) current = &fg;

        // Filtered argmax over the designs solving this objective's function.
        const FunctionDesign* best = nullptr;
        for (const auto& [fdid, fd] : designs_) {
            if (fd.solves != o.function_id) continue;
            if (!design_feasible(fd)) continue;
            if (!best) {
                best = &fd;
                continue;
            }
            auto perf = [](const FunctionDesign& d) {
                auto it = d.expected_qas.find(kQaPerformance);
                return it != d.expected_qas.end()
                           ? it->second
                           : -std::numeric_limits<double>::infinity();
            };
            double pb = perf(*best), pf = perf(fd);
            if (pf > pb ||
                (pf == pb && design_index(fdid) < design_index(best->id)))
                best = &fd;
        }

        bool needs = !current || current->status == GroundingStatus::ERROR ||
                     o.status != ObjectiveStatus::OK;
        if (!needs && best && best->id != current->design_id) {
            // Re-ground an OK objective only for a strictly better design.
            auto pexp = [this](const std::string& id) {
                auto it = designs_.at(id).expected_qas.find(kQaPerformance);
                return it != designs_.at(id).expected_qas.end()
                           ? it->second
                           : -std::numeric_limits<double>::infinity();
            };
            needs = pexp(best->id) > pexp(current->design_id);
        }
        if (!needs) continue;

        if (best) {
            config[oid] = best->id;
        } else {
            config[oid] = std::nullopt;  // caller keeps the last safe mode
            o.status = ObjectiveStatus::ERROR;
        }
    }
    return config;
}

FunctionGrounding& KnowledgeBase::apply_grounding(const std::string& objective_id,
                                                  const std::string& design_id) {
    auto oit = objectives_.find(objective_id);
    if (oit == objectives_.end())
        throw KbError("unknown objective: " + objective_id);
    auto dit = designs_.find(design_id);
    if (dit == designs_.end()) throw KbError("unknown design: " + design_id);
    if (dit->second.solves != oit->second.function_id)
        throw KbError("design " + design_id + " does not solve function " +
                      oit->second.function_id);

    for (auto g = groundings_.begin(); g != groundings_.end();) {
        if (g->second.objective_id == objective_id)
            g = groundings_.erase(g);
        else
            ++g;
    }
    std::string id = "FG_" + objective_id;
    FunctionGrounding fg{id, objective_id, design_id, GroundingStatus::OK, {}};
    for (const auto& [qa, exp] : dit->second.expected_qas) {
        auto meas = measured_.find(qa);
        if (meas != measured_.end()) fg.measured_qas[qa] = meas->second;
    }
    oit->second.status = ObjectiveStatus::OK;
    return groundings_[id] = std::move(fg);
}

Objective* KnowledgeBase::find_objective(const std::string& id) {
    auto it = objectives_.find(id);
    return it == objectives_.end() ? nullptr : &it->second;
}

const Objective* KnowledgeBase::objective_for_function(
    const std::string& function_id) const {
    for (const auto& [id, o] : objectives_)
        if (o.function_id == function_id) return &o;
    return nullptr;
}

FunctionGrounding* KnowledgeBase::grounding_for_objective(
    const std::string& objective_id) {
    for (auto& [id, fg] : groundings_)
        if (fg.objective_id == objective_id) return &fg;
    return nullptr;
}

const FunctionGrounding* KnowledgeBase::grounding_for_objective(
    const std::string& objective_id) const {
    for (const auto& [id, fg] : groundings_)
        if (fg.objective_id == objective_id) return &fg;
    return nullptr;
}

void KnowledgeBase::set_grounding_status(const std::string& grounding_id,
                                         GroundingStatus s) {
    auto it = groundings_.find(grounding_id);
    if (it == groundings_.end())
        throw KbError("unknown grounding: " + grounding_id);
    it->second.status = s;
}

std::string KnowledgeBase::to_json() const {
    nlohmann::ordered_json j;
    for (const auto& [id, f] : functions_)
        j["functions"][id] = {{"name", f.name}, {"description", f.description}};
    for (const auto& [id, fd] : designs_)
        j["function_designs"][id] = {{"name", fd.name},
                                     {"solves", fd.solves},
                                     {"required_components", fd.required_components},
                                     {"expected_qas", fd.expected_qas}};
    for (const auto& [id, c] : components_)
        j["components"][id] = {{"status", status_name(c.status)}};
    for (const auto& [id, o] : objectives_)
        j["objectives"][id] = {{"of_function", o.function_id},
                               {"status", status_name(o.status)},
                               {"required_qas", o.required_qas}};
    for (const auto& [id, fg] : groundings_)
        j["function_groundings"][id] = {{"solves_objective", fg.objective_id},
                                        {"of_design", fg.design_id},
                                        {"status", status_name(fg.status)},
                                        {"measured_qas", fg.measured_qas}};
    j["measured_qas"] = measured_;
    return j.dump(2);
}

}  // namespace suave::tomasys
