// Brute-force reference for the analyze predicate and the filtered-argmax
// planner. Operates on a copied snapshot of the knowledge base and never
// calls analyze()/plan() itself.

#ifndef SUAVE_TESTS_ORACLE_HPP
#define SUAVE_TESTS_ORACLE_HPP

#include <limits>
#include <map>
#include <optional>
#include <string>

#include "suave/tomasys.hpp"

namespace oracle {

using suave::tomasys::ComponentStatus;
using suave::tomasys::FunctionDesign;
using suave::tomasys::FunctionGrounding;
using suave::tomasys::GroundingStatus;
using suave::tomasys::KnowledgeBase;
using suave::tomasys::ObjectiveStatus;

// Measured-vs-expected / failed-component rule for one grounding.
inline bool grounding_in_error(const KnowledgeBase& kb,
                               const FunctionGrounding& fg) {
    const auto& fd = kb.designs().at(fg.design_id);
    for (const auto& [qa, meas] : fg.measured_qas) {
        auto exp = fd.expected_qas.find(qa);
        if (exp != fd.expected_qas.end() && meas < exp->second) return true;
    }
    for (const auto& c : fd.required_components)
        if (kb.components().at(c).status == ComponentStatus::FAILED) return true;
    return false;
}

inline std::map<std::string, GroundingStatus> analyze(const KnowledgeBase& kb) {
    std::map<std::string, GroundingStatus> out;
    for (const auto& [id, fg] : kb.groundings())
        out[id] = grounding_in_error(kb, fg) ? GroundingStatus::ERROR
                                             : GroundingStatus::OK;
    return out;
}

inline bool feasible(const KnowledgeBase& kb, const FunctionDesign& fd) {
    for (const auto& c : fd.required_components)
        if (kb.components().at(c).status == ComponentStatus::FAILED) return false;
    for (const auto& [qa, exp] : fd.expected_qas) {
        auto meas = kb.measured_qas().find(qa);
        if (meas != kb.measured_qas().end() && exp > meas->second) return false;
    }
    return true;
}

inline double performance(const FunctionDesign& fd) {
    auto it = fd.expected_qas.find(suave::tomasys::kQaPerformance);
    return it != fd.expected_qas.end()
               ? it->second
               : -std::numeric_limits<double>::infinity();
}

// Expected plan output computed from a pre-analyze snapshot: per objective the
// winning feasible design (or nullopt), only for objectives needing
// (re)grounding.
inline std::map<std::string, std::optional<std::string>> plan(
    const KnowledgeBase& kb) {
    std::map<std::string, std::optional<std::string>> out;
    for (const auto& [oid, o] : kb.objectives()) {
        const FunctionGrounding* current = nullptr;
        for (const auto& [gid, fg] : kb.groundings())
            if (fg.objective_id == oid) current = &fg;

        // Filtered argmax by exhaustive enumeration, ties to lowest index.
        std::optional<std::string> best;
        double best_perf = 0.0;
        for (const auto& [fdid, fd] : kb.designs()) {
            if (fd.solves != o.function_id || !feasible(kb, fd)) continue;
            double p = performance(fd);
            if (!best || p > best_perf ||
                (p == best_perf && suave::tomasys::design_index(fdid) <
                                       suave::tomasys::design_index(*best))) {
                best = fdid;
                best_perf = p;
            }
        }

        bool current_error = current && grounding_in_error(kb, *current);
        ObjectiveStatus post_status = o.status;
        if (current_error) post_status = ObjectiveStatus::ERROR;

        bool needs = !current || current_error ||
                     post_status != ObjectiveStatus::OK;
        if (!needs && best && *best != current->design_id)
            needs = performance(kb.designs().at(*best)) >
                    performance(kb.designs().at(current->design_id));
        if (needs) out[oid] = best;
    }
    return out;
}

}  // namespace oracle

#endif
