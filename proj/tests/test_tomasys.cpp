#include "doctest.h"

#include <random>

#include "oracle.hpp"
#include "random_kb.hpp"
#include "suave/tomasys.hpp"

using namespace suave::tomasys;

TEST_CASE("initial catalog matches the mission model") {
    auto kb = KnowledgeBase::initial();
    CHECK(kb.functions().size() == 3);
    CHECK(kb.designs().size() == 6);
    CHECK(kb.components().size() == 6);
    CHECK(kb.objectives().empty());

    const auto& fd1 = kb.designs().at("FD1");
    CHECK(fd1.required_components.size() == 6);
    CHECK(fd1.expected_qas.at(kQaPerformance) == 1.0);

    const auto& fd5 = kb.designs().at("FD5");
    CHECK(fd5.expected_qas.at(kQaWaterVisibility) == 2.0);
    CHECK(fd5.expected_qas.at(kQaPerformance) == 1.0);
    CHECK(fd5.required_components.empty());

    CHECK(kb.designs().at("FD6").expected_qas.empty());
    for (const char* id : {"FD2", "FD3", "FD4", "FD6"})
        CHECK(kb.designs().at(id).required_components.empty());
}

TEST_CASE("objectives are unique per function and start without a status") {
    auto kb = KnowledgeBase::initial();
    auto id = kb.set_objective("F2");
    CHECK(kb.objectives().at(id).status == ObjectiveStatus::UNSET);
    CHECK(kb.objectives().at(id).required_qas.empty());
    CHECK_THROWS_AS(kb.set_objective("F2"), KbError);

    kb.remove_objective(id);
    CHECK_NOTHROW(kb.set_objective("F3"));
    CHECK_THROWS_AS(kb.remove_objective("O_nope"), KbError);
}

TEST_CASE("measured QA updates propagate into declaring groundings") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");
    kb.apply_grounding(oid, "FD4");
    kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
    CHECK(kb.grounding_for_objective(oid)->measured_qas.at(kQaWaterVisibility) ==
          doctest::Approx(1.1));

    CHECK_THROWS_AS(kb.update_measured_qa(kQaWaterVisibility, -0.5, 0.0), KbError);
    CHECK_THROWS_AS(kb.update_measured_qa("salinity", 1.0, 0.0), KbError);
}

TEST_CASE("component updates require a known component") {
    auto kb = KnowledgeBase::initial();
    kb.update_component_status("thruster_3", ComponentStatus::FAILED);
    CHECK(kb.components().at("thruster_3").status == ComponentStatus::FAILED);
    CHECK_THROWS_AS(kb.update_component_status("thruster_9", ComponentStatus::FAILED),
                    KbError);
}

TEST_CASE("analyze applies the visibility rule") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");

    SUBCASE("measured above expected keeps the grounding OK") {
        kb.apply_grounding(oid, "FD4");
        kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
        kb.analyze();
        CHECK(kb.grounding_for_objective(oid)->status == GroundingStatus::OK);
    }
    SUBCASE("measured below expected flags ERROR") {
        kb.apply_grounding(oid, "FD5");
        kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
        kb.analyze();
        CHECK(kb.grounding_for_objective(oid)->status == GroundingStatus::ERROR);
        CHECK(kb.objectives().at(oid).status == ObjectiveStatus::ERROR);
    }
}

TEST_CASE("analyze applies the component-availability rule") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F1");
    kb.apply_grounding(oid, "FD1");
    kb.update_component_status("thruster_1", ComponentStatus::FAILED);
    kb.analyze();
    CHECK(kb.grounding_for_objective(oid)->status == GroundingStatus::ERROR);
}

TEST_CASE("analyze is idempotent on an unchanged KB") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");
    kb.apply_grounding(oid, "FD5");
    kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
    auto first = kb.analyze();
    auto second = kb.analyze();
    CHECK(first == second);
}

TEST_CASE("plan selects the best feasible design") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");

    SUBCASE("visibility 1.1 filters spiral_high, medium wins") {
        kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
        kb.analyze();
        auto config = kb.plan();
        REQUIRE(config.count(oid));
        CHECK(config.at(oid) == "FD4");
    }
    SUBCASE("visibility 3.0 admits all three, high wins") {
        kb.update_measured_qa(kQaWaterVisibility, 3.0, 0.0);
        kb.analyze();
        CHECK(kb.plan().at(oid) == "FD5");
    }
    SUBCASE("no measurement yet leaves every design feasible") {
        kb.analyze();
        CHECK(kb.plan().at(oid) == "FD5");
    }
    SUBCASE("no feasible design maps to none and flags the objective") {
        kb.update_measured_qa(kQaWaterVisibility, 0.1, 0.0);
        kb.analyze();
        auto config = kb.plan();
        CHECK_FALSE(config.at(oid).has_value());
        CHECK(kb.objectives().at(oid).status == ObjectiveStatus::ERROR);
    }
}

TEST_CASE("plan falls back on recover_thrusters and returns after recovery") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F1");
    kb.analyze();
    CHECK(kb.plan().at(oid) == "FD1");  // all thrusters available
    kb.apply_grounding(oid, "FD1");

    kb.update_component_status("thruster_2", ComponentStatus::FAILED);
    kb.analyze();
    CHECK(kb.plan().at(oid) == "FD2");
    kb.apply_grounding(oid, "FD2");

    kb.update_component_status("thruster_2", ComponentStatus::AVAILABLE);
    kb.analyze();
    // Strictly better design available again: re-plan back to FD1.
    CHECK(kb.plan().at(oid) == "FD1");
}

TEST_CASE("plan is quiescent on an already-optimal configuration") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");
    kb.update_measured_qa(kQaWaterVisibility, 3.0, 0.0);
    kb.analyze();
    kb.apply_grounding(oid, *kb.plan().at(oid));
    kb.analyze();
    CHECK(kb.plan().empty());
    CHECK(kb.plan().empty());
}

TEST_CASE("raising the visibility never shrinks the feasible set") {
    auto kb = KnowledgeBase::initial();
    std::vector<int> feasible_counts;
    for (double wv : {0.1, 0.5, 0.9, 1.0, 1.5, 2.0, 3.5}) {
        kb.update_measured_qa(kQaWaterVisibility, wv, 0.0);
        int n = 0;
        for (const char* id : {"FD3", "FD4", "FD5"})
            if (kb.design_feasible(kb.designs().at(id))) ++n;
        feasible_counts.push_back(n);
    }
    for (std::size_t i = 1; i < feasible_counts.size(); ++i)
        CHECK(feasible_counts[i] >= feasible_counts[i - 1]);
}

TEST_CASE("apply_grounding enforces well-formedness") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");
    CHECK_THROWS_AS(kb.apply_grounding(oid, "FD1"), KbError);  // FD1 solves F1
    CHECK_THROWS_AS(kb.apply_grounding("O_nope", "FD4"), KbError);

    kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
    auto& fg = kb.apply_grounding(oid, "FD4");
    CHECK(fg.status == GroundingStatus::OK);
    CHECK(fg.measured_qas.at(kQaWaterVisibility) == doctest::Approx(1.1));
    CHECK(kb.objectives().at(oid).status == ObjectiveStatus::OK);

    // Re-grounding replaces the previous grounding.
    kb.apply_grounding(oid, "FD5");
    CHECK(kb.grounding_for_objective(oid)->design_id == "FD5");
    CHECK(kb.groundings().size() == 1);
}

TEST_CASE("analyze and plan match the brute-force oracle on random KBs") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 300; ++trial) {
        auto kb = testkb::random_kb(rng);
        const auto snapshot = kb;

        auto expected_statuses = oracle::analyze(snapshot);
        auto expected_plan = oracle::plan(snapshot);

        auto statuses = kb.analyze();
        for (const auto& [id, status] : statuses) {
            INFO("trial ", trial, " grounding ", id);
            CHECK(status == expected_statuses.at(id));
        }
        auto config = kb.plan();
        INFO("trial ", trial);
        CHECK(config == expected_plan);
    }
}

TEST_CASE("KB snapshot export lists every instance") {
    auto kb = KnowledgeBase::initial();
    auto oid = kb.set_objective("F2");
    kb.update_measured_qa(kQaWaterVisibility, 1.1, 0.0);
    kb.apply_grounding(oid, "FD4");
    auto json = kb.to_json();
    CHECK(json.find("\"function_designs\"") != std::string::npos);
    CHECK(json.find("\"FD4\"") != std::string::npos);
    CHECK(json.find("\"measured_qas\"") != std::string::npos);
    CHECK(json.find("\"O_F2\"") != std::string::npos);
}
