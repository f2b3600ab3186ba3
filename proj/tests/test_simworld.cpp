#include "doctest.h"

#include <cmath>
#include <random>

#include "suave/simworld.hpp"

using namespace suave::sim;

namespace {

World make_world(std::uint64_t seed = 1,
                 KinematicsParams kin = KinematicsParams{}) {
    return World(Pipeline::straight(60.0), kin, seed);
}

}  // namespace

TEST_CASE("water visibility sine hits the reference values") {
    WaterVisibilityModel m{1.25, 3.75, 80.0, 0.0};
    CHECK(m.at(0.0) == doctest::Approx(2.5));
    CHECK(m.at(20.0) == doctest::Approx(3.75));
    CHECK(m.at(60.0) == doctest::Approx(1.25));
}

TEST_CASE("water visibility stays in range and is periodic") {
    WaterVisibilityModel m{1.25, 3.75, 80.0, 0.7};
    for (int i = 0; i < 10000; ++i) {
        double t = 0.031 * i;
        double v = m.at(t);
        CHECK(v >= m.min - 1e-12);
        CHECK(v <= m.max + 1e-12);
        CHECK(std::abs(m.at(t + m.period) - v) < 1e-9);
    }
}

TEST_CASE("failure events apply at their time, later ones never") {
    auto world = make_world();
    std::vector<ThrusterEvent> events{{35.0, 1}, {400.0, 2}};

    world.inject_failures(events);
    CHECK(world.failed_thruster_count() == 0);

    while (world.clock() < 35.0) world.step(0.1, Command::hold());
    world.inject_failures(events);
    CHECK(world.thrusters()[0] == ThrusterStatus::FAILED);
    CHECK(world.failed_thruster_count() == 1);

    while (world.clock() < 300.0) world.step(0.1, Command::hold());
    world.inject_failures(events);
    CHECK(world.thrusters()[1] == ThrusterStatus::AVAILABLE);
}

TEST_CASE("empty event list changes nothing") {
    auto world = make_world();
    world.inject_failures({});
    CHECK(world.failed_thruster_count() == 0);
}

TEST_CASE("straight run covers speed * time") {
    auto world = make_world();
    world.vehicle() = {0.0, 0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i)
        world.step(0.1, Command::goto_point(1000.0, 0.0, 1.0));
    CHECK(world.vehicle().x == doctest::Approx(5.0).epsilon(1e-9));
    CHECK(world.vehicle().y == doctest::Approx(0.0));
    CHECK(world.clock() == doctest::Approx(10.0));
}

TEST_CASE("one failed thruster halves the effective speed") {
    auto world = make_world();
    KinematicsParams kin;
    world.set_thruster(1, ThrusterStatus::FAILED);
    world.vehicle() = {0.0, 0.0, 1.0, 0.0};
    for (int i = 0; i < 100; ++i)
        world.step(0.1, Command::goto_point(1000.0, 0.0, 1.0));
    double travelled = std::hypot(world.vehicle().x, world.vehicle().y);
    // 0.5 * 0.5 = 0.25 m/s for 10 s, minus what heading noise bends away.
    CHECK(travelled <= 2.5 + 1e-9);
    CHECK(travelled > 2.0);
    (void)kin;
}

TEST_CASE("hold keeps the position") {
    auto world = make_world();
    world.vehicle() = {3.0, 4.0, 1.0, 0.5};
    world.step(0.1, Command::hold());
    CHECK(world.vehicle().x == 3.0);
    CHECK(world.vehicle().y == 4.0);
    CHECK(world.clock() == doctest::Approx(0.1));
}

TEST_CASE("step displacement is bounded by the speed limits") {
    auto world = make_world(42);
    world.vehicle() = {1.0, -2.0, 0.5, 2.0};
    KinematicsParams kin;
    for (int i = 0; i < 500; ++i) {
        auto before = world.vehicle();
        world.step(0.1, Command::goto_point(10.0 * std::sin(i * 0.1),
                                            10.0 * std::cos(i * 0.1), 2.0));
        auto after = world.vehicle();
        CHECK(std::hypot(after.x - before.x, after.y - before.y) <=
              kin.nominal_speed * 0.1 + 1e-9);
        CHECK(std::abs(after.z - before.z) <= kin.vertical_speed * 0.1 + 1e-9);
    }
}

TEST_CASE("trajectories are deterministic for a fixed seed") {
    auto run = [](std::uint64_t seed) {
        auto world = make_world(seed);
        world.vehicle() = {0.0, 8.0, 1.5, 0.0};
        world.set_thruster(3, ThrusterStatus::FAILED);
        std::vector<double> xs;
        for (int i = 0; i < 200; ++i) {
            world.step(0.1, Command::goto_point(30.0, -5.0, 1.0));
            xs.push_back(world.vehicle().x);
            xs.push_back(world.vehicle().y);
            xs.push_back(world.vehicle().heading);
        }
        return xs;
    };
    CHECK(run(9) == run(9));
    CHECK(run(9) != run(10));
}

TEST_CASE("detection requires altitude within visibility") {
    auto world = make_world();
    world.vehicle() = {10.0, 0.1, 2.0, 0.0};
    CHECK_FALSE(world.detect_pipeline(1.5).has_value());  // altitude 2.0 > 1.5
    CHECK(world.detect_pipeline(2.0).has_value());
}

TEST_CASE("detection radius equals the altitude") {
    auto world = make_world();
    world.vehicle() = {10.0, 0.8, 1.0, 0.0};
    auto det = world.detect_pipeline(3.0);
    REQUIRE(det.has_value());
    CHECK(det->point.y == doctest::Approx(0.0));

    world.vehicle().y = 1.2;  // outside radius 1.0
    CHECK_FALSE(world.detect_pipeline(3.0).has_value());
}

TEST_CASE("directly above the pipeline detects the projection point") {
    auto world = make_world();
    world.vehicle() = {23.0, 0.0, 1.0, 0.0};
    auto det = world.detect_pipeline(2.0);
    REQUIRE(det.has_value());
    CHECK(det->point.x == doctest::Approx(23.0));
    CHECK(det->arclength == doctest::Approx(23.0));
}

TEST_CASE("detection is monotone in visibility") {
    auto world = make_world(5);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> pos(-5.0, 65.0);
    std::uniform_real_distribution<double> alt(0.1, 3.0);
    for (int i = 0; i < 200; ++i) {
        world.vehicle() = {pos(rng), pos(rng) / 10.0, alt(rng), 0.0};
        double v = alt(rng);
        if (world.detect_pipeline(v).has_value())
            CHECK(world.detect_pipeline(v + 1.0).has_value());
    }
}

TEST_CASE("nearest point on a polyline") {
    auto pipe = Pipeline::from_points({{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}});
    CHECK(pipe.total_length == doctest::Approx(20.0));

    SUBCASE("a vertex maps to itself") {
        auto n = pipe.nearest({10.0, 0.0});
        CHECK(n.dist == doctest::Approx(0.0));
        CHECK(n.arclength == doctest::Approx(10.0));
    }
    SUBCASE("perpendicular offset from a segment midpoint") {
        auto n = pipe.nearest({5.0, 1.0});
        CHECK(n.point.x == doctest::Approx(5.0));
        CHECK(n.point.y == doctest::Approx(0.0));
        CHECK(n.dist == doctest::Approx(1.0));
        CHECK(n.arclength == doctest::Approx(5.0));
    }
    SUBCASE("matches a dense-sampling search") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> coord(-3.0, 13.0);
        for (int trial = 0; trial < 50; ++trial) {
            Vec2 p{coord(rng), coord(rng)};
            auto n = pipe.nearest(p);

            double best = 1e18, best_s = 0.0;
            const int samples = 10000;
            for (int i = 0; i <= samples; ++i) {
                double s = pipe.total_length * i / samples;
                double d = distance(pipe.point_at(s), p);
                if (d < best) {
                    best = d;
                    best_s = s;
                }
            }
            CHECK(n.dist == doctest::Approx(best).epsilon(1e-3));
            CHECK(n.arclength == doctest::Approx(best_s).epsilon(0.01));
        }
    }
}

TEST_CASE("degenerate pipelines are rejected") {
    CHECK_THROWS(Pipeline::from_points({{0.0, 0.0}}));
    CHECK_THROWS(Pipeline::from_points({{1.0, 1.0}, {1.0, 1.0}}));
}
