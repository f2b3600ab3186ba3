#ifndef SUAVE_SIMWORLD_HPP
#define SUAVE_SIMWORLD_HPP

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace suave::sim {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(const Vec2& a, const Vec2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Normalizes an angle to (-pi, pi].
double wrap_angle(double a);

enum class ThrusterStatus { AVAILABLE, FAILED };

struct VehicleState {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;        // altitude above the seabed, >= 0
    double heading = 0.0;  // radians, (-pi, pi]
};

struct KinematicsParams {
    double nominal_speed = 0.5;        // m/s
    double max_yaw_rate = 1.0;         // rad/s
    double vertical_speed = 0.3;       // m/s
    double thruster_degradation = 0.5; // speed factor per failed thruster
    double heading_noise = 0.3;        // rad/s per failed thruster
};

struct WaterVisibilityModel {
    double min = 1.25;     // meters
    double max = 3.75;
    double period = 80.0;  // seconds
    double phase = 0.0;    // radians

    // mean + amplitude * sin(2*pi*t/period + phase)
    double at(double t) const;
};

struct ThrusterEvent {
    double time = 0.0;  // seconds
    int thruster = 1;   // 1..6
};

struct NearestPoint {
    Vec2 point;
    double arclength = 0.0;  // from polyline start to the projection
    double dist = 0.0;
};

/// Seabed pipeline as a 2-D polyline.
struct Pipeline {
    std::vector<Vec2> polyline;
    double total_length = 0.0;

    static Pipeline straight(double length, Vec2 start = {0.0, 0.0});
    static Pipeline from_points(std::vector<Vec2> points);

    NearestPoint nearest(const Vec2& p) const;
    Vec2 point_at(double s) const;  // clamped to [0, total_length]
};

struct Command {
    enum class Kind { HOLD, GOTO };
    Kind kind = Kind::HOLD;
    double x = 0.0;
    double y = 0.0;
    double altitude = 0.0;

    static Command hold() { return {}; }
    static Command goto_point(double x, double y, double altitude) {
        return {Kind::GOTO, x, y, altitude};
    }
};

struct DetectionResult {
    Vec2 point;
    double arclength = 0.0;
};

/// Deterministic discrete-time world. All randomness comes from the seeded
/// stream, so identical seed + config + commands give identical trajectories.
class World {
public:
    World(Pipeline pipeline, KinematicsParams kin, std::uint64_t seed);

    double clock() const { return clock_; }
    const VehicleState& vehicle() const { return vehicle_; }
    VehicleState& vehicle() { return vehicle_; }
    const Pipeline& pipeline() const { return pipeline_; }
    const KinematicsParams& kinematics() const { return kin_; }

    const std::array<ThrusterStatus, 6>& thrusters() const { return thrusters_; }
    int failed_thruster_count() const;
    void set_thruster(int index1, ThrusterStatus s);  // 1-based
    void recover_all_thrusters();

    /// Applies every not-yet-applied event whose time has been reached.
    void inject_failures(const std::vector<ThrusterEvent>& events);

    /// Advances the clock by exactly dt and moves the vehicle per the
    /// command. Failed thrusters degrade speed multiplicatively and perturb
    /// the heading while moving.
    void step(double dt, const Command& cmd);

    /// Visibility-limited mock perception: the pipeline is seen iff the
    /// altitude does not exceed the visibility and the horizontal distance to
    /// the polyline is within altitude * tan(half_angle). half_angle is fixed
    /// at 45 degrees, so the detection radius equals the altitude.
    std::optional<DetectionResult> detect_pipeline(double visibility) const;

    std::mt19937_64& rng() { return rng_; }

private:
    double clock_ = 0.0;
    VehicleState vehicle_;
    Pipeline pipeline_;
    KinematicsParams kin_;
    std::array<ThrusterStatus, 6> thrusters_;
    std::mt19937_64 rng_;
    std::size_t next_event_ = 0;
};

}  // namespace suave::sim

#endif
