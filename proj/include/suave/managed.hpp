#ifndef SUAVE_MANAGED_HPP
#define SUAVE_MANAGED_HPP

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "suave/bus.hpp"
#include "suave/simworld.hpp"

namespace suave::managed {

// Node names (service names are "/" + node + "/change_mode").
inline constexpr const char* kNodeSearchPath = "f_generate_search_path";
inline constexpr const char* kNodeFollowPipeline = "f_follow_pipeline";
inline constexpr const char* kNodeMaintainMotion = "f_maintain_motion";

inline constexpr const char* kDiagnosticsTopic = "/diagnostics";
inline constexpr const char* kObjectiveService = "/mros/objective";
inline constexpr const char* kRequestConfigurationService =
    "/mros/request_configuration";

std::string change_mode_service(const std::string& node);

struct ModeRow {
    std::string node;
    std::string mode;
    bool active = false;
    double altitude = 0.0;  // commanded altitude for the spiral modes
};

/// The fixed node/mode catalog: three spiral altitudes plus unground for the
/// search node, follow/unground for the pipeline node, and
/// all_thrusters/recover_thrusters for motion maintenance.
class ModeTable {
public:
    ModeTable();
    const ModeRow* find(const std::string& node, const std::string& mode) const;
    std::vector<std::string> modes_for(const std::string& node) const;
    const std::vector<ModeRow>& rows() const { return rows_; }

private:
    std::vector<ModeRow> rows_;
};

struct LifecycleNode {
    std::string name;
    bool active = false;
    std::string mode;
    double altitude = 0.0;
};

struct ModeChange {
    double time = 0.0;
    std::string node;
    std::string mode;
};

/// Applies mode-change requests to the lifecycle nodes and exposes them as
/// the per-node change_mode services.
class ModeManager {
public:
    explicit ModeManager(std::function<double()> clock);

    void register_services(suave::bus::Bus& bus,
                           const std::string& actor = "mode_manager");

    bus::ServiceResponse change_mode(const std::string& node,
                                     const std::string& mode);

    const LifecycleNode& node(const std::string& name) const;
    const ModeTable& table() const { return table_; }
    const std::vector<ModeChange>& history() const { return history_; }

private:
    ModeTable table_;
    std::map<std::string, LifecycleNode> nodes_;
    std::vector<ModeChange> history_;
    std::function<double()> clock_;
};

struct Waypoint {
    double x = 0.0;
    double y = 0.0;
    double altitude = 0.0;
};

/// Archimedean spiral r = b * theta with b = altitude / pi, so the radial gap
/// between successive loops is 2 * altitude — exactly the detection diameter
/// at the 45-degree perception cone. Sampled at the given arc spacing and
/// truncated at radius_limit.
std::vector<Waypoint> spiral_waypoints(sim::Vec2 center, double altitude,
                                       double radius_limit,
                                       double arc_spacing);

struct SearchParams {
    double spiral_radius_limit = 30.0;
    double capture_radius = 0.3;
    double arc_spacing = 0.25;  // nominal_speed * dt * 5 by default
};

/// Generate Search Path behavior. Replans the spiral from the current
/// position whenever the commanded altitude changes.
class SearchPathNode {
public:
    SearchPathNode(const ModeManager& modes, SearchParams params);

    bool active() const;
    std::optional<sim::Command> plan_command(const sim::World& world);

private:
    const ModeManager& modes_;
    SearchParams params_;
    std::string planned_mode_;
    std::vector<Waypoint> waypoints_;
    std::size_t next_waypoint_ = 0;
};

/// Follow Pipeline behavior: drives along the polyline from the detection
/// point and accumulates the furthest arclength reached. Inspection is
/// mocked as that arclength counter.
class FollowPipelineNode {
public:
    FollowPipelineNode(const ModeManager& modes, double inspection_altitude);

    bool active() const;
    bool has_detection() const { return detection_.has_value(); }
    void set_detection(double arclength);

    std::optional<sim::Command> plan_command(const sim::World& world);
    /// Updates the furthest-arclength counter after the world stepped.
    /// Returns the (non-negative) increment.
    double post_step(const sim::World& world);

    double inspected_distance() const;

private:
    const ModeManager& modes_;
    double inspection_altitude_;
    std::optional<double> detection_;  // arclength s0
    double furthest_ = 0.0;
};

/// Maintain Motion behavior. In fd_recover_thrusters the vehicle holds
/// position; after recovery_duration seconds of continuous recovery every
/// failed thruster becomes available again. Leaving the mode resets the
/// countdown.
class MaintainMotionNode {
public:
    MaintainMotionNode(const ModeManager& modes, double recovery_duration);

    /// Returns true when the vehicle must hold this tick.
    bool tick(sim::World& world, suave::bus::Bus& bus, double dt);

private:
    const ModeManager& modes_;
    double recovery_duration_;
    double timer_ = 0.0;
};

enum class MissionPhase { SEARCH, INSPECT, DONE };

/// Sequences T1 (search) into T2 (inspect): emits the adaptation goals at
/// mission start, swaps the search objective for the follow objective on
/// first detection, and ends the mission at the time limit.
class MissionCoordinator {
public:
    MissionCoordinator(suave::bus::Bus& bus, double time_limit,
                       bool direct_mode_switch);

    MissionPhase tick(sim::World& world, FollowPipelineNode& follow,
                      double visibility);

    MissionPhase phase() const { return phase_; }
    bool pipeline_found() const { return t_detect_.has_value(); }
    double search_time() const;  // time limit when never found
    std::optional<double> detect_time() const { return t_detect_; }

private:
    suave::bus::Bus& bus_;
    double time_limit_;
    bool direct_mode_switch_;  // non-MAPE managers: coordinator flips modes
    MissionPhase phase_ = MissionPhase::SEARCH;
    bool started_ = false;
    double t_search_start_ = 0.0;
    std::optional<double> t_detect_;
};

}  // namespace suave::managed

#endif
