#include "suave/managed.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace suave::managed {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string change_mode_service(const std::string& node) {
    return "/" + node + "/change_mode";
}

ModeTable::ModeTable() {
    rows_ = {
        {kNodeSearchPath, "fd_spiral_high", true, 2.0},
        {kNodeSearchPath, "fd_spiral_medium", true, 1.0},
        {kNodeSearchPath, "fd_spiral_low", true, 0.5},
        {kNodeSearchPath, "fd_unground", false, 0.0},
        {kNodeFollowPipeline, "fd_follow_pipeline", true, 1.0},
        {kNodeFollowPipeline, "fd_unground", false, 0.0},
        {kNodeMaintainMotion, "fd_all_thrusters", false, 0.0},
        {kNodeMaintainMotion, "fd_recover_thrusters", true, 0.0},
    };
}

const ModeRow* ModeTable::find(const std::string& node,
                               const std::string& mode) const {
    for (const auto& row : rows_)
        if (row.node == node && row.mode == mode) return &row;
    return nullptr;
}

std::vector<std::string> ModeTable::modes_for(const std::string& node) const {
    std::vector<std::string> out;
    for (const auto& row : rows_)
        if (row.node == node) out.push_back(row.mode);
    return out;
}

ModeManager::ModeManager(std::function<double()> clock)
    : clock_(std::move(clock)) {
    // Initial configuration: everything deactivated.
    nodes_[kNodeSearchPath] = {kNodeSearchPath, false, "fd_unground", 0.0};
    nodes_[kNodeFollowPipeline] = {kNodeFollowPipeline, false, "fd_unground", 0.0};
    nodes_[kNodeMaintainMotion] = {kNodeMaintainMotion, false, "fd_all_thrusters", 0.0};
}

void ModeManager::register_services(suave::bus::Bus& bus,
                                    const std::string& actor) {
    for (const char* node :
         {kNodeSearchPath, kNodeFollowPipeline, kNodeMaintainMotion}) {
        std::string name(node);
        bus.register_service(
            change_mode_service(name),
            [this, name](const bus::ServiceRequest& req) {
                const auto* cm = std::get_if<bus::ChangeModeRequest>(&req);
                if (!cm)
                    return bus::ServiceResponse{false, "expected ChangeModeRequest"};
                return change_mode(name, cm->mode);
            },
            actor);
    }
}

bus::ServiceResponse ModeManager::change_mode(const std::string& node,
                                              const std::string& mode) {
    auto it = nodes_.find(node);
    if (it == nodes_.end())
        return {false, "unknown node: " + node};
    const ModeRow* row = table_.find(node, mode);
    if (!row)
        return {false, "unknown mode for " + node + ": " + mode};
    if (it->second.mode != mode) {
        it->second.mode = mode;
        it->second.active = row->active;
        it->second.altitude = row->altitude;
        history_.push_back({clock_ ? clock_() : 0.0, node, mode});
    }
    return {true, ""};
}

const LifecycleNode& ModeManager::node(const std::string& name) const {
    auto it = nodes_.find(name);
    if (it == nodes_.end())
        throw std::invalid_argument("unknown lifecycle node: " + name);
    return it->second;
}

std::vector<Waypoint> spiral_waypoints(sim::Vec2 center, double altitude,
                                       double radius_limit,
                                       double arc_spacing) {
    if (altitude <= 0.0)
        throw std::invalid_argument("spiral altitude must be positive");
    if (radius_limit <= 0.0 || arc_spacing <= 0.0)
        throw std::invalid_argument("spiral parameters must be positive");

    double b = altitude / kPi;  // loop gap 2*pi*b = 2*altitude
    std::vector<Waypoint> wps;
    wps.push_back({center.x, center.y, altitude});
    double theta = 0.0;
    while (true) {
        // ds = b * sqrt(1 + theta^2) dtheta
        double dtheta = arc_spacing / (b * std::sqrt(1.0 + theta * theta));
        theta += dtheta;
        double r = b * theta;
        if (r > radius_limit) break;
        wps.push_back({center.x + r * std::cos(theta),
                       center.y + r * std::sin(theta), altitude});
    }
    return wps;
}

SearchPathNode::SearchPathNode(const ModeManager& modes, SearchParams params)
    : modes_(modes), params_(params) {}

bool SearchPathNode::active() const {
    return modes_.node(kNodeSearchPath).active;
}

std::optional<sim::Command> SearchPathNode::plan_command(
    const sim::World& world) {
    const auto& node = modes_.node(kNodeSearchPath);
    if (!node.active) {
        planned_mode_.clear();
        return std::nullopt;
    }

    const auto& v = world.vehicle();
    if (node.mode != planned_mode_ || next_waypoint_ >= waypoints_.size()) {
        // Altitude change (or an exhausted path) replans from the current
        // position rather than resuming the old spiral.
        waypoints_ = spiral_waypoints({v.x, v.y}, node.altitude,
                                      params_.spiral_radius_limit,
                                      params_.arc_spacing);
        next_waypoint_ = 0;
        planned_mode_ = node.mode;
    }

    while (next_waypoint_ < waypoints_.size()) {
        const auto& wp = waypoints_[next_waypoint_];
        if (std::hypot(wp.x - v.x, wp.y - v.y) > params_.capture_radius) break;
        ++next_waypoint_;
    }
    if (next_waypoint_ >= waypoints_.size())
        return sim::Command::hold();  // replanned next tick
    const auto& wp = waypoints_[next_waypoint_];
    return sim::Command::goto_point(wp.x, wp.y, wp.altitude);
}

FollowPipelineNode::FollowPipelineNode(const ModeManager& modes,
                                       double inspection_altitude)
    : modes_(modes), inspection_altitude_(inspection_altitude) {}

bool FollowPipelineNode::active() const {
    return modes_.node(kNodeFollowPipeline).active;
}

void FollowPipelineNode::set_detection(double arclength) {
    if (!detection_) {
        detection_ = arclength;
        furthest_ = arclength;
    }
}

std::optional<sim::Command> FollowPipelineNode::plan_command(
    const sim::World& world) {
    if (!active()) return std::nullopt;
    if (!detection_)
        throw std::logic_error("follow_pipeline active without a detection");
    const auto& pipe = world.pipeline();
    double target_s = std::min(pipe.total_length, furthest_ + 1.0);
    sim::Vec2 target = pipe.point_at(target_s);
    return sim::Command::goto_point(target.x, target.y, inspection_altitude_);
}

double FollowPipelineNode::post_step(const sim::World& world) {
    if (!detection_) return 0.0;
    const auto& v = world.vehicle();
    double s = world.pipeline().nearest({v.x, v.y}).arclength;
    double before = furthest_;
    furthest_ = std::max(furthest_, s);
    return furthest_ - before;
}

double FollowPipelineNode::inspected_distance() const {
    return detection_ ? furthest_ - *detection_ : 0.0;
}

MaintainMotionNode::MaintainMotionNode(const ModeManager& modes,
                                       double recovery_duration)
    : modes_(modes), recovery_duration_(recovery_duration) {}

bool MaintainMotionNode::tick(sim::World& world, suave::bus::Bus& bus,
                              double dt) {
    const auto& node = modes_.node(kNodeMaintainMotion);
    if (node.mode != "fd_recover_thrusters") {
        timer_ = 0.0;  // leaving recovery resets the countdown
        return false;
    }
    timer_ += dt;
    // Small slack so accumulated dt rounding cannot add an extra tick.
    if (timer_ + 1e-9 >= recovery_duration_ && world.failed_thruster_count() > 0) {
        world.recover_all_thrusters();
        bus::DiagnosticStatus status;
        status.level = bus::DiagnosticStatus::Level::OK;
        status.name = kNodeMaintainMotion;
        status.message = "recovered";
        bus.publish(kDiagnosticsTopic,
                    {kDiagnosticsTopic, world.clock(), status},
                    kNodeMaintainMotion);
    }
    return true;  // recovery holds the vehicle
}

MissionCoordinator::MissionCoordinator(suave::bus::Bus& bus, double time_limit,
                                       bool direct_mode_switch)
    : bus_(bus), time_limit_(time_limit),
      direct_mode_switch_(direct_mode_switch) {}

MissionPhase MissionCoordinator::tick(sim::World& world,
                                      FollowPipelineNode& follow,
                                      double visibility) {
    double t = world.clock();
    if (!started_) {
        started_ = true;
        t_search_start_ = t;
        bus_.call_service(kObjectiveService,
                          bus::ObjectiveRequest{bus::ObjectiveRequest::Action::SET, "F1"},
                          "coordinator");
        bus_.call_service(kObjectiveService,
                          bus::ObjectiveRequest{bus::ObjectiveRequest::Action::SET, "F2"},
                          "coordinator");
    }
    if (phase_ == MissionPhase::DONE) return phase_;
    if (t >= time_limit_) {
        phase_ = MissionPhase::DONE;
        return phase_;
    }
    if (phase_ == MissionPhase::SEARCH) {
        if (auto det = world.detect_pipeline(visibility)) {
            t_detect_ = t;
            follow.set_detection(det->arclength);
            bus_.call_service(
                kObjectiveService,
                bus::ObjectiveRequest{bus::ObjectiveRequest::Action::REMOVE, "F2"},
                "coordinator");
            bus_.call_service(
                kObjectiveService,
                bus::ObjectiveRequest{bus::ObjectiveRequest::Action::SET, "F3"},
                "coordinator");
            if (direct_mode_switch_) {
                bus_.call_service(change_mode_service(kNodeSearchPath),
                                  bus::ChangeModeRequest{kNodeSearchPath, "fd_unground"},
                                  "coordinator");
                bus_.call_service(
                    change_mode_service(kNodeFollowPipeline),
                    bus::ChangeModeRequest{kNodeFollowPipeline, "fd_follow_pipeline"},
                    "coordinator");
            }
            phase_ = MissionPhase::INSPECT;
        }
    }
    return phase_;
}

double MissionCoordinator::search_time() const {
    return t_detect_ ? *t_detect_ - t_search_start_ : time_limit_;
}

}  // namespace suave::managed
