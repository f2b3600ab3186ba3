#ifndef SUAVE_RUNNER_HPP
#define SUAVE_RUNNER_HPP

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "suave/bus.hpp"
#include "suave/managed.hpp"
#include "suave/managing.hpp"
#include "suave/simworld.hpp"

namespace suave::runner {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct StartPoseParams {
    double min_offset = 5.0;   // meters from the pipeline
    double max_offset = 15.0;
    double initial_altitude = 1.0;
};

struct RunConfig {
    double time_limit = 300.0;
    double dt = 0.1;
    sim::WaterVisibilityModel water_visibility;
    std::vector<sim::ThrusterEvent> thruster_events;
    managing::ManagerKind manager = managing::ManagerKind::METACONTROL;
    managing::ManagerConfig manager_config;
    sim::KinematicsParams kinematics;
    double pipeline_length = 60.0;
    StartPoseParams start_pose;
    managed::SearchParams search;
    double recovery_duration = 10.0;
    double inspection_altitude = 1.0;
    double observer_period = 0.5;
    int runs = 20;
    std::uint64_t base_seed = 1;
    std::string output_dir;
    bool trace = false;
    bool kb_snapshots = false;

    void validate() const;  // throws ConfigError
    std::string to_json() const;
    static RunConfig from_json(const std::string& text);
    static RunConfig from_file(const std::string& path);
};

struct RunMetrics {
    std::uint64_t seed = 0;
    bool pipeline_found = false;
    double search_time = 0.0;
    double distance_inspected = 0.0;
};

struct BatchStats {
    struct Metric {
        double mean = 0.0;
        double std = 0.0;  // sample (N-1); NaN for a single run
    };
    Metric search_time;
    Metric distance;
    int runs = 0;
};

BatchStats compute_stats(const std::vector<RunMetrics>& runs);

/// One fully wired mission instance: world, bus, managed nodes, monitors and
/// the selected manager. Tick-level access is exposed so tests can observe
/// intermediate state.
class Mission {
public:
    Mission(const RunConfig& config, std::uint64_t seed);
    ~Mission();

    void tick();
    bool done() const;
    void run_to_completion();

    RunMetrics metrics() const;

    suave::bus::Bus& bus() { return bus_; }
    sim::World& world() { return *world_; }
    const managed::ModeManager& mode_manager() const { return *modes_; }
    const managed::MissionCoordinator& coordinator() const { return *coordinator_; }
    managing::MetacontrolManager* metacontrol();

    /// Per-step trajectory rows (t,x,y,z,heading,wv,thruster bitmask,modes),
    /// collected when tracing is enabled.
    const std::vector<std::string>& trace_rows() const { return trace_rows_; }
    const std::vector<std::pair<int, std::string>>& kb_snapshots() const {
        return snapshots_;
    }

private:
    RunConfig config_;
    std::uint64_t seed_;
    suave::bus::Bus bus_;
    std::unique_ptr<sim::World> world_;
    std::unique_ptr<managed::ModeManager> modes_;
    std::unique_ptr<managed::SearchPathNode> search_;
    std::unique_ptr<managed::FollowPipelineNode> follow_;
    std::unique_ptr<managed::MaintainMotionNode> maintain_;
    std::unique_ptr<managed::MissionCoordinator> coordinator_;
    std::unique_ptr<managing::WaterVisibilityObserver> wv_observer_;
    std::unique_ptr<managing::ThrusterMonitor> thruster_monitor_;
    std::unique_ptr<managing::Manager> manager_;
    std::vector<std::string> trace_rows_;
    std::vector<std::pair<int, std::string>> snapshots_;
};

RunMetrics run_once(const RunConfig& config, std::uint64_t seed);

struct BatchResult {
    std::vector<RunMetrics> runs;
    BatchStats stats;
    double wall_clock_s = 0.0;
};

/// Runs missions on seeds base_seed .. base_seed+runs-1, in parallel across
/// isolated worlds, and (when output_dir is set) writes results.csv and
/// stats.csv. Outputs are byte-deterministic for a given config and seed.
BatchResult run_batch(const RunConfig& config);

std::string results_csv(const RunConfig& config,
                        const std::vector<RunMetrics>& runs);
std::string stats_csv(const RunConfig& config, const BatchResult& result);

}  // namespace suave::runner

#endif
