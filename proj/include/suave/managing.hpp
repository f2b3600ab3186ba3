#ifndef SUAVE_MANAGING_HPP
#define SUAVE_MANAGING_HPP

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "suave/bus.hpp"
#include "suave/managed.hpp"
#include "suave/simworld.hpp"
#include "suave/tomasys.hpp"

namespace suave::managing {

inline constexpr const char* kWaterVisibilityObserver = "water_visibility_observer";
inline constexpr const char* kThrusterMonitor = "thruster_monitor";

/// Publishes the simulated water visibility to /diagnostics at a fixed
/// period.
class WaterVisibilityObserver {
public:
    WaterVisibilityObserver(sim::WaterVisibilityModel model, double period);

    void maybe_publish(double t, suave::bus::Bus& bus);
    void publish(double t, suave::bus::Bus& bus);

private:
    sim::WaterVisibilityModel model_;
    double period_;
    std::optional<double> last_published_;
};

/// Publishes thruster statuses to /diagnostics at start and on every change
/// (edge-triggered). Failures are ERROR level, recoveries OK.
class ThrusterMonitor {
public:
    void tick(const sim::World& world, suave::bus::Bus& bus);

private:
    std::optional<std::array<sim::ThrusterStatus, 6>> last_;
};

enum class ManagerKind { NONE, RANDOM, METACONTROL };

ManagerKind manager_kind_from_string(const std::string& s);
std::string to_string(ManagerKind k);

struct ManagerConfig {
    double mape_period = 1.0;        // Metacontrol cycle
    double adaptation_period = 15.0; // random manager
    std::map<std::string, std::string> fixed_modes = {
        {managed::kNodeSearchPath, "fd_spiral_medium"},
        {managed::kNodeMaintainMotion, "fd_all_thrusters"},
    };
    std::vector<std::string> random_excluded_nodes;  // nodes random leaves alone
};

/// A managing subsystem. Managers interact with the managed subsystem only
/// through /diagnostics (read), /mros/objective (adaptation goals in) and the
/// per-node change_mode services (write).
class Manager {
public:
    virtual ~Manager() = default;

    /// Wires subscriptions/services; called once before the run starts.
    virtual void start(suave::bus::Bus& bus) = 0;
    virtual void tick(double t, suave::bus::Bus& bus) = 0;

    static std::unique_ptr<Manager> make(ManagerKind kind,
                                         const ManagerConfig& config,
                                         std::uint64_t seed);
};

/// Fixed configuration: applies fixed_modes once at start, acknowledges and
/// ignores objectives, never adapts.
class NoneManager : public Manager {
public:
    explicit NoneManager(ManagerConfig config);
    void start(suave::bus::Bus& bus) override;
    void tick(double t, suave::bus::Bus& bus) override;

private:
    ManagerConfig config_;
};

/// Every adaptation_period, picks a mode uniformly at random (from the mode
/// table, unground included) for each node with an active objective.
class RandomManager : public Manager {
public:
    RandomManager(ManagerConfig config, std::uint64_t seed);
    void start(suave::bus::Bus& bus) override;
    void tick(double t, suave::bus::Bus& bus) override;

private:
    ManagerConfig config_;
    std::mt19937_64 rng_;
    managed::ModeTable table_;
    std::set<std::string> active_nodes_;  // nodes with an active objective
    std::optional<double> next_adaptation_;
};

/// The MAPE-K manager: drains buffered diagnostics into the knowledge base,
/// runs analyze and plan, and executes grounding changes through the
/// request_configuration indirection.
class MetacontrolManager : public Manager {
public:
    MetacontrolManager(ManagerConfig config);
    void start(suave::bus::Bus& bus) override;
    void tick(double t, suave::bus::Bus& bus) override;

    const tomasys::KnowledgeBase& kb() const { return kb_; }
    tomasys::KnowledgeBase& kb() { return kb_; }

    /// Runs one MAPE cycle immediately (test hook; tick() schedules this at
    /// the configured period).
    void mape_cycle(double t, suave::bus::Bus& bus);

    using SnapshotSink = std::function<void(int cycle, const std::string& json)>;
    void set_snapshot_sink(SnapshotSink sink) { snapshot_ = std::move(sink); }

private:
    void on_diagnostic(const suave::bus::Envelope& env);
    suave::bus::ServiceResponse on_objective(const suave::bus::ObjectiveRequest& req);

    ManagerConfig config_;
    tomasys::KnowledgeBase kb_;
    std::optional<double> next_cycle_;
    int cycle_count_ = 0;

    // Diagnostic buffer: latest visibility (sensor semantics), thruster
    // status changes as a union (event semantics).
    std::optional<std::pair<double, double>> pending_visibility_;  // (value, stamp)
    std::map<std::string, tomasys::ComponentStatus> pending_components_;
    std::vector<std::string> pending_ungrounds_;  // nodes to deactivate
    std::vector<std::pair<std::string, std::string>> retry_;  // (node, mode)

    SnapshotSink snapshot_;
};

/// Static FD -> (node, mode) mapping; the mode names transparently encode
/// the design names.
const std::map<std::string, std::pair<std::string, std::string>>& design_mode_map();
std::string node_for_function(const std::string& function_id);

}  // namespace suave::managing

#endif
