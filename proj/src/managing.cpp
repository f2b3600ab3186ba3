#include "suave/managing.hpp"

#include <stdexcept>

namespace suave::managing {

namespace {
constexpr const char* kManagerActor = "manager";
}

WaterVisibilityObserver::WaterVisibilityObserver(sim::WaterVisibilityModel model,
                                                 double period)
    : model_(model), period_(period) {
    if (period <= 0.0)
        throw std::invalid_argument("observer period must be positive");
}

void WaterVisibilityObserver::maybe_publish(double t, suave::bus::Bus& bus) {
    if (last_published_ && t + 1e-9 < *last_published_ + period_) return;
    publish(t, bus);
}

void WaterVisibilityObserver::publish(double t, suave::bus::Bus& bus) {
    bus::DiagnosticStatus status;
    status.level = bus::DiagnosticStatus::Level::OK;
    status.name = kWaterVisibilityObserver;
    status.values = {{tomasys::kQaWaterVisibility,
                      bus::format_diagnostic_value(model_.at(t))}};
    bus.publish(managed::kDiagnosticsTopic,
                {managed::kDiagnosticsTopic, t, status}, kWaterVisibilityObserver);
    last_published_ = t;
}

void ThrusterMonitor::tick(const sim::World& world, suave::bus::Bus& bus) {
    const auto& current = world.thrusters();
    if (last_ && *last_ == current) return;
    bus::DiagnosticStatus status;
    bool any_failed = world.failed_thruster_count() > 0;
    status.level = any_failed ? bus::DiagnosticStatus::Level::ERROR
                              : bus::DiagnosticStatus::Level::OK;
    status.name = kThrusterMonitor;
    for (int i = 0; i < 6; ++i) {
        status.values.emplace_back(
            "thruster_" + std::to_string(i + 1),
            current[static_cast<std::size_t>(i)] == sim::ThrusterStatus::FAILED
                ? "FAILED"
                : "AVAILABLE");
    }
    bus.publish(managed::kDiagnosticsTopic,
                {managed::kDiagnosticsTopic, world.clock(), status},
                kThrusterMonitor);
    last_ = current;
}

ManagerKind manager_kind_from_string(const std::string& s) {
    if (s == "none") return ManagerKind::NONE;
    if (s == "random") return ManagerKind::RANDOM;
    if (s == "metacontrol") return ManagerKind::METACONTROL;
    throw std::invalid_argument("unknown manager kind: " + s);
}

std::string to_string(ManagerKind k) {
    switch (k) {
        case ManagerKind::NONE: return "none";
        case ManagerKind::RANDOM: return "random";
        case ManagerKind::METACONTROL: return "metacontrol";
    }
    return "?";
}

std::unique_ptr<Manager> Manager::make(ManagerKind kind,
                                       const ManagerConfig& config,
                                       std::uint64_t seed) {
    switch (kind) {
        case ManagerKind::NONE:
            return std::make_unique<NoneManager>(config);
        case ManagerKind::RANDOM:
            return std::make_unique<RandomManager>(config, seed);
        case ManagerKind::METACONTROL:
            return std::make_unique<MetacontrolManager>(config);
    }
    throw std::invalid_argument("unknown manager kind");
}

NoneManager::NoneManager(ManagerConfig config) : config_(std::move(config)) {}

void NoneManager::start(suave::bus::Bus& bus) {
    bus.register_service(
        managed::kObjectiveService,
        [](const bus::ServiceRequest&) {
            // Adaptation goals are acknowledged and ignored.
            return bus::ServiceResponse{true, ""};
        },
        kManagerActor);
    for (const auto& [node, mode] : config_.fixed_modes)
        bus.call_service(managed::change_mode_service(node),
                         bus::ChangeModeRequest{node, mode}, kManagerActor);
}

void NoneManager::tick(double, suave::bus::Bus&) {}

RandomManager::RandomManager(ManagerConfig config, std::uint64_t seed)
    : config_(std::move(config)), rng_(seed ^ 0x9e3779b97f4a7c15ull) {}

void RandomManager::start(suave::bus::Bus& bus) {
    bus.register_service(
        managed::kObjectiveService,
        [this](const bus::ServiceRequest& req) {
            const auto* obj = std::get_if<bus::ObjectiveRequest>(&req);
            if (!obj)
                return bus::ServiceResponse{false, "expected ObjectiveRequest"};
            std::string node = node_for_function(obj->function_id);
            if (node.empty())
                return bus::ServiceResponse{false,
                                            "unknown function: " + obj->function_id};
            if (obj->action == bus::ObjectiveRequest::Action::SET)
                active_nodes_.insert(node);
            else
                active_nodes_.erase(node);
            return bus::ServiceResponse{true, ""};
        },
        kManagerActor);
}

void RandomManager::tick(double t, suave::bus::Bus& bus) {
    if (!next_adaptation_) next_adaptation_ = config_.adaptation_period;
    if (t + 1e-9 < *next_adaptation_) return;
    *next_adaptation_ += config_.adaptation_period;
    for (const auto& node : active_nodes_) {
        bool excluded = false;
        for (const auto& e : config_.random_excluded_nodes)
            if (e == node) excluded = true;
        if (excluded) continue;
        auto modes = table_.modes_for(node);
        std::uniform_int_distribution<std::size_t> pick(0, modes.size() - 1);
        bus.call_service(managed::change_mode_service(node),
                         bus::ChangeModeRequest{node, modes[pick(rng_)]},
                         kManagerActor);
    }
}

const std::map<std::string, std::pair<std::string, std::string>>&
design_mode_map() {
    static const std::map<std::string, std::pair<std::string, std::string>> m = {
        {"FD1", {managed::kNodeMaintainMotion, "fd_all_thrusters"}},
        {"FD2", {managed::kNodeMaintainMotion, "fd_recover_thrusters"}},
        {"FD3", {managed::kNodeSearchPath, "fd_spiral_low"}},
        {"FD4", {managed::kNodeSearchPath, "fd_spiral_medium"}},
        {"FD5", {managed::kNodeSearchPath, "fd_spiral_high"}},
        {"FD6", {managed::kNodeFollowPipeline, "fd_follow_pipeline"}},
    };
    return m;
}

std::string node_for_function(const std::string& function_id) {
    if (function_id == "F1") return managed::kNodeMaintainMotion;
    if (function_id == "F2") return managed::kNodeSearchPath;
    if (function_id == "F3") return managed::kNodeFollowPipeline;
    return "";
}

MetacontrolManager::MetacontrolManager(ManagerConfig config)
    : config_(std::move(config)), kb_(tomasys::KnowledgeBase::initial()) {}

void MetacontrolManager::start(suave::bus::Bus& bus) {
    bus.subscribe(
        managed::kDiagnosticsTopic,
        [this](const bus::Envelope& env) { on_diagnostic(env); }, kManagerActor);
    bus.register_service(
        managed::kObjectiveService,
        [this](const bus::ServiceRequest& req) {
            const auto* obj = std::get_if<bus::ObjectiveRequest>(&req);
            if (!obj)
                return bus::ServiceResponse{false, "expected ObjectiveRequest"};
            return on_objective(*obj);
        },
        kManagerActor);
    // System modes bridge: the reasoner requests configurations here and the
    // bridge forwards to the per-node change_mode service.
    bus.register_service(
        managed::kRequestConfigurationService,
        [&bus](const bus::ServiceRequest& req) {
            const auto* cm = std::get_if<bus::ChangeModeRequest>(&req);
            if (!cm)
                return bus::ServiceResponse{false, "expected ChangeModeRequest"};
            return bus.call_service(managed::change_mode_service(cm->node), req,
                                    kManagerActor);
        },
        kManagerActor);
}

void MetacontrolManager::on_diagnostic(const suave::bus::Envelope& env) {
    const auto* status = std::get_if<bus::DiagnosticStatus>(&env.payload);
    if (!status) return;
    if (status->name == kWaterVisibilityObserver) {
        if (auto v = status->value(tomasys::kQaWaterVisibility)) {
            try {
                pending_visibility_ = {std::stod(*v), env.stamp};
            } catch (const std::exception&) {
                // Malformed numeric value: an ERROR-level event, not a crash.
            }
        }
    } else if (status->name == kThrusterMonitor) {
        for (const auto& [key, value] : status->values) {
            if (key.rfind("thruster_", 0) != 0) continue;
            pending_components_[key] = value == "FAILED"
                                           ? tomasys::ComponentStatus::FAILED
                                           : tomasys::ComponentStatus::AVAILABLE;
        }
    }
}

suave::bus::ServiceResponse MetacontrolManager::on_objective(
    const suave::bus::ObjectiveRequest& req) {
    try {
        if (req.action == bus::ObjectiveRequest::Action::SET) {
            kb_.set_objective(req.function_id);
        } else {
            const auto* obj = kb_.objective_for_function(req.function_id);
            if (!obj)
                return {false, "no active objective for " + req.function_id};
            std::string node = node_for_function(req.function_id);
            if (!node.empty()) pending_ungrounds_.push_back(node);
            kb_.remove_objective(obj->id);
        }
        return {true, ""};
    } catch (const tomasys::KbError& e) {
        return {false, e.what()};
    }
}

void MetacontrolManager::tick(double t, suave::bus::Bus& bus) {
    if (!next_cycle_) next_cycle_ = t;
    if (t + 1e-9 < *next_cycle_) return;
    *next_cycle_ += config_.mape_period;
    mape_cycle(t, bus);
}

void MetacontrolManager::mape_cycle(double t, suave::bus::Bus& bus) {
    ++cycle_count_;

    // Monitor: drain buffered diagnostics into the knowledge base.
    if (pending_visibility_) {
        kb_.update_measured_qa(tomasys::kQaWaterVisibility,
                               pending_visibility_->first,
                               pending_visibility_->second);
        pending_visibility_.reset();
    }
    for (const auto& [name, status] : pending_components_)
        kb_.update_component_status(name, status);
    pending_components_.clear();

    // Analyze + Plan.
    kb_.analyze();
    tomasys::Configuration config = kb_.plan();

    // Execute. Failed requests are retried next cycle.
    std::vector<std::pair<std::string, std::string>> requests;
    std::swap(requests, retry_);
    for (const auto& node : pending_ungrounds_)
        requests.emplace_back(node, "fd_unground");
    pending_ungrounds_.clear();
    for (const auto& [objective_id, design_id] : config) {
        if (!design_id) continue;  // no feasible design: keep last safe mode
        kb_.apply_grounding(objective_id, *design_id);
        const auto& [node, mode] = design_mode_map().at(*design_id);
        requests.emplace_back(node, mode);
    }
    for (const auto& [node, mode] : requests) {
        auto resp = bus.call_service(managed::kRequestConfigurationService,
                                     bus::ChangeModeRequest{node, mode},
                                     kManagerActor);
        if (!resp.success) retry_.emplace_back(node, mode);
    }

    (void)t;
    if (snapshot_) snapshot_(cycle_count_, kb_.to_json());
}

}  // namespace suave::managing
