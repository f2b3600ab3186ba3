#include "suave/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <future>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"

namespace suave::runner {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), f, v);
    return buf;
}

std::string fmt3(double v) {
    if (std::isnan(v)) return "nan";
    return fmt("%.3f", v);
}

}  // namespace

void RunConfig::validate() const {
    if (time_limit <= 0.0) throw ConfigError("time_limit_s must be positive");
    if (dt <= 0.0) throw ConfigError("dt_s must be positive");
    if (runs < 1) throw ConfigError("runs must be >= 1");
    if (water_visibility.min <= 0.0 ||
        water_visibility.min > water_visibility.max)
        throw ConfigError("water_visibility requires 0 < min <= max");
    if (water_visibility.period <= 0.0)
        throw ConfigError("water_visibility period_s must be positive");
    for (const auto& e : thruster_events) {
        if (e.time < 0.0) throw ConfigError("thruster event time must be >= 0");
        if (e.thruster < 1 || e.thruster > 6)
            throw ConfigError("thruster index must be 1..6");
    }
    if (!std::is_sorted(thruster_events.begin(), thruster_events.end(),
                        [](const auto& a, const auto& b) { return a.time < b.time; }))
        throw ConfigError("thruster_events must be sorted by time");
    if (manager_config.mape_period <= 0.0 ||
        manager_config.adaptation_period <= 0.0)
        throw ConfigError("manager periods must be positive");
    if (pipeline_length <= 0.0) throw ConfigError("pipeline length_m must be positive");
    if (start_pose.min_offset < 0.0 ||
        start_pose.min_offset > start_pose.max_offset)
        throw ConfigError("start_pose requires 0 <= min_offset_m <= max_offset_m");
    if (recovery_duration <= 0.0)
        throw ConfigError("recovery_duration_s must be positive");
    if (inspection_altitude <= 0.0)
        throw ConfigError("inspection_altitude_m must be positive");
    if (observer_period <= 0.0)
        throw ConfigError("observer_period_s must be positive");
    if (search.spiral_radius_limit <= 0.0 || search.capture_radius <= 0.0 ||
        search.arc_spacing <= 0.0)
        throw ConfigError("search parameters must be positive");
    for (const auto& [node, mode] : manager_config.fixed_modes)
        if (!managed::ModeTable().find(node, mode))
            throw ConfigError("fixed_modes: unknown node/mode " + node + "/" + mode);
}

std::string RunConfig::to_json() const {
    nlohmann::ordered_json j;
    j["time_limit_s"] = time_limit;
    j["dt_s"] = dt;
    j["water_visibility"] = {{"min", water_visibility.min},
                             {"max", water_visibility.max},
                             {"period_s", water_visibility.period},
                             {"phase_rad", water_visibility.phase}};
    j["thruster_events"] = nlohmann::ordered_json::array();
    for (const auto& e : thruster_events)
        j["thruster_events"].push_back({{"time_s", e.time}, {"thruster", e.thruster}});
    j["manager"] = {{"kind", managing::to_string(manager)},
                    {"mape_period_s", manager_config.mape_period},
                    {"adaptation_period_s", manager_config.adaptation_period},
                    {"fixed_modes", manager_config.fixed_modes},
                    {"random_excluded_nodes", manager_config.random_excluded_nodes}};
    j["kinematics"] = {{"nominal_speed_mps", kinematics.nominal_speed},
                       {"max_yaw_rate_rps", kinematics.max_yaw_rate},
                       {"vertical_speed_mps", kinematics.vertical_speed},
                       {"thruster_degradation", kinematics.thruster_degradation},
                       {"failure_heading_noise_rps", kinematics.heading_noise}};
    j["pipeline"] = {{"length_m", pipeline_length}};
    j["start_pose"] = {{"min_offset_m", start_pose.min_offset},
                       {"max_offset_m", start_pose.max_offset},
                       {"initial_altitude_m", start_pose.initial_altitude}};
    j["search"] = {{"spiral_radius_limit_m", search.spiral_radius_limit},
                   {"waypoint_capture_radius_m", search.capture_radius},
                   {"arc_spacing_m", search.arc_spacing}};
    j["recovery_duration_s"] = recovery_duration;
    j["inspection_altitude_m"] = inspection_altitude;
    j["observer_period_s"] = observer_period;
    j["runs"] = runs;
    j["base_seed"] = base_seed;
    j["output_dir"] = output_dir;
    j["trace"] = trace;
    j["kb_snapshots"] = kb_snapshots;
    return j.dump();
}

RunConfig RunConfig::from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config JSON: ") + e.what());
    }

    static const std::set<std::string> known = {
        "time_limit_s", "dt_s", "water_visibility", "thruster_events",
        "manager", "kinematics", "pipeline", "start_pose", "search",
        "recovery_duration_s", "inspection_altitude_m", "observer_period_s",
        "runs", "base_seed", "output_dir", "trace", "kb_snapshots"};
    for (const auto& [key, value] : j.items())
        if (!known.count(key)) throw ConfigError("unknown config field: " + key);

    RunConfig c;
    try {
        c.time_limit = j.value("time_limit_s", c.time_limit);
        c.dt = j.value("dt_s", c.dt);
        if (j.contains("water_visibility")) {
            const auto& w = j["water_visibility"];
            c.water_visibility.min = w.value("min", c.water_visibility.min);
            c.water_visibility.max = w.value("max", c.water_visibility.max);
            c.water_visibility.period = w.value("period_s", c.water_visibility.period);
            c.water_visibility.phase = w.value("phase_rad", c.water_visibility.phase);
        }
        if (j.contains("thruster_events")) {
            c.thruster_events.clear();
            for (const auto& e : j["thruster_events"])
                c.thruster_events.push_back(
                    {e.at("time_s").get<double>(), e.at("thruster").get<int>()});
        }
        if (j.contains("manager")) {
            const auto& m = j["manager"];
            if (m.contains("kind"))
                c.manager = managing::manager_kind_from_string(m["kind"].get<std::string>());
            c.manager_config.mape_period =
                m.value("mape_period_s", c.manager_config.mape_period);
            c.manager_config.adaptation_period =
                m.value("adaptation_period_s", c.manager_config.adaptation_period);
            if (m.contains("fixed_modes"))
                c.manager_config.fixed_modes =
                    m["fixed_modes"].get<std::map<std::string, std::string>>();
            if (m.contains("random_excluded_nodes"))
                c.manager_config.random_excluded_nodes =
                    m["random_excluded_nodes"].get<std::vector<std::string>>();
        }
        if (j.contains("kinematics")) {
            const auto& k = j["kinematics"];
            c.kinematics.nominal_speed =
                k.value("nominal_speed_mps", c.kinematics.nominal_speed);
            c.kinematics.max_yaw_rate =
                k.value("max_yaw_rate_rps", c.kinematics.max_yaw_rate);
            c.kinematics.vertical_speed =
                k.value("vertical_speed_mps", c.kinematics.vertical_speed);
            c.kinematics.thruster_degradation =
                k.value("thruster_degradation", c.kinematics.thruster_degradation);
            c.kinematics.heading_noise =
                k.value("failure_heading_noise_rps", c.kinematics.heading_noise);
        }
        if (j.contains("pipeline"))
            c.pipeline_length = j["pipeline"].value("length_m", c.pipeline_length);
        if (j.contains("start_pose")) {
            const auto& s = j["start_pose"];
            c.start_pose.min_offset = s.value("min_offset_m", c.start_pose.min_offset);
            c.start_pose.max_offset = s.value("max_offset_m", c.start_pose.max_offset);
            c.start_pose.initial_altitude =
                s.value("initial_altitude_m", c.start_pose.initial_altitude);
        }
        if (j.contains("search")) {
            const auto& s = j["search"];
            c.search.spiral_radius_limit =
                s.value("spiral_radius_limit_m", c.search.spiral_radius_limit);
            c.search.capture_radius =
                s.value("waypoint_capture_radius_m", c.search.capture_radius);
            c.search.arc_spacing = s.value("arc_spacing_m", c.search.arc_spacing);
        }
        c.recovery_duration = j.value("recovery_duration_s", c.recovery_duration);
        c.inspection_altitude = j.value("inspection_altitude_m", c.inspection_altitude);
        c.observer_period = j.value("observer_period_s", c.observer_period);
        c.runs = j.value("runs", c.runs);
        c.base_seed = j.value("base_seed", c.base_seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.trace = j.value("trace", c.trace);
        c.kb_snapshots = j.value("kb_snapshots", c.kb_snapshots);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("invalid config value: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    c.validate();
    return c;
}

RunConfig RunConfig::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

BatchStats compute_stats(const std::vector<RunMetrics>& runs) {
    BatchStats stats;
    stats.runs = static_cast<int>(runs.size());
    if (runs.empty()) return stats;
    auto metric = [&](auto getter) {
        BatchStats::Metric m;
        double sum = 0.0;
        for (const auto& r : runs) sum += getter(r);
        m.mean = sum / static_cast<double>(runs.size());
        if (runs.size() < 2) {
            m.std = std::numeric_limits<double>::quiet_NaN();
        } else {
            double ss = 0.0;
            for (const auto& r : runs) {
                double d = getter(r) - m.mean;
                ss += d * d;
            }
            m.std = std::sqrt(ss / static_cast<double>(runs.size() - 1));
        }
        return m;
    };
    stats.search_time = metric([](const RunMetrics& r) { return r.search_time; });
    stats.distance = metric([](const RunMetrics& r) { return r.distance_inspected; });
    return stats;
}

Mission::Mission(const RunConfig& config, std::uint64_t seed)
    : config_(config), seed_(seed) {
    config_.validate();

    sim::Pipeline pipeline = sim::Pipeline::straight(config_.pipeline_length);
    world_ = std::make_unique<sim::World>(pipeline, config_.kinematics, seed);

    // Seeded start pose: a random point offset 5-15 m (configurable) from a
    // random spot along the pipeline, random heading.
    auto& rng = world_->rng();
    std::uniform_real_distribution<double> along(0.0, pipeline.total_length);
    std::uniform_real_distribution<double> bearing(0.0, 2.0 * kPi);
    std::uniform_real_distribution<double> offset(config_.start_pose.min_offset,
                                                  config_.start_pose.max_offset);
    std::uniform_real_distribution<double> hdg(-kPi, kPi);
    sim::Vec2 anchor = pipeline.point_at(along(rng));
    double phi = bearing(rng);
    double r = offset(rng);
    auto& v = world_->vehicle();
    v.x = anchor.x + r * std::cos(phi);
    v.y = anchor.y + r * std::sin(phi);
    v.z = config_.start_pose.initial_altitude;
    v.heading = sim::wrap_angle(hdg(rng));

    modes_ = std::make_unique<managed::ModeManager>(
        [this]() { return world_->clock(); });
    modes_->register_services(bus_);

    managed::SearchParams search = config_.search;
    search.arc_spacing =
        std::max(search.arc_spacing, config_.kinematics.nominal_speed * config_.dt);
    search_ = std::make_unique<managed::SearchPathNode>(*modes_, search);
    follow_ = std::make_unique<managed::FollowPipelineNode>(
        *modes_, config_.inspection_altitude);
    maintain_ = std::make_unique<managed::MaintainMotionNode>(
        *modes_, config_.recovery_duration);

    wv_observer_ = std::make_unique<managing::WaterVisibilityObserver>(
        config_.water_visibility, config_.observer_period);
    thruster_monitor_ = std::make_unique<managing::ThrusterMonitor>();

    manager_ = managing::Manager::make(config_.manager, config_.manager_config,
                                       seed);
    manager_->start(bus_);
    if (config_.kb_snapshots) {
        if (auto* mc = metacontrol())
            mc->set_snapshot_sink([this](int cycle, const std::string& json) {
                snapshots_.emplace_back(cycle, json);
            });
    }

    bool direct = config_.manager != managing::ManagerKind::METACONTROL;
    coordinator_ = std::make_unique<managed::MissionCoordinator>(
        bus_, config_.time_limit, direct);
    // Mission start: adaptation goals go out at t = 0, before the first tick.
    coordinator_->tick(*world_, *follow_, config_.water_visibility.at(0.0));
}

Mission::~Mission() = default;

managing::MetacontrolManager* Mission::metacontrol() {
    return dynamic_cast<managing::MetacontrolManager*>(manager_.get());
}

bool Mission::done() const {
    return coordinator_->phase() == managed::MissionPhase::DONE;
}

void Mission::tick() {
    if (done()) return;
    double t = world_->clock();

    world_->inject_failures(config_.thruster_events);
    thruster_monitor_->tick(*world_, bus_);
    wv_observer_->maybe_publish(t, bus_);
    manager_->tick(t, bus_);

    bool held = maintain_->tick(*world_, bus_, config_.dt);
    std::optional<sim::Command> cmd;
    bool follow_drives = false;
    if (!held) {
        cmd = follow_->plan_command(*world_);  // T2 supersedes T1
        follow_drives = cmd.has_value();
        if (!cmd) cmd = search_->plan_command(*world_);
    }
    world_->step(config_.dt, cmd.value_or(sim::Command::hold()));
    if (follow_drives) follow_->post_step(*world_);

    double wv = config_.water_visibility.at(world_->clock());
    coordinator_->tick(*world_, *follow_, wv);

    if (config_.trace) {
        int mask = 0;
        const auto& th = world_->thrusters();
        for (int i = 0; i < 6; ++i)
            if (th[static_cast<std::size_t>(i)] == sim::ThrusterStatus::FAILED)
                mask |= 1 << i;
        const auto& veh = world_->vehicle();
        std::string row = fmt("%.1f", world_->clock()) + "," + fmt3(veh.x) + "," +
                          fmt3(veh.y) + "," + fmt3(veh.z) + "," +
                          fmt("%.4f", veh.heading) + "," + fmt3(wv) + "," +
                          std::to_string(mask) + "," +
                          modes_->node(managed::kNodeSearchPath).mode + "|" +
                          modes_->node(managed::kNodeFollowPipeline).mode + "|" +
                          modes_->node(managed::kNodeMaintainMotion).mode;
        trace_rows_.push_back(std::move(row));
    }
}

void Mission::run_to_completion() {
    // Safety margin over the expected tick count guards against a stuck DONE
    // transition without masking it.
    auto max_ticks =
        static_cast<std::uint64_t>(config_.time_limit / config_.dt) + 16;
    for (std::uint64_t i = 0; i < max_ticks && !done(); ++i) tick();
    if (!done())
        throw std::runtime_error("mission failed to reach DONE in time");
}

RunMetrics Mission::metrics() const {
    RunMetrics m;
    m.seed = seed_;
    m.pipeline_found = coordinator_->pipeline_found();
    m.search_time = coordinator_->search_time();
    m.distance_inspected = follow_->inspected_distance();
    return m;
}

RunMetrics run_once(const RunConfig& config, std::uint64_t seed) {
    Mission mission(config, seed);
    mission.run_to_completion();
    return mission.metrics();
}

std::string results_csv(const RunConfig& config,
                        const std::vector<RunMetrics>& runs) {
    std::string out = "# config: " + config.to_json() + "\n";
    out += "manager,seed,pipeline_found,search_time_s,distance_inspected_m\n";
    std::string kind = managing::to_string(config.manager);
    for (const auto& r : runs) {
        out += kind + "," + std::to_string(r.seed) + "," +
               (r.pipeline_found ? "true" : "false") + "," +
               fmt3(r.search_time) + "," + fmt3(r.distance_inspected) + "\n";
    }
    return out;
}

std::string stats_csv(const RunConfig& config, const BatchResult& result) {
    std::string out = "# config: " + config.to_json() + "\n";
    out += "# wall_clock_s: " + fmt3(result.wall_clock_s) + "\n";
    out += "manager,runs,search_time_mean_s,search_time_std_s,"
           "distance_inspected_mean_m,distance_inspected_std_m\n";
    const auto& s = result.stats;
    out += managing::to_string(config.manager) + "," + std::to_string(s.runs) +
           "," + fmt3(s.search_time.mean) + "," + fmt3(s.search_time.std) + "," +
           fmt3(s.distance.mean) + "," + fmt3(s.distance.std) + "\n";
    return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_run_artifacts(const RunConfig& config, const Mission& mission,
                         std::uint64_t seed,
                         const std::filesystem::path& dir) {
    std::string kind = managing::to_string(config.manager);
    if (config.trace) {
        std::string text =
            "t,x,y,z,heading,wv,thrusters_bitmask,active_modes\n";
        for (const auto& row : mission.trace_rows()) text += row + "\n";
        write_file(dir / ("trace_" + kind + "_seed" + std::to_string(seed) + ".csv"),
                   text);
    }
    if (config.kb_snapshots && !mission.kb_snapshots().empty()) {
        std::string text;
        for (const auto& [cycle, json] : mission.kb_snapshots())
            text += nlohmann::json({{"cycle", cycle},
                                    {"kb", nlohmann::json::parse(json)}})
                        .dump() + "\n";
        write_file(dir / ("kb_" + kind + "_seed" + std::to_string(seed) + ".jsonl"),
                   text);
    }
}

}  // namespace

BatchResult run_batch(const RunConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();

    std::filesystem::path dir;
    if (!config.output_dir.empty()) {
        dir = config.output_dir;
        std::filesystem::create_directories(dir);
    }

    bool needs_mission_artifacts = config.trace || config.kb_snapshots;
    std::vector<std::future<RunMetrics>> futures;
    futures.reserve(static_cast<std::size_t>(config.runs));
    for (int i = 0; i < config.runs; ++i) {
        std::uint64_t seed = config.base_seed + static_cast<std::uint64_t>(i);
        futures.push_back(std::async(
            std::launch::async, [&config, seed, needs_mission_artifacts, &dir]() {
                Mission mission(config, seed);
                mission.run_to_completion();
                if (needs_mission_artifacts && !dir.empty())
                    write_run_artifacts(config, mission, seed, dir);
                return mission.metrics();
            }));
    }

    BatchResult result;
    std::string kind = managing::to_string(config.manager);
    try {
        for (auto& f : futures) result.runs.push_back(f.get());
    } catch (const std::exception& e) {
        // Any remaining futures finish (or fail) before we report.
        for (auto& f : futures)
            if (f.valid()) {
                try { f.wait(); } catch (...) {}
            }
        if (!dir.empty()) {
            std::string partial = "# PARTIAL RESULTS: batch aborted: " +
                                  std::string(e.what()) + "\n";
            partial += results_csv(config, result.runs);
            write_file(dir / ("results_" + kind + ".csv"), partial);
        }
        throw;
    }

    result.stats = compute_stats(result.runs);
    result.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();

    if (!dir.empty()) {
        write_file(dir / ("results_" + kind + ".csv"),
                   results_csv(config, result.runs));
        write_file(dir / ("stats_" + kind + ".csv"), stats_csv(config, result));
    }
    return result;
}

}  // namespace suave::runner
