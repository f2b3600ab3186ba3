#include "suave/simworld.hpp"

#include <algorithm>
#include <limits>

namespace suave::sim {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double wrap_angle(double a) {
    while (a <= -kPi) a += 2.0 * kPi;
    while (a > kPi) a -= 2.0 * kPi;
    return a;
}

double WaterVisibilityModel::at(double t) const {
    double mean = (min + max) / 2.0;
    double amplitude = (max - min) / 2.0;
    return mean + amplitude * std::sin(2.0 * kPi * t / period + phase);
}

Pipeline Pipeline::straight(double length, Vec2 start) {
    return from_points({start, {start.x + length, start.y}});
}

Pipeline Pipeline::from_points(std::vector<Vec2> points) {
    if (points.size() < 2)
        throw std::invalid_argument("pipeline needs at least 2 points");
    Pipeline p;
    p.polyline = std::move(points);
    for (std::size_t i = 1; i < p.polyline.size(); ++i) {
        double seg = distance(p.polyline[i - 1], p.polyline[i]);
        if (seg == 0.0)
            throw std::invalid_argument("pipeline has coincident points");
        p.total_length += seg;
    }
    return p;
}

NearestPoint Pipeline::nearest(const Vec2& p) const {
    NearestPoint best;
    best.dist = std::numeric_limits<double>::infinity();
    double s_base = 0.0;
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Vec2& a = polyline[i - 1];
        const Vec2& b = polyline[i];
        double seg_len = distance(a, b);
        double vx = b.x - a.x, vy = b.y - a.y;
        double t = ((p.x - a.x) * vx + (p.y - a.y) * vy) / (seg_len * seg_len);
        t = std::clamp(t, 0.0, 1.0);
        Vec2 proj{a.x + t * vx, a.y + t * vy};
        double d = distance(p, proj);
        if (d < best.dist) {
            best.point = proj;
            best.dist = d;
            best.arclength = s_base + t * seg_len;
        }
        s_base += seg_len;
    }
    return best;
}

Vec2 Pipeline::point_at(double s) const {
    s = std::clamp(s, 0.0, total_length);
    for (std::size_t i = 1; i < polyline.size(); ++i) {
        const Vec2& a = polyline[i - 1];
        const Vec2& b = polyline[i];
        double seg_len = distance(a, b);
        if (s <= seg_len) {
            double t = s / seg_len;
            return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
        }
        s -= seg_len;
    }
    return polyline.back();
}

World::World(Pipeline pipeline, KinematicsParams kin, std::uint64_t seed)
    : pipeline_(std::move(pipeline)), kin_(kin), rng_(seed) {
    thrusters_.fill(ThrusterStatus::AVAILABLE);
}

int World::failed_thruster_count() const {
    return static_cast<int>(std::count(thrusters_.begin(), thrusters_.end(),
                                       ThrusterStatus::FAILED));
}

void World::set_thruster(int index1, ThrusterStatus s) {
    if (index1 < 1 || index1 > 6)
        throw std::out_of_range("thruster index out of range");
    thrusters_[static_cast<std::size_t>(index1 - 1)] = s;
}

void World::recover_all_thrusters() {
    thrusters_.fill(ThrusterStatus::AVAILABLE);
}

void World::inject_failures(const std::vector<ThrusterEvent>& events) {
    while (next_event_ < events.size() &&
           events[next_event_].time <= clock_) {
        set_thruster(events[next_event_].thruster, ThrusterStatus::FAILED);
        ++next_event_;
    }
}

void World::step(double dt, const Command& cmd) {
    if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
    if (cmd.kind == Command::Kind::GOTO) {
        int failed = failed_thruster_count();
        double v = kin_.nominal_speed *
                   std::pow(kin_.thruster_degradation, failed);

        double desired = std::atan2(cmd.y - vehicle_.y, cmd.x - vehicle_.x);
        double err = wrap_angle(desired - vehicle_.heading);
        double turn = std::clamp(err, -kin_.max_yaw_rate * dt,
                                 kin_.max_yaw_rate * dt);
        vehicle_.heading = wrap_angle(vehicle_.heading + turn);

        // Each failed thruster perturbs the heading while the vehicle moves.
        std::uniform_real_distribution<double> noise(-kin_.heading_noise,
                                                     kin_.heading_noise);
        for (int i = 0; i < failed; ++i)
            vehicle_.heading = wrap_angle(vehicle_.heading + noise(rng_) * dt);

        // Do not overshoot the target.
        double dist = std::hypot(cmd.x - vehicle_.x, cmd.y - vehicle_.y);
        double advance = std::min(v * dt, dist);
        vehicle_.x += advance * std::cos(vehicle_.heading);
        vehicle_.y += advance * std::sin(vehicle_.heading);

        double dz = cmd.altitude - vehicle_.z;
        double climb = std::clamp(dz, -kin_.vertical_speed * dt,
                                  kin_.vertical_speed * dt);
        vehicle_.z = std::max(0.0, vehicle_.z + climb);
    }
    clock_ += dt;
}

std::optional<DetectionResult> World::detect_pipeline(double visibility) const {
    if (vehicle_.z > visibility) return std::nullopt;
    NearestPoint np = pipeline_.nearest({vehicle_.x, vehicle_.y});
    // tan(45 deg) = 1: detection radius equals altitude.
    if (np.dist > vehicle_.z) return std::nullopt;
    return DetectionResult{np.point, np.arclength};
}

}  // namespace suave::sim
