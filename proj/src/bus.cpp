#include "suave/bus.hpp"

#include <cstdio>

namespace suave::bus {

std::optional<std::string> DiagnosticStatus::value(const std::string& key) const {
    for (const auto& [k, v] : values) {
        if (k == key) return v;
    }
    return std::nullopt;
}

std::string format_diagnostic_value(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

int Bus::subscribe(const std::string& topic, Handler handler,
                   const std::string& actor) {
    if (topic.empty()) throw WiringError("empty topic name");
    auto& t = topics_[topic];
    int id = next_subscription_id_++;
    t.subscribers.emplace_back(id, std::move(handler));
    audit_.push_back({actor, AuditRecord::Access::Subscribe, topic});
    return id;
}

void Bus::publish(const std::string& topic, Envelope env,
                  const std::string& actor) {
    if (topic.empty()) throw WiringError("empty topic name");
    if (env.topic != topic)
        throw WiringError("envelope topic '" + env.topic +
                          "' does not match publish topic '" + topic + "'");
    auto& t = topics_[topic];
    if (t.payload_kind == SIZE_MAX) {
        t.payload_kind = env.payload.index();
    } else if (t.payload_kind != env.payload.index()) {
        throw WiringError("payload kind mismatch on topic " + topic);
    }
    if (t.saw_stamp && env.stamp < t.last_stamp)
        throw WiringError("decreasing stamp on topic " + topic);
    t.last_stamp = env.stamp;
    t.saw_stamp = true;

    if (t.delivering)
        throw WiringError("re-entrant publish on topic " + topic);
    t.delivering = true;
    audit_.push_back({actor, AuditRecord::Access::Publish, topic});
    try {
        for (auto& [id, handler] : t.subscribers) handler(env);
    } catch (...) {
        t.delivering = false;
        throw;
    }
    t.delivering = false;
}

void Bus::register_service(const std::string& name, Service handler,
                           const std::string& actor) {
    if (name.empty()) throw WiringError("empty service name");
    if (services_.count(name))
        throw WiringError("service already registered: " + name);
    services_[name] = std::move(handler);
    audit_.push_back({actor, AuditRecord::Access::RegisterService, name});
}

ServiceResponse Bus::call_service(const std::string& name,
                                  const ServiceRequest& req,
                                  const std::string& actor) {
    audit_.push_back({actor, AuditRecord::Access::CallService, name});
    auto it = services_.find(name);
    if (it == services_.end()) throw ServiceNotFound(name);
    return it->second(req);
}

bool Bus::has_topic(const std::string& topic) const {
    return topics_.count(topic) != 0;
}

bool Bus::has_service(const std::string& name) const {
    return services_.count(name) != 0;
}

}  // namespace suave::bus
