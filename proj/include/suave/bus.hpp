#ifndef SUAVE_BUS_HPP
#define SUAVE_BUS_HPP

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace suave::bus {

/// Raised when the system is wired inconsistently (payload kind mismatch,
/// duplicate service, handler re-entering publish on its own topic).
/// A wiring error aborts the run; it signals a build bug, not a runtime
/// condition.
class WiringError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class ServiceNotFound : public std::runtime_error {
public:
    explicit ServiceNotFound(const std::string& name)
        : std::runtime_error("no such service: " + name) {}
};

struct DiagnosticStatus {
    enum class Level { OK, WARN, ERROR };
    Level level = Level::OK;
    std::string name;     // source identifier, e.g. "water_visibility_observer"
    std::string message;
    std::vector<std::pair<std::string, std::string>> values;  // unique keys

    std::optional<std::string> value(const std::string& key) const;
};

/// Formats a numeric diagnostic value with the fixed two-decimal convention.
std::string format_diagnostic_value(double v);

using Payload = std::variant<DiagnosticStatus>;

struct Envelope {
    std::string topic;
    double stamp = 0.0;   // simulated seconds
    Payload payload;
};

struct ChangeModeRequest {
    std::string node;
    std::string mode;
};

struct ObjectiveRequest {
    enum class Action { SET, REMOVE };
    Action action = Action::SET;
    std::string function_id;
};

using ServiceRequest = std::variant<ChangeModeRequest, ObjectiveRequest>;

struct ServiceResponse {
    bool success = false;
    std::string detail;
};

/// Every endpoint touch is recorded with the actor that made it, so tests
/// can check which interfaces a manager actually used.
struct AuditRecord {
    enum class Access { Subscribe, Publish, RegisterService, CallService };
    std::string actor;
    Access access;
    std::string endpoint;
};

/// Synchronous in-process topic/service fabric. Single-threaded by contract:
/// one simulation thread drives all publishes and service calls.
class Bus {
public:
    using Handler = std::function<void(const Envelope&)>;
    using Service = std::function<ServiceResponse(const ServiceRequest&)>;

    int subscribe(const std::string& topic, Handler handler,
                  const std::string& actor = "");

    /// Delivers to all subscribers, in subscription order, before returning.
    /// A publish with no subscribers succeeds and drops the message.
    void publish(const std::string& topic, Envelope env,
                 const std::string& actor = "");

    void register_service(const std::string& name, Service handler,
                          const std::string& actor = "");

    /// Throws ServiceNotFound for an unregistered name; the caller decides
    /// whether that is fatal.
    ServiceResponse call_service(const std::string& name,
                                 const ServiceRequest& req,
                                 const std::string& actor = "");

    std::size_t topic_count() const { return topics_.size(); }
    std::size_t service_count() const { return services_.size(); }
    bool has_topic(const std::string& topic) const;
    bool has_service(const std::string& name) const;

    const std::vector<AuditRecord>& audit_log() const { return audit_; }

private:
    struct Topic {
        std::vector<std::pair<int, Handler>> subscribers;
        std::size_t payload_kind = SIZE_MAX;  // fixed by first use
        double last_stamp = 0.0;
        bool saw_stamp = false;
        bool delivering = false;              // re-entrancy guard
    };

    std::map<std::string, Topic> topics_;
    std::map<std::string, Service> services_;
    std::vector<AuditRecord> audit_;
    int next_subscription_id_ = 0;
};

}  // namespace suave::bus

#endif
