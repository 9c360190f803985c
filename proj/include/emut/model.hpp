#ifndef EMUT_MODEL_HPP
#define EMUT_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace emut {

using Time = std::int64_t;
using Energy = std::int64_t;
using Value = std::int64_t;

/// Closed integer interval [lo, hi].
struct Interval {
    std::int64_t lo = 0;
    std::int64_t hi = 0;

    bool contains(std::int64_t v) const { return lo <= v && v <= hi; }
    bool overlaps(const Interval& other) const {
        return lo <= other.hi && other.lo <= hi;
    }
    std::int64_t width() const { return hi - lo + 1; }

    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Environment input parameter with a bounded integer domain.
struct Parameter {
    std::string name;
    Interval domain;

    friend bool operator==(const Parameter&, const Parameter&) = default;
};

struct TriggerSpec {
    enum class Kind { Periodic, DataDriven };

    Kind kind = Kind::Periodic;
    Time period = 0;       // Periodic only
    std::string port;      // DataDriven only

    static TriggerSpec periodic(Time p) {
        TriggerSpec t;
        t.kind = Kind::Periodic;
        t.period = p;
        return t;
    }
    static TriggerSpec data(std::string p) {
        TriggerSpec t;
        t.kind = Kind::DataDriven;
        t.port = std::move(p);
        return t;
    }
    bool is_periodic() const { return kind == Kind::Periodic; }

    friend bool operator==(const TriggerSpec&, const TriggerSpec&) = default;
};

/// Data-dependent behavior branch. A matching mode overrides the owning
/// component's exec_time and energy_rate for that activation.
struct Mode {
    std::string guard_ref;   // name of an in-port or parameter
    Interval guard;
    Interval exec;           // [bcet, wcet]
    Energy energy_rate = 0;

    friend bool operator==(const Mode&, const Mode&) = default;
};

/// Input port, optionally bound to an environment parameter.
struct InPort {
    std::string name;
    std::optional<std::string> param;

    friend bool operator==(const InPort&, const InPort&) = default;
};

struct Component {
    std::string name;
    TriggerSpec trigger;
    Interval exec;           // [bcet, wcet]
    Energy energy_rate = 0;
    std::vector<InPort> in_ports;
    std::vector<std::string> out_ports;
    std::vector<Mode> modes;

    const InPort* find_in_port(const std::string& port) const {
        for (const auto& p : in_ports)
            if (p.name == port) return &p;
        return nullptr;
    }
    bool has_out_port(const std::string& port) const {
        for (const auto& p : out_ports)
            if (p == port) return true;
        return false;
    }

    friend bool operator==(const Component&, const Component&) = default;
};

struct Connection {
    std::string source_component;
    std::string source_port;
    std::string sink_component;
    std::string sink_port;

    friend bool operator==(const Connection&, const Connection&) = default;
};

struct ArchitectureModel {
    std::string name;
    std::string time_unit = "ms";
    std::vector<Parameter> parameters;
    std::vector<Component> components;
    std::vector<Connection> connections;

    const Component* find_component(const std::string& n) const {
        for (const auto& c : components)
            if (c.name == n) return &c;
        return nullptr;
    }
    Component* find_component(const std::string& n) {
        for (auto& c : components)
            if (c.name == n) return &c;
        return nullptr;
    }
    const Parameter* find_parameter(const std::string& n) const {
        for (const auto& p : parameters)
            if (p.name == n) return &p;
        return nullptr;
    }

    friend bool operator==(const ArchitectureModel&, const ArchitectureModel&) = default;
};

enum class DiagCode {
    SyntaxError,
    ParamBoundsInverted,
    DuplicateParam,
    DuplicateName,
    DuplicatePort,
    NonpositivePeriod,
    NegativeExec,
    BcetGtWcet,
    WcetGtPeriod,
    NegativeRate,
    UnknownTriggerPort,
    UnboundTriggerPort,
    UnknownParam,
    ModeGuardUnknownRef,
    ModeGuardOverlap,
    ModeExecExceedsPeriod,
    UnknownEndpoint,
    SelfConnection,
    DuplicateSink,
    CyclicDataflow,
    EmptyModel,
};

const char* to_string(DiagCode code);

struct Diagnostic {
    DiagCode code;
    std::string element;   // offending component/port/parameter path
    std::string message;
    int line = 0;          // 1-based; 0 when not tied to source text
    int column = 0;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

/// Checks every model invariant. Empty result means the model is well formed.
std::vector<Diagnostic> validate(const ArchitectureModel& model);

/// True iff the data-flow graph induced by `connections` has a cycle.
bool has_dataflow_cycle(const ArchitectureModel& model);

}  // namespace emut

#endif
