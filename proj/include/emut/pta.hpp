#ifndef EMUT_PTA_HPP
#define EMUT_PTA_HPP

#include <optional>
#include <string>
#include <vector>

#include "emut/model.hpp"

namespace emut {

/// Role tags let the simulator interpret the fixed automaton shapes without
/// pattern-matching on names.
enum class LocationKind {
    IfaceDispatch,  // emits the activation channel, zero dwell
    IfaceIdle,      // waits out the period / listens on the trigger channel
    Idle,
    Read,
    Execute,        // the only locations with cost_rate > 0
    Write,
    MonitorLoop,
};

struct Location {
    std::string name;
    LocationKind kind = LocationKind::Idle;
    std::optional<Time> invariant_upper;  // upper bound on the owning clock
    Energy cost_rate = 0;
    int mode_index = -1;  // Execute locations: -1 base, otherwise mode ordinal
};

struct ClockGuard {
    enum class Op { Eq, Ge, Le };
    int clock = 0;
    Op op = Op::Eq;
    Time bound = 0;
};

struct DataGuard {
    std::string variable;  // port or parameter name
    Interval range;
};

struct Edge {
    int source = 0;
    int target = 0;
    std::vector<ClockGuard> clock_guards;
    std::vector<DataGuard> data_guards;
    std::string sync;       // channel label; empty for internal edges
    bool emit = false;      // true: emit on sync, false: receive
    std::vector<int> resets;
    std::vector<std::pair<std::string, std::string>> updates;  // var := var
    std::string label;
};

enum class PtaRole { Interface, Behavior, Monitor };

struct Pta {
    std::string name;
    PtaRole role = PtaRole::Behavior;
    std::vector<std::string> clocks;
    std::vector<Location> locations;
    std::vector<Edge> edges;
    int initial = 0;
};

/// Per-component execution profile the simulator runs on; derived from the
/// model during translation, kept alongside the structural automata.
struct ComponentRuntime {
    std::string name;
    TriggerSpec trigger;
    Interval exec;
    Energy rate = 0;
    std::vector<Mode> modes;
    std::vector<InPort> in_ports;
    std::vector<std::string> out_ports;
    int interface_index = -1;  // indices into PtaNetwork::automata
    int behavior_index = -1;
};

struct Route {
    std::string source_component, source_port;
    std::string sink_component, sink_port;
};

struct PtaNetwork {
    std::string model_name;
    std::vector<Pta> automata;  // 2m+1: interface+behavior per component, monitor
    std::vector<std::string> channels;
    std::vector<Parameter> parameters;
    std::vector<ComponentRuntime> components;
    std::vector<Route> routes;

    std::size_t component_count() const { return components.size(); }
};

/// Full translation: interface + behavior automaton per component plus one
/// monitor summing per-component costs. Precondition: model validates
/// cleanly (starved data triggers allowed, they just never fire).
PtaNetwork to_pta(const ArchitectureModel& model);

Pta interface_automaton(const Component& comp);
Pta behavior_automaton(const Component& comp);
Pta monitor_automaton(const ArchitectureModel& model);

/// Human-readable listing of the network for inspection; not a stable format.
std::string debug_listing(const PtaNetwork& network);

}  // namespace emut

#endif
