#include "emut/model.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace emut {

const char* to_string(DiagCode code) {
    switch (code) {
        case DiagCode::SyntaxError: return "SYNTAX_ERROR";
        case DiagCode::ParamBoundsInverted: return "PARAM_BOUNDS_INVERTED";
        case DiagCode::DuplicateParam: return "DUPLICATE_PARAM";
        case DiagCode::DuplicateName: return "DUPLICATE_NAME";
        case DiagCode::DuplicatePort: return "DUPLICATE_PORT";
        case DiagCode::NonpositivePeriod: return "NONPOSITIVE_PERIOD";
        case DiagCode::NegativeExec: return "NEGATIVE_EXEC";
        case DiagCode::BcetGtWcet: return "BCET_GT_WCET";
        case DiagCode::WcetGtPeriod: return "WCET_GT_PERIOD";
        case DiagCode::NegativeRate: return "NEGATIVE_RATE";
        case DiagCode::UnknownTriggerPort: return "UNKNOWN_TRIGGER_PORT";
        case DiagCode::UnboundTriggerPort: return "UNBOUND_TRIGGER_PORT";
        case DiagCode::UnknownParam: return "UNKNOWN_PARAM";
        case DiagCode::ModeGuardUnknownRef: return "MODE_GUARD_UNKNOWN_REF";
        case DiagCode::ModeGuardOverlap: return "MODE_GUARD_OVERLAP";
        case DiagCode::ModeExecExceedsPeriod: return "MODE_EXEC_EXCEEDS_PERIOD";
        case DiagCode::UnknownEndpoint: return "UNKNOWN_ENDPOINT";
        case DiagCode::SelfConnection: return "SELF_CONNECTION";
        case DiagCode::DuplicateSink: return "DUPLICATE_SINK";
        case DiagCode::CyclicDataflow: return "CYCLIC_DATAFLOW";
        case DiagCode::EmptyModel: return "EMPTY_MODEL";
    }
    return "UNKNOWN";
}

bool has_dataflow_cycle(const ArchitectureModel& model) {
    // DFS over the component graph induced by connections.
    std::map<std::string, std::vector<std::string>> adj;
    for (const auto& c : model.connections)
        adj[c.source_component].push_back(c.sink_component);

    enum class Mark { White, Grey, Black };
    std::map<std::string, Mark> mark;
    for (const auto& c : model.components) mark[c.name] = Mark::White;

    std::vector<std::pair<std::string, std::size_t>> stack;
    for (const auto& c : model.components) {
        if (mark[c.name] != Mark::White) continue;
        stack.push_back({c.name, 0});
        mark[c.name] = Mark::Grey;
        while (!stack.empty()) {
            auto& [node, idx] = stack.back();
            auto& out = adj[node];
            if (idx < out.size()) {
                const std::string& next = out[idx++];
                auto it = mark.find(next);
                if (it == mark.end()) continue;  // dangling endpoint, reported elsewhere
                if (it->second == Mark::Grey) return true;
                if (it->second == Mark::White) {
                    it->second = Mark::Grey;
                    stack.push_back({next, 0});
                }
            } else {
                mark[node] = Mark::Black;
                stack.pop_back();
            }
        }
    }
    return false;
}

namespace {

void validate_component(const ArchitectureModel& model, const Component& comp,
                        std::vector<Diagnostic>& out) {
    auto emit = [&](DiagCode code, std::string element, std::string msg) {
        out.push_back({code, std::move(element), std::move(msg)});
    };

    std::set<std::string> ports;
    for (const auto& p : comp.in_ports) {
        if (!ports.insert(p.name).second)
            emit(DiagCode::DuplicatePort, comp.name + "." + p.name,
                 "duplicate port '" + p.name + "' in component '" + comp.name + "'");
        if (p.param && !model.find_parameter(*p.param))
            emit(DiagCode::UnknownParam, comp.name + "." + p.name,
                 "port '" + p.name + "' bound to undeclared parameter '" + *p.param + "'");
    }
    for (const auto& p : comp.out_ports) {
        if (!ports.insert(p).second)
            emit(DiagCode::DuplicatePort, comp.name + "." + p,
                 "duplicate port '" + p + "' in component '" + comp.name + "'");
    }

    if (comp.exec.lo < 0)
        emit(DiagCode::NegativeExec, comp.name,
             "negative execution time in component '" + comp.name + "'");
    if (comp.exec.lo > comp.exec.hi)
        emit(DiagCode::BcetGtWcet, comp.name,
             "bcet " + std::to_string(comp.exec.lo) + " exceeds wcet " +
                 std::to_string(comp.exec.hi) + " in component '" + comp.name + "'");
    if (comp.energy_rate < 0)
        emit(DiagCode::NegativeRate, comp.name,
             "negative energy rate in component '" + comp.name + "'");

    if (comp.trigger.is_periodic()) {
        if (comp.trigger.period <= 0)
            emit(DiagCode::NonpositivePeriod, comp.name,
                 "period must be positive in component '" + comp.name + "'");
        else if (comp.exec.hi > comp.trigger.period)
            emit(DiagCode::WcetGtPeriod, comp.name,
                 "wcet " + std::to_string(comp.exec.hi) + " exceeds period " +
                     std::to_string(comp.trigger.period) + " in component '" + comp.name + "'");
    } else {
        if (!comp.find_in_port(comp.trigger.port))
            emit(DiagCode::UnknownTriggerPort, comp.name,
                 "trigger port '" + comp.trigger.port + "' is not an input port of '" +
                     comp.name + "'");
    }

    for (std::size_t i = 0; i < comp.modes.size(); ++i) {
        const Mode& m = comp.modes[i];
        const std::string path = comp.name + ".mode[" + std::to_string(i) + "]";
        bool known = comp.find_in_port(m.guard_ref) != nullptr ||
                     model.find_parameter(m.guard_ref) != nullptr;
        if (!known)
            emit(DiagCode::ModeGuardUnknownRef, path,
                 "mode guard references unknown name '" + m.guard_ref + "'");
        if (m.exec.lo < 0)
            emit(DiagCode::NegativeExec, path, "negative mode execution time");
        if (m.exec.lo > m.exec.hi)
            emit(DiagCode::BcetGtWcet, path,
                 "mode bcet " + std::to_string(m.exec.lo) + " exceeds wcet " +
                     std::to_string(m.exec.hi));
        if (m.energy_rate < 0)
            emit(DiagCode::NegativeRate, path, "negative mode energy rate");
        if (comp.trigger.is_periodic() && comp.trigger.period > 0 &&
            m.exec.hi > comp.trigger.period)
            emit(DiagCode::ModeExecExceedsPeriod, path,
                 "mode wcet " + std::to_string(m.exec.hi) + " exceeds period " +
                     std::to_string(comp.trigger.period));
        for (std::size_t j = i + 1; j < comp.modes.size(); ++j) {
            const Mode& other = comp.modes[j];
            if (m.guard_ref == other.guard_ref && m.guard.overlaps(other.guard))
                emit(DiagCode::ModeGuardOverlap, path,
                     "mode guards overlap on '" + m.guard_ref + "'");
        }
    }
}

}  // namespace

std::vector<Diagnostic> validate(const ArchitectureModel& model) {
    std::vector<Diagnostic> out;
    auto emit = [&](DiagCode code, std::string element, std::string msg) {
        out.push_back({code, std::move(element), std::move(msg)});
    };

    if (model.components.empty())
        emit(DiagCode::EmptyModel, model.name, "model has no components");

    std::set<std::string> param_names;
    for (const auto& p : model.parameters) {
        if (!param_names.insert(p.name).second)
            emit(DiagCode::DuplicateParam, p.name, "duplicate parameter '" + p.name + "'");
        if (p.domain.lo > p.domain.hi)
            emit(DiagCode::ParamBoundsInverted, p.name,
                 "parameter '" + p.name + "' has lo > hi");
    }

    std::set<std::string> comp_names;
    for (const auto& c : model.components) {
        if (!comp_names.insert(c.name).second)
            emit(DiagCode::DuplicateName, c.name, "duplicate component '" + c.name + "'");
        validate_component(model, c, out);
    }

    std::set<std::pair<std::string, std::string>> sinks;
    for (const auto& conn : model.connections) {
        const std::string label = conn.source_component + "." + conn.source_port + " -> " +
                                  conn.sink_component + "." + conn.sink_port;
        const Component* src = model.find_component(conn.source_component);
        const Component* dst = model.find_component(conn.sink_component);
        if (!src || !src->has_out_port(conn.source_port)) {
            emit(DiagCode::UnknownEndpoint, label, "unknown connection source");
            continue;
        }
        if (!dst || !dst->find_in_port(conn.sink_port)) {
            emit(DiagCode::UnknownEndpoint, label, "unknown connection sink");
            continue;
        }
        if (conn.source_component == conn.sink_component)
            emit(DiagCode::SelfConnection, label, "component connected to itself");
        if (!sinks.insert({conn.sink_component, conn.sink_port}).second)
            emit(DiagCode::DuplicateSink, label,
                 "sink port '" + conn.sink_component + "." + conn.sink_port +
                     "' has multiple sources");
    }

    // DataDriven trigger ports must have a data source.
    for (const auto& c : model.components) {
        if (c.trigger.is_periodic()) continue;
        const InPort* port = c.find_in_port(c.trigger.port);
        if (!port) continue;  // already reported
        bool connected = sinks.count({c.name, c.trigger.port}) > 0;
        bool bound = port->param.has_value();
        if (!connected && !bound)
            emit(DiagCode::UnboundTriggerPort, c.name + "." + c.trigger.port,
                 "data trigger port '" + c.trigger.port +
                     "' is neither connected nor parameter-bound");
    }

    if (has_dataflow_cycle(model))
        emit(DiagCode::CyclicDataflow, model.name, "data-flow graph contains a cycle");

    return out;
}

}  // namespace emut
