#include "emut/pta.hpp"

#include <sstream>

namespace emut {

namespace {

std::string act_channel(const std::string& comp) { return "act_" + comp; }
std::string port_channel(const std::string& comp, const std::string& port) {
    return "ch_" + comp + "_" + port;
}

}  // namespace

Pta interface_automaton(const Component& comp) {
    Pta pta;
    pta.name = comp.name + "_if";
    pta.role = PtaRole::Interface;

    if (comp.trigger.is_periodic()) {
        // Dispatch fires immediately (first activation at t = 0), Idle waits
        // out the period on clock x.
        pta.clocks = {"x"};
        pta.locations.push_back({"Dispatch", LocationKind::IfaceDispatch, Time{0}, 0});
        pta.locations.push_back(
            {"Idle", LocationKind::IfaceIdle, comp.trigger.period, 0});
        pta.initial = 0;
        Edge fire;
        fire.source = 0;
        fire.target = 1;
        fire.sync = act_channel(comp.name);
        fire.emit = true;
        fire.resets = {0};  // x := 0
        fire.label = "Dispatch->Idle";
        pta.edges.push_back(fire);
        Edge wait;
        wait.source = 1;
        wait.target = 0;
        wait.clock_guards.push_back({0, ClockGuard::Op::Eq, comp.trigger.period});
        wait.label = "Idle->Dispatch";
        pta.edges.push_back(wait);
    } else {
        pta.locations.push_back({"Idle", LocationKind::IfaceIdle, std::nullopt, 0});
        pta.locations.push_back({"Dispatch", LocationKind::IfaceDispatch, Time{0}, 0});
        pta.initial = 0;
        Edge recv;
        recv.source = 0;
        recv.target = 1;
        recv.sync = port_channel(comp.name, comp.trigger.port);
        recv.emit = false;
        recv.label = "Idle->Dispatch";
        pta.edges.push_back(recv);
        Edge fire;
        fire.source = 1;
        fire.target = 0;
        fire.sync = act_channel(comp.name);
        fire.emit = true;
        fire.label = "Dispatch->Idle";
        pta.edges.push_back(fire);
    }
    return pta;
}

Pta behavior_automaton(const Component& comp) {
    Pta pta;
    pta.name = comp.name + "_beh";
    pta.role = PtaRole::Behavior;
    pta.clocks = {"y"};
    pta.initial = 0;

    pta.locations.push_back({"Idle", LocationKind::Idle, std::nullopt, 0});
    pta.locations.push_back({"Read", LocationKind::Read, Time{0}, 0});

    Edge activate;
    activate.source = 0;
    activate.target = 1;
    activate.sync = act_channel(comp.name);
    activate.emit = false;
    activate.resets = {0};  // y := 0
    activate.label = "Idle->Read";
    pta.edges.push_back(activate);

    // One executing location per mode, plus the base location for valuations
    // matching no mode. Cost accrues only here.
    auto add_execute = [&](const std::string& name, const Interval& exec,
                           Energy rate, int mode_index,
                           const std::vector<DataGuard>& guards) {
        int exec_loc = static_cast<int>(pta.locations.size());
        pta.locations.push_back(
            {name, LocationKind::Execute, exec.hi, rate, mode_index});
        Edge start;
        start.source = 1;
        start.target = exec_loc;
        start.data_guards = guards;
        start.resets = {0};
        start.label = "Read->" + name;
        pta.edges.push_back(start);
        return exec_loc;
    };

    std::vector<int> exec_locs;
    for (std::size_t i = 0; i < comp.modes.size(); ++i) {
        const Mode& m = comp.modes[i];
        exec_locs.push_back(add_execute("Execute_m" + std::to_string(i), m.exec,
                                        m.energy_rate, static_cast<int>(i),
                                        {{m.guard_ref, m.guard}}));
    }
    exec_locs.push_back(
        add_execute("Execute", comp.exec, comp.energy_rate, -1, {}));

    // Write chain: one emit per out port, all zero-dwell.
    std::vector<int> write_locs;
    for (std::size_t i = 0; i <= comp.out_ports.size(); ++i) {
        std::string name = i == 0 ? "Write" : "Write_" + std::to_string(i);
        if (i == comp.out_ports.size() && i > 0) name = "Done";
        if (i == 0 && comp.out_ports.empty()) name = "Write";
        write_locs.push_back(static_cast<int>(pta.locations.size()));
        pta.locations.push_back({name, LocationKind::Write, Time{0}, 0});
        if (i == comp.out_ports.size()) break;
    }

    std::size_t mode_i = 0;
    for (int exec_loc : exec_locs) {
        const Interval& exec = mode_i < comp.modes.size()
                                   ? comp.modes[mode_i].exec
                                   : comp.exec;
        Edge finish;
        finish.source = exec_loc;
        finish.target = write_locs.front();
        finish.clock_guards.push_back({0, ClockGuard::Op::Ge, exec.lo});
        finish.label = pta.locations[exec_loc].name + "->Write";
        pta.edges.push_back(finish);
        ++mode_i;
    }

    for (std::size_t i = 0; i < comp.out_ports.size(); ++i) {
        Edge emit;
        emit.source = write_locs[i];
        emit.target = write_locs[i + 1];
        emit.sync = port_channel(comp.name, comp.out_ports[i]);
        emit.emit = true;
        emit.label = pta.locations[write_locs[i]].name + "->" +
                     pta.locations[write_locs[i + 1]].name;
        pta.edges.push_back(emit);
    }

    Edge done;
    done.source = write_locs.back();
    done.target = 0;
    done.label = pta.locations[write_locs.back()].name + "->Idle";
    pta.edges.push_back(done);
    return pta;
}

Pta monitor_automaton(const ArchitectureModel& model) {
    Pta pta;
    pta.name = "monitor";
    pta.role = PtaRole::Monitor;
    pta.locations.push_back({"Observe", LocationKind::MonitorLoop, std::nullopt, 0});
    pta.initial = 0;
    // total = sum of per-component costs, maintained as a derived quantity.
    for (const auto& c : model.components)
        pta.edges.push_back({0, 0, {}, {}, "", false, {},
                             {{"total", "c_" + c.name}}, "sum_" + c.name});
    return pta;
}

PtaNetwork to_pta(const ArchitectureModel& model) {
    PtaNetwork net;
    net.model_name = model.name;
    net.parameters = model.parameters;

    for (const auto& comp : model.components) {
        ComponentRuntime rt;
        rt.name = comp.name;
        rt.trigger = comp.trigger;
        rt.exec = comp.exec;
        rt.rate = comp.energy_rate;
        rt.modes = comp.modes;
        rt.in_ports = comp.in_ports;
        rt.out_ports = comp.out_ports;
        rt.interface_index = static_cast<int>(net.automata.size());
        net.automata.push_back(interface_automaton(comp));
        rt.behavior_index = static_cast<int>(net.automata.size());
        net.automata.push_back(behavior_automaton(comp));
        net.components.push_back(std::move(rt));

        net.channels.push_back(act_channel(comp.name));
        for (const auto& p : comp.out_ports)
            net.channels.push_back(port_channel(comp.name, p));
    }
    net.automata.push_back(monitor_automaton(model));

    for (const auto& c : model.connections)
        net.routes.push_back(
            {c.source_component, c.source_port, c.sink_component, c.sink_port});
    return net;
}

std::string debug_listing(const PtaNetwork& network) {
    std::ostringstream os;
    os << "network " << network.model_name << " (" << network.automata.size()
       << " automata)\n";
    for (const auto& pta : network.automata) {
        const char* role = pta.role == PtaRole::Interface   ? "interface"
                           : pta.role == PtaRole::Behavior ? "behavior"
                                                           : "monitor";
        os << "automaton " << pta.name << " [" << role << "]\n";
        for (std::size_t i = 0; i < pta.locations.size(); ++i) {
            const Location& loc = pta.locations[i];
            os << "  loc " << loc.name;
            if (static_cast<int>(i) == pta.initial) os << " (initial)";
            if (loc.invariant_upper) os << " inv<=" << *loc.invariant_upper;
            if (loc.cost_rate > 0) os << " rate=" << loc.cost_rate;
            os << "\n";
        }
        for (const auto& e : pta.edges) {
            os << "  edge " << pta.locations[e.source].name << " -> "
               << pta.locations[e.target].name;
            for (const auto& g : e.clock_guards) {
                const char* op = g.op == ClockGuard::Op::Eq   ? "=="
                                 : g.op == ClockGuard::Op::Ge ? ">="
                                                              : "<=";
                os << " [" << pta.clocks[g.clock] << op << g.bound << "]";
            }
            for (const auto& g : e.data_guards)
                os << " [" << g.variable << " in [" << g.range.lo << ","
                   << g.range.hi << "]]";
            if (!e.sync.empty()) os << (e.emit ? " !" : " ?") << e.sync;
            os << "\n";
        }
    }
    return os.str();
}

}  // namespace emut
