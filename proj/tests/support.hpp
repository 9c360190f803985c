// Shared test helpers: programmatic model builders and a random model
// generator for property tests. Test-only; independent of the code under
// test beyond the public model types.
#ifndef EMUT_TESTS_SUPPORT_HPP
#define EMUT_TESTS_SUPPORT_HPP

#include <set>
#include <string>
#include <vector>

#include "emut/model.hpp"
#include "emut/sim.hpp"

namespace emut::testing {

/// Single periodic component, fixed exec time, no modes.
inline ArchitectureModel periodic_model(Energy rate, Time exec, Time period,
                                        const std::string& name = "worker") {
    ArchitectureModel model;
    model.name = "m_" + name;
    Component comp;
    comp.name = name;
    comp.trigger = TriggerSpec::periodic(period);
    comp.exec = {exec, exec};
    comp.energy_rate = rate;
    model.components.push_back(comp);
    return model;
}

/// Brute-force cycle oracle: follows every connection chain up to m hops.
inline bool cycle_oracle(const ArchitectureModel& model) {
    const std::size_t m = model.components.size();
    for (const auto& start : model.components) {
        std::set<std::string> frontier{start.name};
        for (std::size_t hop = 0; hop < m; ++hop) {
            std::set<std::string> next;
            for (const auto& conn : model.connections)
                if (frontier.count(conn.source_component))
                    next.insert(conn.sink_component);
            if (next.count(start.name)) return true;
            frontier = std::move(next);
        }
    }
    return false;
}

/// Random well-formed model: 1-4 periodic components, 0-2 parameters,
/// occasional modes and a forward chain of connections.
inline ArchitectureModel random_model(Rng& rng) {
    ArchitectureModel model;
    model.name = "rand";

    const int n_params = static_cast<int>(rng.uniform(0, 2));
    for (int p = 0; p < n_params; ++p) {
        Parameter param;
        param.name = "p" + std::to_string(p);
        param.domain.lo = 0;
        param.domain.hi = rng.uniform(1, 9);
        model.parameters.push_back(param);
    }

    const int n_comps = static_cast<int>(rng.uniform(1, 4));
    for (int c = 0; c < n_comps; ++c) {
        Component comp;
        comp.name = "c" + std::to_string(c);
        const Time period = rng.uniform(5, 30);
        comp.trigger = TriggerSpec::periodic(period);
        const Time wcet = rng.uniform(1, std::min<Time>(period, 10));
        const Time bcet = rng.uniform(1, wcet);
        comp.exec = {bcet, wcet};
        comp.energy_rate = rng.uniform(0, 8);
        if (!model.parameters.empty() && rng.uniform(0, 1) == 1) {
            const auto& param = model.parameters[static_cast<std::size_t>(
                rng.uniform(0, static_cast<std::int64_t>(model.parameters.size()) - 1))];
            comp.in_ports.push_back({"cfg", param.name});
            if (rng.uniform(0, 1) == 1) {
                Mode mode;
                mode.guard_ref = "cfg";
                const Value mid = (param.domain.lo + param.domain.hi) / 2;
                mode.guard = {mid, param.domain.hi};
                const Time mwcet = rng.uniform(1, std::min<Time>(period, 10));
                mode.exec = {rng.uniform(1, mwcet), mwcet};
                mode.energy_rate = rng.uniform(0, 12);
                comp.modes.push_back(mode);
            }
        }
        if (c > 0 && rng.uniform(0, 1) == 1) {
            comp.in_ports.push_back({"din", std::nullopt});
        }
        comp.out_ports.push_back("dout");
        model.components.push_back(comp);
    }

    // Forward chain keeps the graph acyclic by construction.
    for (int c = 1; c < n_comps; ++c) {
        Component& sink = model.components[static_cast<std::size_t>(c)];
        if (sink.in_ports.empty() || sink.in_ports.back().name != "din") continue;
        model.connections.push_back({model.components[static_cast<std::size_t>(c - 1)].name,
                                     "dout", sink.name, "din"});
    }
    return model;
}

}  // namespace emut::testing

#endif
