#include "emut/sim.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

namespace emut {

std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index) {
    Rng rng(master ^ (0xA0761D6478BD642Full * (index + 1)));
    return rng.next();
}

EnvValuation sample_env(const std::vector<Parameter>& params, Rng& rng) {
    EnvValuation env;
    for (const auto& p : params) env[p.name] = rng.uniform(p.domain.lo, p.domain.hi);
    return env;
}

Energy eval_piecewise(const std::vector<Breakpoint>& bps, Time t) {
    if (bps.empty() || t <= bps.front().t) return bps.empty() ? 0 : bps.front().value;
    if (t >= bps.back().t) return bps.back().value;
    auto it = std::upper_bound(bps.begin(), bps.end(), t,
                               [](Time v, const Breakpoint& b) { return v < b.t; });
    const Breakpoint& hi = *it;
    const Breakpoint& lo = *(it - 1);
    const Energy slope = (hi.value - lo.value) / (hi.t - lo.t);
    return lo.value + slope * (t - lo.t);
}

namespace {

constexpr Time kInf = std::numeric_limits<Time>::max();

struct CompState {
    const ComponentRuntime* rt = nullptr;
    bool busy = false;
    Time entry = 0;
    Time completion = 0;
    Energy active_rate = 0;
    Energy accrued = 0;
    Value write_value = 0;
    Time next_fire = kInf;
    std::map<std::string, Value> ports;
    std::vector<Breakpoint> bps{{0, 0}};
};

class Runner {
public:
    Runner(const PtaNetwork& net, Time bound, const EnvValuation& env,
           std::uint64_t seed, DwellPolicy policy)
        : net_(net), bound_(bound), env_(env), policy_(policy),
          rng_(mix_seed(seed, 0x5D31EC5)) {
        trace_.seed = seed;
        trace_.env = env;
        trace_.bound = bound;
        for (const auto& rt : net.components) {
            CompState st;
            st.rt = &rt;
            for (const auto& p : rt.in_ports)
                st.ports[p.name] = p.param ? env_value(*p.param) : 0;
            if (rt.trigger.is_periodic()) st.next_fire = 0;
            states_.push_back(std::move(st));
        }
        // Routing and trigger bookkeeping.
        for (std::size_t i = 0; i < net.components.size(); ++i)
            index_[net.components[i].name] = i;
        // Parameter-bound data trigger ports receive their value once at
        // t = 0, which counts as a trigger event.
        for (std::size_t i = 0; i < states_.size(); ++i) {
            const auto& rt = *states_[i].rt;
            if (rt.trigger.is_periodic()) continue;
            const InPort* port = nullptr;
            for (const auto& p : rt.in_ports)
                if (p.name == rt.trigger.port) port = &p;
            if (port && port->param) pending_.push_back(i);
        }
    }

    SimulationTrace run() {
        Time t = 0;
        while (t <= bound_) {
            process_instant(t);
            Time next = kInf;
            for (const auto& st : states_) {
                if (st.busy)
                    next = std::min(next, st.completion);
                else if (st.rt->trigger.is_periodic())
                    next = std::min(next, st.next_fire);
            }
            if (next == kInf || next > bound_) break;
            t = next;
        }
        finalize();
        return std::move(trace_);
    }

private:
    Value env_value(const std::string& name) const {
        auto it = env_.find(name);
        if (it == env_.end())
            throw SimError("INCOMPLETE_ENV", "no value for parameter '" + name + "'");
        return it->second;
    }

    void push_bp(CompState& st, Time t, Energy value) {
        if (!st.bps.empty() && st.bps.back().t == t) return;  // value unchanged at an instant
        st.bps.push_back({t, value});
    }

    void event(Time t, const std::string& automaton, std::string edge) {
        trace_.events.push_back({t, automaton, std::move(edge)});
    }

    void activate(std::size_t i, Time t) {
        CompState& st = states_[i];
        const ComponentRuntime& rt = *st.rt;
        const std::string iface = net_.automata[rt.interface_index].name;
        const std::string beh = net_.automata[rt.behavior_index].name;

        // Latch mode against current port/parameter values at Read time.
        Interval exec = rt.exec;
        Energy rate = rt.rate;
        std::string exec_name = "Execute";
        for (std::size_t m = 0; m < rt.modes.size(); ++m) {
            const Mode& mode = rt.modes[m];
            Value v;
            if (auto it = st.ports.find(mode.guard_ref); it != st.ports.end())
                v = it->second;
            else
                v = env_value(mode.guard_ref);
            if (mode.guard.contains(v)) {
                exec = mode.exec;
                rate = mode.energy_rate;
                exec_name = "Execute_m" + std::to_string(m);
                break;
            }
        }

        Time dwell = policy_ == DwellPolicy::WorstCase
                         ? exec.hi
                         : rng_.uniform(exec.lo, exec.hi);

        st.write_value = rt.in_ports.empty() ? 0 : st.ports[rt.in_ports.front().name];
        st.busy = true;
        st.entry = t;
        st.completion = t + dwell;
        st.active_rate = rate;
        push_bp(st, t, st.accrued);

        event(t, iface, "Dispatch->Idle");
        event(t, beh, "Idle->Read");
        event(t, beh, "Read->" + exec_name);
        exec_names_[i] = exec_name;
    }

    void complete(std::size_t i, Time t) {
        CompState& st = states_[i];
        const ComponentRuntime& rt = *st.rt;
        const std::string beh = net_.automata[rt.behavior_index].name;

        st.accrued += st.active_rate * (t - st.entry);
        st.busy = false;
        push_bp(st, t, st.accrued);
        event(t, beh, exec_names_[i] + "->Write");

        for (const auto& port : rt.out_ports) {
            event(t, beh, "!ch_" + rt.name + "_" + port);
            for (const auto& route : net_.routes) {
                if (route.source_component != rt.name || route.source_port != port)
                    continue;
                auto it = index_.find(route.sink_component);
                if (it == index_.end()) continue;
                CompState& sink = states_[it->second];
                sink.ports[route.sink_port] = st.write_value;
                const ComponentRuntime& srt = *sink.rt;
                if (!srt.trigger.is_periodic() && srt.trigger.port == route.sink_port) {
                    if (sink.busy)
                        // Overrun policy: triggers arriving mid-execution are dropped.
                        event(t, net_.automata[srt.interface_index].name,
                              "dropped_trigger:" + route.sink_port);
                    else
                        pending_.push_back(it->second);
                }
            }
        }
        event(t, beh, "Write->Idle");
    }

    void process_instant(Time t) {
        bool progress = true;
        while (progress) {
            progress = false;
            for (std::size_t i = 0; i < states_.size(); ++i) {
                if (states_[i].busy && states_[i].completion == t) {
                    complete(i, t);
                    progress = true;
                }
            }
            for (std::size_t i = 0; i < states_.size(); ++i) {
                CompState& st = states_[i];
                if (st.rt->trigger.is_periodic() && st.next_fire == t) {
                    st.next_fire = t + st.rt->trigger.period;
                    if (!st.busy) activate(i, t);
                    progress = true;
                }
            }
            if (!pending_.empty()) {
                std::vector<std::size_t> batch;
                batch.swap(pending_);
                std::stable_sort(batch.begin(), batch.end());
                for (std::size_t i : batch) {
                    if (states_[i].busy)
                        event(t, net_.automata[states_[i].rt->interface_index].name,
                              "dropped_trigger:" + states_[i].rt->trigger.port);
                    else
                        activate(i, t);
                }
                progress = true;
            }
        }
    }

    void finalize() {
        for (auto& st : states_) {
            Energy final_value = st.accrued;
            if (st.busy) final_value += st.active_rate * (bound_ - st.entry);
            push_bp(st, bound_, final_value);
        }
        // Per-component signals plus the monitor total on the union grid.
        std::set<Time> times;
        for (const auto& st : states_)
            for (const auto& bp : st.bps) times.insert(bp.t);
        std::vector<Breakpoint> total;
        for (Time t : times) {
            Energy sum = 0;
            for (const auto& st : states_) sum += eval_piecewise(st.bps, t);
            total.push_back({t, sum});
        }
        for (const auto& st : states_)
            trace_.energy["c_" + st.rt->name] = st.bps;
        trace_.energy["total"] = std::move(total);
    }

    const PtaNetwork& net_;
    Time bound_;
    const EnvValuation& env_;
    DwellPolicy policy_;
    Rng rng_;
    std::vector<CompState> states_;
    std::map<std::string, std::size_t> index_;
    std::map<std::size_t, std::string> exec_names_;
    std::vector<std::size_t> pending_;
    SimulationTrace trace_;
};

}  // namespace

SimulationTrace run_once(const PtaNetwork& network, Time bound,
                         const EnvValuation& env, std::uint64_t seed,
                         DwellPolicy policy) {
    if (bound <= 0) throw SimError("INVALID_BOUND", "bound must be positive");
    return Runner(network, bound, env, seed, policy).run();
}

std::vector<SimulationTrace> simulate(const PtaNetwork& network,
                                      const SimulationQuery& query,
                                      std::uint64_t master_seed) {
    if (!query.valid())
        throw SimError("INVALID_QUERY", "runs >= 1, bound > 0, monitored non-empty");
    std::vector<SimulationTrace> traces;
    traces.reserve(query.runs);
    for (std::int64_t j = 0; j < query.runs; ++j) {
        const std::uint64_t seed = mix_seed(master_seed, static_cast<std::uint64_t>(j));
        Rng env_rng(seed);
        EnvValuation env = sample_env(network.parameters, env_rng);
        SimulationTrace trace =
            run_once(network, query.bound, env, seed, DwellPolicy::Seeded);
        trace.run = j;
        traces.push_back(std::move(trace));
    }
    return traces;
}

EnergySignal sample_energy(const SimulationTrace& trace, const std::string& variable,
                           std::int64_t n) {
    auto it = trace.energy.find(variable);
    if (it == trace.energy.end())
        throw SimError("UNKNOWN_VARIABLE", "variable '" + variable + "' not monitored");
    if (n < 1) throw SimError("INVALID_SAMPLE_COUNT", "N must be >= 1");
    const std::vector<Breakpoint>& bps = it->second;

    EnergySignal sig;
    sig.bound = trace.bound;
    sig.samples = n;
    sig.scaled.reserve(n);
    std::size_t seg = 0;
    for (std::int64_t i = 1; i <= n; ++i) {
        const std::int64_t p = i * trace.bound;  // sample time scaled by n
        while (seg + 1 < bps.size() && bps[seg + 1].t * n < p) ++seg;
        if (seg + 1 >= bps.size()) {
            sig.scaled.push_back(bps.back().value * n);
            continue;
        }
        const Breakpoint& lo = bps[seg];
        const Breakpoint& hi = bps[seg + 1];
        const Energy slope = (hi.value - lo.value) / (hi.t - lo.t);
        sig.scaled.push_back(lo.value * n + slope * (p - lo.t * n));
    }
    return sig;
}

Energy closed_form_periodic_energy(const Component& comp, Time t) {
    if (!comp.trigger.is_periodic() || comp.exec.lo != comp.exec.hi ||
        !comp.modes.empty())
        throw SimError("NOT_CLOSED_FORM",
                       "closed form requires a fixed-exec periodic component "
                       "without modes");
    if (t < 0) throw SimError("NOT_CLOSED_FORM", "negative time");
    const Energy n = comp.energy_rate;
    const Time e = comp.exec.lo;
    const Time p = comp.trigger.period;
    return n * (e * (t / p) + std::min(e, t % p));
}

std::string export_traces_jsonl(const std::vector<SimulationTrace>& traces) {
    std::string out;
    for (const auto& trace : traces) {
        nlohmann::ordered_json j;
        j["run"] = trace.run;
        j["seed"] = trace.seed;
        j["env"] = nlohmann::ordered_json::object();
        for (const auto& [k, v] : trace.env) j["env"][k] = v;
        j["events"] = nlohmann::ordered_json::array();
        for (const auto& e : trace.events)
            j["events"].push_back({e.time, e.automaton, e.edge});
        j["energy"] = nlohmann::ordered_json::object();
        for (const auto& [var, bps] : trace.energy) {
            auto arr = nlohmann::ordered_json::array();
            for (const auto& bp : bps) arr.push_back({bp.t, bp.value});
            j["energy"][var] = std::move(arr);
        }
        out += j.dump();
        out += '\n';
    }
    return out;
}

}  // namespace emut
