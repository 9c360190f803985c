#ifndef EMUT_SIM_HPP
#define EMUT_SIM_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "emut/pta.hpp"

namespace emut {

/// Splittable deterministic generator (splitmix64). Bitwise reproducible
/// across platforms, unlike the standard distributions.
struct Rng {
    std::uint64_t state;

    explicit Rng(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    /// Uniform draw from the inclusive range [lo, hi].
    std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(next() % span);
    }
};

/// Derives an independent stream for run `index` from the master seed.
std::uint64_t mix_seed(std::uint64_t master, std::uint64_t index);

struct SimulationQuery {
    std::int64_t runs = 1;
    Time bound = 0;
    std::vector<std::string> monitored = {"total"};

    bool valid() const { return runs >= 1 && bound > 0 && !monitored.empty(); }
};

using EnvValuation = std::map<std::string, Value>;

/// Samples each parameter uniformly from its domain.
EnvValuation sample_env(const std::vector<Parameter>& params, Rng& rng);

struct TraceEvent {
    Time time = 0;
    std::string automaton;
    std::string edge;

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct Breakpoint {
    Time t = 0;
    Energy value = 0;

    friend bool operator==(const Breakpoint&, const Breakpoint&) = default;
};

/// Piecewise-linear accumulated energy. Breakpoints are strictly increasing
/// in time; segments are linear with integer slope.
Energy eval_piecewise(const std::vector<Breakpoint>& bps, Time t);

struct SimulationTrace {
    std::int64_t run = 0;
    std::uint64_t seed = 0;
    EnvValuation env;
    Time bound = 0;
    std::vector<TraceEvent> events;
    std::map<std::string, std::vector<Breakpoint>> energy;  // "total", "c_<name>"
};

/// Accumulated energy sampled at t_i = i*bound/N, i = 1..N. Values are
/// stored scaled by N so fractional sample times stay exact integers.
struct EnergySignal {
    Time bound = 0;
    std::int64_t samples = 0;          // N
    std::vector<Energy> scaled;        // scaled[i] = N * energy(t_{i+1})

    double value(std::size_t i) const {
        return static_cast<double>(scaled[i]) / static_cast<double>(samples);
    }
    double time(std::size_t i) const {
        return static_cast<double>((static_cast<std::int64_t>(i) + 1) * bound) /
               static_cast<double>(samples);
    }

    friend bool operator==(const EnergySignal&, const EnergySignal&) = default;
};

enum class DwellPolicy {
    Seeded,     // dwell uniform over [bcet, wcet] from the run seed
    WorstCase,  // dwell fixed at wcet (deterministic semantics)
};

struct SimError : std::runtime_error {
    std::string code;
    SimError(std::string c, const std::string& msg)
        : std::runtime_error(msg), code(std::move(c)) {}
};

/// Single bounded run of the network under a complete environment valuation.
SimulationTrace run_once(const PtaNetwork& network, Time bound,
                         const EnvValuation& env, std::uint64_t seed,
                         DwellPolicy policy = DwellPolicy::Seeded);

/// `query.runs` independent runs; run j uses seed mix(master_seed, j) for
/// both its environment sample and its dwell stream.
std::vector<SimulationTrace> simulate(const PtaNetwork& network,
                                      const SimulationQuery& query,
                                      std::uint64_t master_seed);

/// Exact interpolation of a trace's energy variable on the N-point grid.
/// Throws SimError{UNKNOWN_VARIABLE} for unmonitored variables.
EnergySignal sample_energy(const SimulationTrace& trace,
                           const std::string& variable, std::int64_t n);

/// n * (E * floor(T/P) + min(E, T mod P)) for a fixed-exec periodic
/// component without modes. Throws SimError{NOT_CLOSED_FORM} otherwise.
Energy closed_form_periodic_energy(const Component& comp, Time t);

/// One trace per line: {run, seed, env, events, energy}.
std::string export_traces_jsonl(const std::vector<SimulationTrace>& traces);

}  // namespace emut

#endif
