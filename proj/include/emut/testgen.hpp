#ifndef EMUT_TESTGEN_HPP
#define EMUT_TESTGEN_HPP

#include <string>
#include <vector>

#include "emut/equiv.hpp"
#include "emut/mutation.hpp"
#include "emut/sim.hpp"

namespace emut {

/// Timed input (environment valuation + pinned stochastic choices) with the
/// expected energy samples from the original model.
struct TestCase {
    std::string id;
    EnvValuation input;
    std::uint64_t seed = 0;
    DwellPolicy dwell = DwellPolicy::Seeded;
    EnergySignal expected;
};

struct TestSuite {
    std::vector<TestCase> tests;
    Time bound = 0;
    std::int64_t samples = 0;   // N
    std::uint64_t master_seed = 0;
    std::int64_t runs = 0;      // generation query echo

    const TestCase* find(const std::string& id) const {
        for (const auto& t : tests)
            if (t.id == id) return &t;
        return nullptr;
    }
};

struct DetectionResult {
    bool detected = false;
    Energy max_deviation_scaled = 0;
    std::int64_t first_index = -1;  // first sample meeting the threshold
};

struct KillCell {
    bool detected = false;
    Energy max_deviation_scaled = 0;
    std::int64_t first_index = -1;
};

struct KillMatrix {
    std::vector<std::string> test_ids;     // rows
    std::vector<std::string> mutant_ids;   // columns (live mutants)
    std::vector<std::vector<KillCell>> cells;  // cells[row][col]
};

/// One test per simulation run of the original model.
TestSuite generate_tests(const ArchitectureModel& model, const SimulationQuery& query,
                         std::int64_t samples, std::uint64_t master_seed);

/// Builds a test from an equivalence witness; detection under wcet-dwell
/// semantics then reproduces the witness divergence exactly.
TestCase witness_test(const ArchitectureModel& original, const std::string& id,
                      const EnvValuation& witness, Time bound, std::int64_t samples);

/// Replays a test on a model (original or mutant) and samples total energy.
EnergySignal execute_test(const ArchitectureModel& model, const TestCase& test);

/// Threshold oracle: detected iff some sample deviates by >= threshold.
DetectionResult detect_mutant(const EnergySignal& expected,
                              const EnergySignal& observed, Energy threshold);

KillMatrix build_kill_matrix(const TestSuite& suite, const MutantCatalog& catalog,
                             const std::vector<std::string>& live_ids,
                             Energy threshold, int jobs = 1);

/// Detected live mutants / live mutants; 1 when no live mutants exist.
double mutation_score(const KillMatrix& matrix);

/// Greedy in ascending row order: a test is dropped when the remaining
/// suite kills the same mutant set. Score preserving by construction.
TestSuite minimize_suite(const TestSuite& suite, const KillMatrix& matrix);

/// Row indices kept by the greedy pass (used by minimize_suite; exposed for
/// matrix-only callers).
std::vector<std::size_t> minimize_rows(const KillMatrix& matrix);

}  // namespace emut

#endif
