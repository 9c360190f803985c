#include "emut/testgen.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "emut/parallel.hpp"

namespace emut {

TestSuite generate_tests(const ArchitectureModel& model, const SimulationQuery& query,
                         std::int64_t samples, std::uint64_t master_seed) {
    const PtaNetwork net = to_pta(model);
    const std::vector<SimulationTrace> traces = simulate(net, query, master_seed);

    TestSuite suite;
    suite.bound = query.bound;
    suite.samples = samples;
    suite.master_seed = master_seed;
    suite.runs = query.runs;
    for (const auto& trace : traces) {
        TestCase tc;
        tc.id = "T" + std::to_string(trace.run + 1);
        tc.input = trace.env;
        tc.seed = trace.seed;
        tc.dwell = DwellPolicy::Seeded;
        tc.expected = sample_energy(trace, "total", samples);
        suite.tests.push_back(std::move(tc));
    }
    return suite;
}

TestCase witness_test(const ArchitectureModel& original, const std::string& id,
                      const EnvValuation& witness, Time bound, std::int64_t samples) {
    const PtaNetwork net = to_pta(original);
    const SimulationTrace trace =
        run_once(net, bound, witness, 0, DwellPolicy::WorstCase);
    TestCase tc;
    tc.id = id;
    tc.input = witness;
    tc.seed = 0;
    tc.dwell = DwellPolicy::WorstCase;
    tc.expected = sample_energy(trace, "total", samples);
    return tc;
}

EnergySignal execute_test(const ArchitectureModel& model, const TestCase& test) {
    for (const auto& p : model.parameters)
        if (!test.input.count(p.name))
            throw SimError("PARAM_MISMATCH",
                           "test input lacks parameter '" + p.name + "'");
    const PtaNetwork net = to_pta(model);
    const SimulationTrace trace =
        run_once(net, test.expected.bound, test.input, test.seed, test.dwell);
    return sample_energy(trace, "total", test.expected.samples);
}

DetectionResult detect_mutant(const EnergySignal& expected,
                              const EnergySignal& observed, Energy threshold) {
    if (expected.bound != observed.bound || expected.samples != observed.samples)
        throw SimError("SIGNAL_SHAPE_MISMATCH",
                       "expected and observed signals have different shapes");
    const Energy threshold_scaled = threshold * expected.samples;
    DetectionResult result;
    for (std::int64_t i = 0; i < expected.samples; ++i) {
        const Energy dev = std::abs(expected.scaled[i] - observed.scaled[i]);
        result.max_deviation_scaled = std::max(result.max_deviation_scaled, dev);
        if (result.first_index < 0 && dev >= threshold_scaled) result.first_index = i;
    }
    result.detected = result.first_index >= 0;
    return result;
}

KillMatrix build_kill_matrix(const TestSuite& suite, const MutantCatalog& catalog,
                             const std::vector<std::string>& live_ids,
                             Energy threshold, int jobs) {
    KillMatrix matrix;
    for (const auto& t : suite.tests) matrix.test_ids.push_back(t.id);
    matrix.mutant_ids = live_ids;
    matrix.cells.assign(suite.tests.size(),
                        std::vector<KillCell>(live_ids.size()));

    std::vector<const Mutant*> mutants;
    for (const auto& id : live_ids) {
        const Mutant* m = catalog.find(id);
        if (!m) throw SimError("UNKNOWN_MUTANT", "no mutant '" + id + "' in catalog");
        mutants.push_back(m);
    }

    const std::size_t rows = suite.tests.size();
    const std::size_t cols = live_ids.size();
    parallel_for(rows * cols, jobs, [&](std::size_t k) {
        const std::size_t row = k / cols;
        const std::size_t col = k % cols;
        const TestCase& test = suite.tests[row];
        const EnergySignal observed = execute_test(mutants[col]->model, test);
        const DetectionResult r = detect_mutant(test.expected, observed, threshold);
        matrix.cells[row][col] = {r.detected, r.max_deviation_scaled, r.first_index};
    });
    return matrix;
}

double mutation_score(const KillMatrix& matrix) {
    if (matrix.mutant_ids.empty()) return 1.0;
    std::size_t killed = 0;
    for (std::size_t col = 0; col < matrix.mutant_ids.size(); ++col) {
        for (std::size_t row = 0; row < matrix.test_ids.size(); ++row) {
            if (matrix.cells[row][col].detected) {
                ++killed;
                break;
            }
        }
    }
    return static_cast<double>(killed) / static_cast<double>(matrix.mutant_ids.size());
}

std::vector<std::size_t> minimize_rows(const KillMatrix& matrix) {
    const std::size_t rows = matrix.test_ids.size();
    const std::size_t cols = matrix.mutant_ids.size();
    std::vector<bool> kept(rows, true);

    auto killed_by = [&](const std::vector<bool>& rows_in) {
        std::set<std::size_t> killed;
        for (std::size_t r = 0; r < rows; ++r) {
            if (!rows_in[r]) continue;
            for (std::size_t c = 0; c < cols; ++c)
                if (matrix.cells[r][c].detected) killed.insert(c);
        }
        return killed;
    };

    const std::set<std::size_t> full = killed_by(kept);
    for (std::size_t r = 0; r < rows; ++r) {
        kept[r] = false;
        if (killed_by(kept) != full) kept[r] = true;
    }

    std::vector<std::size_t> result;
    for (std::size_t r = 0; r < rows; ++r)
        if (kept[r]) result.push_back(r);
    return result;
}

TestSuite minimize_suite(const TestSuite& suite, const KillMatrix& matrix) {
    TestSuite minimized;
    minimized.bound = suite.bound;
    minimized.samples = suite.samples;
    minimized.master_seed = suite.master_seed;
    minimized.runs = suite.runs;
    for (std::size_t r : minimize_rows(matrix))
        minimized.tests.push_back(suite.tests[r]);
    return minimized;
}

}  // namespace emut
