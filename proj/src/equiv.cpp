#include "emut/equiv.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

#include "emut/parallel.hpp"

namespace emut {

std::int64_t parameter_space_size(const std::vector<Parameter>& params) {
    std::int64_t size = 1;
    for (const auto& p : params) {
        const std::int64_t w = p.domain.width();
        if (w <= 0) return 0;
        if (size > (std::numeric_limits<std::int64_t>::max() / w))
            return std::numeric_limits<std::int64_t>::max();
        size *= w;
    }
    return size;
}

Divergence max_divergence(const PtaNetwork& original, const PtaNetwork& mutant,
                          const EnvValuation& env, Time bound, std::int64_t n) {
    const SimulationTrace to =
        run_once(original, bound, env, 0, DwellPolicy::WorstCase);
    const SimulationTrace tm = run_once(mutant, bound, env, 0, DwellPolicy::WorstCase);
    const EnergySignal so = sample_energy(to, "total", n);
    const EnergySignal sm = sample_energy(tm, "total", n);

    Divergence div;
    for (std::int64_t i = 0; i < n; ++i) {
        const Energy d = std::abs(so.scaled[i] - sm.scaled[i]);
        if (d > div.scaled) {
            div.scaled = d;
            div.sample_index = i;
        }
    }
    return div;
}

namespace {

/// Decodes a flat index into a lexicographic valuation of the box.
EnvValuation decode_valuation(const std::vector<Parameter>& params,
                              std::int64_t index) {
    EnvValuation env;
    for (auto it = params.rbegin(); it != params.rend(); ++it) {
        const std::int64_t w = it->domain.width();
        env[it->name] = it->domain.lo + index % w;
        index /= w;
    }
    return env;
}

}  // namespace

EquivalenceVerdict check_equivalence(const EquivalenceProblem& problem,
                                     std::int64_t budget) {
    if (!problem.valid() || budget < 1)
        throw SimError("INVALID_PROBLEM", "threshold, bound, N, budget must be positive");

    const std::vector<Parameter>& params = problem.original.parameters;
    const Energy threshold_scaled = problem.threshold * problem.sample_count;
    const std::int64_t space = parameter_space_size(params);

    EquivalenceVerdict verdict;
    verdict.budget = budget;

    auto evaluate = [&](const EnvValuation& env) {
        return max_divergence(problem.original, problem.mutant, env, problem.bound,
                              problem.sample_count);
    };

    auto consider = [&](const EnvValuation& env, const Divergence& div) {
        if (div.scaled > verdict.divergence.scaled) verdict.divergence = div;
        if (!verdict.non_equivalent && div.scaled >= threshold_scaled) {
            verdict.non_equivalent = true;
            verdict.witness = env;
        }
    };

    if (space <= budget) {
        verdict.exhaustive = true;
        const std::int64_t count = std::max<std::int64_t>(space, 1);
        for (std::int64_t idx = 0; idx < count; ++idx) {
            const EnvValuation env = decode_valuation(params, idx);
            ++verdict.explored;
            consider(env, evaluate(env));
            if (verdict.non_equivalent) break;
        }
    } else {
        // Deterministic quasi-random sweep of the box.
        EnvValuation best = decode_valuation(params, 0);
        Divergence best_div;
        best_div.scaled = -1;
        for (std::int64_t k = 0; k < budget && !verdict.non_equivalent; ++k) {
            Rng rng(mix_seed(0x3C6EF372FE94F82Aull, static_cast<std::uint64_t>(k)));
            EnvValuation env = sample_env(params, rng);
            ++verdict.explored;
            const Divergence div = evaluate(env);
            consider(env, div);
            if (div.scaled > best_div.scaled) {
                best = env;
                best_div = div;
            }
        }
        // Coordinate descent around the best point seen so far.
        if (!verdict.non_equivalent && !params.empty()) {
            bool improved = true;
            while (improved && !verdict.non_equivalent) {
                improved = false;
                for (const auto& p : params) {
                    for (std::int64_t step : {-1, 1}) {
                        EnvValuation cand = best;
                        const Value v = cand[p.name] + step;
                        if (!p.domain.contains(v)) continue;
                        cand[p.name] = v;
                        ++verdict.explored;
                        const Divergence div = evaluate(cand);
                        consider(cand, div);
                        if (div.scaled > best_div.scaled) {
                            best = cand;
                            best_div = div;
                            improved = true;
                        }
                    }
                }
            }
        }
    }

    if (verdict.non_equivalent) {
        // Independent re-validation of the witness.
        const Divergence check = evaluate(verdict.witness);
        if (check.scaled < threshold_scaled)
            throw SimError("WITNESS_INVALID",
                           "witness failed re-validation; nondeterministic divergence");
        verdict.divergence = check;
    }
    return verdict;
}

CatalogPartition partition_catalog(const MutantCatalog& catalog, Energy threshold,
                                   Time bound, std::int64_t sample_count,
                                   std::int64_t budget, int jobs) {
    const PtaNetwork original = to_pta(catalog.original);
    std::vector<EquivalenceVerdict> verdicts(catalog.mutants.size());

    parallel_for(catalog.mutants.size(), jobs, [&](std::size_t i) {
        EquivalenceProblem problem;
        problem.original = original;
        problem.mutant = to_pta(catalog.mutants[i].model);
        problem.threshold = threshold;
        problem.bound = bound;
        problem.sample_count = sample_count;
        verdicts[i] = check_equivalence(problem, budget);
    });

    CatalogPartition partition;
    for (std::size_t i = 0; i < catalog.mutants.size(); ++i) {
        const std::string& id = catalog.mutants[i].id;
        partition.verdicts[id] = verdicts[i];
        if (verdicts[i].non_equivalent)
            partition.live.push_back(id);
        else
            partition.equivalent.push_back(id);
    }
    return partition;
}

}  // namespace emut
