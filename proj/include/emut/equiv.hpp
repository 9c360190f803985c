#ifndef EMUT_EQUIV_HPP
#define EMUT_EQUIV_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "emut/mutation.hpp"
#include "emut/pta.hpp"
#include "emut/sim.hpp"

namespace emut {

struct EquivalenceProblem {
    PtaNetwork original;
    PtaNetwork mutant;
    Energy threshold = 1;     // scaled comparison uses threshold * sample_count
    Time bound = 100;
    std::int64_t sample_count = 20;

    bool valid() const {
        return threshold > 0 && bound > 0 && sample_count >= 1;
    }
};

struct Divergence {
    Energy scaled = 0;        // max_i |c_n(t_i) - c_m(t_i)|, scaled by N
    std::int64_t sample_index = 0;  // earliest index achieving the max (0-based)

    double value(std::int64_t n) const {
        return static_cast<double>(scaled) / static_cast<double>(n);
    }
};

struct EquivalenceVerdict {
    bool non_equivalent = false;
    EnvValuation witness;            // meaningful when non_equivalent
    Divergence divergence;           // witness divergence / max seen
    std::int64_t explored = 0;
    std::int64_t budget = 0;
    bool exhaustive = false;         // every valuation was evaluated
};

/// |c_n - c_m| on the shared N-point grid under deterministic (wcet-dwell)
/// semantics for a fixed environment valuation.
Divergence max_divergence(const PtaNetwork& original, const PtaNetwork& mutant,
                          const EnvValuation& env, Time bound, std::int64_t n);

/// Bounded satisfiability search over the integer parameter box. Exhaustive
/// when the space fits the budget; otherwise a deterministic quasi-random
/// sweep plus coordinate-descent refinement around the best point. Any
/// NonEquivalent verdict is re-validated by an independent max_divergence
/// call before it is returned.
EquivalenceVerdict check_equivalence(const EquivalenceProblem& problem,
                                     std::int64_t budget);

struct CatalogPartition {
    std::vector<std::string> live;        // NonEquivalent mutant ids
    std::vector<std::string> equivalent;  // EquivalentUpToBudget mutant ids
    std::map<std::string, EquivalenceVerdict> verdicts;
};

CatalogPartition partition_catalog(const MutantCatalog& catalog, Energy threshold,
                                   Time bound, std::int64_t sample_count,
                                   std::int64_t budget, int jobs = 1);

/// Number of integer valuations in the parameter box (saturating).
std::int64_t parameter_space_size(const std::vector<Parameter>& params);

}  // namespace emut

#endif
