#ifndef EMUT_MUTATION_HPP
#define EMUT_MUTATION_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "emut/model.hpp"

namespace emut {

enum class MutationKind { ERO, PRO, ETO, CRO, CIO, TRO };

const char* to_string(MutationKind kind);
std::optional<MutationKind> mutation_kind_from_string(std::string_view s);

enum class MutationErrorCode {
    NoChange,
    NotPeriodic,
    InvariantBreak,
    LastComponent,
    NameCollision,
    CyclicDataflow,
    NoInPort,
    UnknownTarget,
};

const char* to_string(MutationErrorCode code);

struct MutationError : std::runtime_error {
    MutationErrorCode code;
    MutationError(MutationErrorCode c, const std::string& msg)
        : std::runtime_error(msg), code(c) {}
};

/// Exact multiplicative factor num/den applied with round-half-up.
struct Factor {
    std::int64_t num = 1;
    std::int64_t den = 1;

    std::int64_t apply(std::int64_t v) const { return (v * num + den / 2) / den; }
    std::string text() const {
        return den == 1 ? std::to_string(num)
                        : std::to_string(num) + "/" + std::to_string(den);
    }
    friend bool operator==(const Factor&, const Factor&) = default;
};

struct GenerationConfig {
    std::vector<Factor> ero_factors = {{1, 2}, {2, 1}};
    std::vector<Factor> pro_factors = {{1, 2}, {2, 1}};
    std::vector<Factor> eto_factors = {{1, 2}, {2, 1}};
    bool enable_ero = true;
    bool enable_pro = true;
    bool enable_eto = true;
    bool enable_cro = true;
    bool enable_cio = true;
    bool enable_tro = true;
    std::optional<Component> cio_template;   // default template derived from model
    std::optional<Connection> cio_attach;
};

/// Provenance record sufficient to re-apply the mutation to the original.
struct Provenance {
    MutationKind kind;
    std::string target;          // component name (or inserted name for CIO)
    std::string original_value;  // rendered scalar / component block
    std::string mutated_value;
    std::optional<Factor> factor;  // set when produced via factor config
};

struct Mutant {
    std::string id;  // <kind>_<target>_<ordinal>
    Provenance provenance;
    ArchitectureModel model;
};

struct Discard {
    MutationKind kind;
    std::string target;
    MutationErrorCode reason;
    std::string detail;
};

struct MutantCatalog {
    ArchitectureModel original;
    std::vector<Mutant> mutants;
    std::vector<Discard> discards;
    GenerationConfig config;

    const Mutant* find(const std::string& id) const {
        for (const auto& m : mutants)
            if (m.id == id) return &m;
        return nullptr;
    }
};

/// Systematically applies every enabled operator to every applicable target.
/// Candidates that would break a model invariant are logged as discards.
MutantCatalog generate_mutants(const ArchitectureModel& model,
                               const GenerationConfig& config = {});

// Single-operator applications. Each throws MutationError on the documented
// error conditions; on success the returned mutant model passes validate().
Mutant apply_ero(const ArchitectureModel& model, const std::string& component,
                 Energy new_rate);
Mutant apply_ero_factor(const ArchitectureModel& model, const std::string& component,
                        Factor factor);
Mutant apply_pro(const ArchitectureModel& model, const std::string& component,
                 Time new_period);
Mutant apply_eto(const ArchitectureModel& model, const std::string& component,
                 Interval new_exec);
Mutant apply_eto_factor(const ArchitectureModel& model, const std::string& component,
                        Factor factor);
Mutant apply_cro(const ArchitectureModel& model, const std::string& component);
Mutant apply_cio(const ArchitectureModel& model, const Component& tmpl,
                 const std::optional<Connection>& attach = std::nullopt);
Mutant apply_tro(const ArchitectureModel& model, const std::string& component);

/// Default CIO payload: periodic with the median of existing periods, exec
/// [1,1], rate the median of existing rates.
Component default_cio_template(const ArchitectureModel& model);

/// Re-applies a provenance record to the original model. Reproduces the
/// mutant's model byte-for-byte after canonical serialization.
ArchitectureModel reapply(const ArchitectureModel& original, const Provenance& prov);

}  // namespace emut

#endif
