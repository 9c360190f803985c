#ifndef EMUT_PIPELINE_HPP
#define EMUT_PIPELINE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

#include "emut/equiv.hpp"
#include "emut/mutation.hpp"
#include "emut/testgen.hpp"

namespace emut {

struct PipelineConfig {
    std::string model_path;
    Energy threshold = 1;
    Time bound = 100;
    std::int64_t samples = 20;     // N
    std::int64_t runs = 50;
    std::uint64_t master_seed = 0;
    std::int64_t equiv_budget = 10000;
    GenerationConfig operators;
    int jobs = 1;
    bool witness_tests = true;     // append one witness test per live mutant
    std::string out_dir = "emut-out";
    std::string format = "json";   // "csv" additionally writes report.csv

    bool valid() const {
        return threshold > 0 && bound > 0 && samples >= 1 && runs >= 1 &&
               equiv_budget >= 1 && jobs >= 1;
    }
};

struct MutationReport {
    PipelineConfig config;
    MutantCatalog catalog;
    CatalogPartition partition;
    TestSuite suite;
    KillMatrix matrix;
    double score = 0.0;
    std::vector<std::string> minimized_ids;
};

// Exit codes: 2 parse failure, 3 validation failure, 4 I/O failure.
struct PipelineError : std::runtime_error {
    int exit_code;
    PipelineError(int code, const std::string& msg)
        : std::runtime_error(msg), exit_code(code) {}
};

/// Full pipeline: parse, mutate, translate, partition, generate tests,
/// score, minimize. Does not touch the filesystem beyond reading the model;
/// pair with write_artifacts for the on-disk layout.
MutationReport run_pipeline(const PipelineConfig& config);

/// Writes mutants/<id>.eam, catalog.json, tests.json, report.json (and
/// report.csv when requested) under config.out_dir. All writes are atomic
/// (temp file + rename).
void write_artifacts(const MutationReport& report);

std::string emit_report_json(const MutationReport& report);
std::string emit_report_csv(const MutationReport& report);

std::string catalog_json(const MutantCatalog& catalog);
std::string suite_json(const TestSuite& suite);
TestSuite suite_from_json(const std::string& text);
MutantCatalog catalog_from_dir(const std::string& dir);

/// Reads a model file; throws PipelineError(2/3/4) on failure.
ArchitectureModel load_model(const std::string& path);

void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace emut

#endif
