#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "emut/parse.hpp"
#include "emut/pipeline.hpp"

using namespace emut;

namespace {

std::uint64_t default_seed() {
    if (const char* env = std::getenv("EMUT_SEED")) return std::strtoull(env, nullptr, 10);
    return 0;
}

void add_common(CLI::App* cmd, PipelineConfig& cfg) {
    cmd->add_option("--threshold", cfg.threshold, "Detection threshold (energy units)");
    cmd->add_option("--bound", cfg.bound, "Simulation time bound");
    cmd->add_option("--samples", cfg.samples, "Energy sample points N");
}

int run_guarded(const std::function<void()>& body) {
    try {
        body();
        return 0;
    } catch (const PipelineError& e) {
        std::cerr << e.what();
        return e.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

MutationReport score_report(PipelineConfig cfg, const std::string& mutants_dir,
                            const std::string& tests_file) {
    MutationReport report;
    report.catalog = catalog_from_dir(mutants_dir);
    report.suite = suite_from_json(read_file(tests_file));
    cfg.bound = report.suite.bound;
    cfg.samples = report.suite.samples;
    cfg.master_seed = report.suite.master_seed;
    cfg.runs = report.suite.runs > 0
                   ? report.suite.runs
                   : static_cast<std::int64_t>(report.suite.tests.size());
    report.config = cfg;

    report.partition = partition_catalog(report.catalog, cfg.threshold, cfg.bound,
                                         cfg.samples, cfg.equiv_budget, cfg.jobs);
    if (cfg.witness_tests) {
        for (const auto& id : report.partition.live) {
            const EquivalenceVerdict& v = report.partition.verdicts.at(id);
            report.suite.tests.push_back(witness_test(
                report.catalog.original, "W_" + id, v.witness, cfg.bound, cfg.samples));
        }
    }
    report.matrix = build_kill_matrix(report.suite, report.catalog,
                                      report.partition.live, cfg.threshold, cfg.jobs);
    report.score = mutation_score(report.matrix);
    for (std::size_t r : minimize_rows(report.matrix))
        report.minimized_ids.push_back(report.suite.tests[r].id);
    return report;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Energy-aware mutation testing for component architecture models"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    cfg.master_seed = default_seed();
    cfg.jobs = std::max(1u, std::thread::hardware_concurrency());

    // run
    auto* run = app.add_subcommand("run", "Full pipeline: mutate, check, test, score");
    run->add_option("model", cfg.model_path, "Model file (.eam)")->required();
    add_common(run, cfg);
    run->add_option("--runs", cfg.runs, "Number of simulation runs");
    run->add_option("--seed", cfg.master_seed, "Master seed (or EMUT_SEED)");
    run->add_option("--equiv-budget", cfg.equiv_budget, "Equivalence search budget");
    run->add_option("--jobs", cfg.jobs, "Worker threads");
    run->add_option("--out", cfg.out_dir, "Output directory");
    run->add_option("--format", cfg.format, "json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    run->add_flag("--no-witness-tests", [&](std::int64_t) { cfg.witness_tests = false; },
                  "Do not append witness-derived tests for live mutants");

    // mutate
    auto* mutate = app.add_subcommand("mutate", "Generate the mutant catalog");
    mutate->add_option("model", cfg.model_path, "Model file (.eam)")->required();
    mutate->add_option("--out", cfg.out_dir, "Output directory");
    bool no_ero = false, no_pro = false, no_eto = false;
    bool no_cro = false, no_cio = false, no_tro = false;
    mutate->add_flag("--no-ero", no_ero, "Disable energy-rate replacement");
    mutate->add_flag("--no-pro", no_pro, "Disable period replacement");
    mutate->add_flag("--no-eto", no_eto, "Disable execution-time replacement");
    mutate->add_flag("--no-cro", no_cro, "Disable component removal");
    mutate->add_flag("--no-cio", no_cio, "Disable component insertion");
    mutate->add_flag("--no-tro", no_tro, "Disable trigger replacement");

    // equiv
    auto* equiv = app.add_subcommand("equiv", "Pairwise equivalence check");
    std::string mutant_path;
    equiv->add_option("model", cfg.model_path, "Original model (.eam)")->required();
    equiv->add_option("mutant", mutant_path, "Mutant model (.eam)")->required();
    add_common(equiv, cfg);
    equiv->add_option("--equiv-budget", cfg.equiv_budget, "Evaluation budget");

    // gen-tests
    auto* gen = app.add_subcommand("gen-tests", "Generate tests from simulations");
    std::string tests_out = "tests.json";
    std::string traces_out;
    gen->add_option("model", cfg.model_path, "Model file (.eam)")->required();
    gen->add_option("--runs", cfg.runs, "Number of simulation runs");
    gen->add_option("--bound", cfg.bound, "Simulation time bound");
    gen->add_option("--samples", cfg.samples, "Energy sample points N");
    gen->add_option("--seed", cfg.master_seed, "Master seed (or EMUT_SEED)");
    gen->add_option("--out", tests_out, "Tests file to write");
    gen->add_option("--traces", traces_out, "Also export raw traces (JSON lines)");

    // score
    auto* score = app.add_subcommand("score", "Score a test suite against mutants");
    std::string mutants_dir, tests_file;
    score->add_option("model", cfg.model_path, "Model file (.eam)")->required();
    score->add_option("--mutants", mutants_dir, "Catalog directory")->required();
    score->add_option("--tests", tests_file, "Tests file")->required();
    score->add_option("--threshold", cfg.threshold, "Detection threshold");
    score->add_option("--equiv-budget", cfg.equiv_budget, "Equivalence search budget");
    score->add_option("--jobs", cfg.jobs, "Worker threads");
    score->add_option("--out", cfg.out_dir, "Output directory");
    score->add_flag("--no-witness-tests",
                    [&](std::int64_t) { cfg.witness_tests = false; },
                    "Do not append witness-derived tests for live mutants");

    CLI11_PARSE(app, argc, argv);

    if (run->parsed()) {
        return run_guarded([&] {
            MutationReport report = run_pipeline(cfg);
            write_artifacts(report);
            std::cout << "mutants: " << report.catalog.mutants.size()
                      << " (discarded " << report.catalog.discards.size() << ")\n"
                      << "live: " << report.partition.live.size() << ", equivalent: "
                      << report.partition.equivalent.size() << "\n"
                      << "tests: " << report.suite.tests.size() << ", minimized: "
                      << report.minimized_ids.size() << "\n"
                      << "mutation score: " << report.score << "\n";
        });
    }
    if (mutate->parsed()) {
        return run_guarded([&] {
            const ArchitectureModel model = load_model(cfg.model_path);
            GenerationConfig gen_cfg = cfg.operators;
            gen_cfg.enable_ero = !no_ero;
            gen_cfg.enable_pro = !no_pro;
            gen_cfg.enable_eto = !no_eto;
            gen_cfg.enable_cro = !no_cro;
            gen_cfg.enable_cio = !no_cio;
            gen_cfg.enable_tro = !no_tro;
            const MutantCatalog catalog = generate_mutants(model, gen_cfg);
            std::filesystem::create_directories(
                std::filesystem::path(cfg.out_dir) / "mutants");
            for (const auto& m : catalog.mutants)
                atomic_write(cfg.out_dir + "/mutants/" + m.id + ".eam",
                             serialize_model(m.model));
            atomic_write(cfg.out_dir + "/catalog.json", catalog_json(catalog));
            std::cout << "mutants: " << catalog.mutants.size() << " (discarded "
                      << catalog.discards.size() << ")\n";
        });
    }
    if (equiv->parsed()) {
        return run_guarded([&] {
            EquivalenceProblem problem;
            problem.original = to_pta(load_model(cfg.model_path));
            problem.mutant = to_pta(load_model(mutant_path));
            problem.threshold = cfg.threshold;
            problem.bound = cfg.bound;
            problem.sample_count = cfg.samples;
            const EquivalenceVerdict v = check_equivalence(problem, cfg.equiv_budget);
            nlohmann::ordered_json j;
            j["verdict"] = v.non_equivalent ? "non_equivalent" : "equivalent_up_to_budget";
            if (v.non_equivalent) {
                j["witness"] = v.witness;
                j["divergence"] = v.divergence.value(cfg.samples);
            } else {
                j["max_seen_divergence"] = v.divergence.value(cfg.samples);
            }
            j["explored"] = v.explored;
            j["budget"] = v.budget;
            j["exhaustive"] = v.exhaustive;
            std::cout << j.dump(2) << "\n";
        });
    }
    if (gen->parsed()) {
        return run_guarded([&] {
            const ArchitectureModel model = load_model(cfg.model_path);
            SimulationQuery query;
            query.runs = cfg.runs;
            query.bound = cfg.bound;
            const TestSuite suite =
                generate_tests(model, query, cfg.samples, cfg.master_seed);
            atomic_write(tests_out, suite_json(suite));
            if (!traces_out.empty()) {
                const auto traces = simulate(to_pta(model), query, cfg.master_seed);
                atomic_write(traces_out, export_traces_jsonl(traces));
            }
            std::cout << "tests: " << suite.tests.size() << " -> " << tests_out << "\n";
        });
    }
    // score
    return run_guarded([&] {
        MutationReport report = score_report(cfg, mutants_dir, tests_file);
        std::filesystem::create_directories(cfg.out_dir);
        atomic_write(cfg.out_dir + "/report.json", emit_report_json(report));
        if (cfg.format == "csv")
            atomic_write(cfg.out_dir + "/report.csv", emit_report_csv(report));
        std::cout << "mutation score: " << report.score << "\n";
    });
}
