#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

#include "emut/pipeline.hpp"
#include "emut/parse.hpp"
#include "support.hpp"

using namespace emut;
namespace fs = std::filesystem;

namespace {

std::string models_dir() { return EMUT_MODELS_DIR; }

PipelineConfig demo_config(const std::string& out_dir = "") {
    PipelineConfig cfg;
    cfg.model_path = models_dir() + "/demo.eam";
    cfg.threshold = 1;
    cfg.bound = 40;
    cfg.samples = 8;
    cfg.runs = 5;
    cfg.master_seed = 7;
    cfg.equiv_budget = 1000;
    cfg.out_dir = out_dir;
    return cfg;
}

fs::path scratch_dir(const std::string& name) {
    fs::path dir = fs::temp_directory_path() / ("emut_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

EnergySignal signal(Time bound, std::vector<Energy> scaled) {
    EnergySignal s;
    s.bound = bound;
    s.samples = static_cast<std::int64_t>(scaled.size());
    s.scaled = std::move(scaled);
    return s;
}

}  // namespace

TEST_CASE("detection thresholds on the scaled grid") {
    EnergySignal expected = signal(20, {32, 32, 64, 64});
    EnergySignal observed = signal(20, {32, 32, 32, 32});

    DetectionResult hit = detect_mutant(expected, observed, 8);
    CHECK(hit.detected);
    CHECK(hit.max_deviation_scaled == 32);
    CHECK(hit.first_index == 2);

    DetectionResult miss = detect_mutant(expected, observed, 9);
    CHECK(!miss.detected);
    CHECK(miss.max_deviation_scaled == 32);
    CHECK(miss.first_index == -1);

    CHECK_THROWS_AS(detect_mutant(expected, signal(20, {1, 2}), 1), SimError);
    CHECK_THROWS_AS(detect_mutant(expected, signal(30, {1, 2, 3, 4}), 1), SimError);
}

TEST_CASE("greedy minimization keeps a dominating test") {
    KillMatrix matrix;
    matrix.test_ids = {"T1", "T2", "T3"};
    matrix.mutant_ids = {"M1", "M2"};
    matrix.cells = {
        {{true, 10, 0}, {false, 0, -1}},
        {{true, 10, 0}, {true, 10, 0}},
        {{false, 0, -1}, {true, 10, 0}},
    };
    CHECK(minimize_rows(matrix) == std::vector<std::size_t>{1});

    TestSuite suite;
    suite.tests.resize(3);
    suite.tests[0].id = "T1";
    suite.tests[1].id = "T2";
    suite.tests[2].id = "T3";
    TestSuite min = minimize_suite(suite, matrix);
    REQUIRE(min.tests.size() == 1);
    CHECK(min.tests[0].id == "T2");
}

TEST_CASE("minimization preserves undetected mutants as undetected") {
    KillMatrix matrix;
    matrix.test_ids = {"T1", "T2"};
    matrix.mutant_ids = {"M1", "M2"};
    matrix.cells = {
        {{true, 8, 1}, {false, 0, -1}},
        {{false, 0, -1}, {false, 0, -1}},
    };
    CHECK(mutation_score(matrix) == doctest::Approx(0.5));
    // T2 detects nothing and is dropped; T1 carries the only kill.
    CHECK(minimize_rows(matrix) == std::vector<std::size_t>{0});
}

TEST_CASE("score is 1 with no live mutants") {
    KillMatrix matrix;
    matrix.test_ids = {"T1"};
    CHECK(mutation_score(matrix) == doctest::Approx(1.0));
}

TEST_CASE("generated tests replay exactly on the original model") {
    ArchitectureModel model = load_model(models_dir() + "/two_params.eam");
    SimulationQuery query;
    query.runs = 6;
    query.bound = 48;
    TestSuite suite = generate_tests(model, query, 12, 99);
    REQUIRE(suite.tests.size() == 6);
    CHECK(suite.tests[0].id == "T1");
    CHECK(suite.tests[5].id == "T6");
    for (const auto& t : suite.tests) {
        EnergySignal replay = execute_test(model, t);
        CHECK(replay == t.expected);
    }
}

TEST_CASE("executing a test against a model missing its parameters fails") {
    ArchitectureModel model = load_model(models_dir() + "/two_params.eam");
    TestCase t;
    t.input = {{"speed", 1}};  // torque missing
    t.expected.bound = 48;
    t.expected.samples = 4;
    CHECK_THROWS_AS(execute_test(model, t), SimError);
}

TEST_CASE("full pipeline run on the demo model") {
    MutationReport report = run_pipeline(demo_config());

    CHECK(report.catalog.mutants.size() == 17);
    CHECK(report.partition.live.size() + report.partition.equivalent.size() == 17);
    CHECK(!report.partition.live.empty());

    // 5 generated tests plus one witness test per live mutant.
    CHECK(report.suite.tests.size() == 5 + report.partition.live.size());
    CHECK(report.matrix.test_ids.size() == report.suite.tests.size());
    CHECK(report.matrix.mutant_ids == report.partition.live);

    // Every witness test kills the mutant it was derived from.
    for (std::size_t c = 0; c < report.matrix.mutant_ids.size(); ++c) {
        const std::string wid = "W_" + report.matrix.mutant_ids[c];
        auto row_it = std::find(report.matrix.test_ids.begin(),
                                report.matrix.test_ids.end(), wid);
        REQUIRE(row_it != report.matrix.test_ids.end());
        const std::size_t r =
            static_cast<std::size_t>(row_it - report.matrix.test_ids.begin());
        CAPTURE(wid);
        CHECK(report.matrix.cells[r][c].detected);
    }
    CHECK(report.score == doctest::Approx(1.0));

    CHECK(!report.minimized_ids.empty());
    CHECK(report.minimized_ids.size() <= report.suite.tests.size());
}

TEST_CASE("pipeline output is byte-stable across runs and job counts") {
    PipelineConfig cfg = demo_config();
    MutationReport a = run_pipeline(cfg);
    cfg.jobs = 4;
    MutationReport b = run_pipeline(cfg);
    CHECK(emit_report_json(a) == emit_report_json(b));
    CHECK(suite_json(a.suite) == suite_json(b.suite));
    CHECK(catalog_json(a.catalog) == catalog_json(b.catalog));
}

TEST_CASE("report JSON exposes the documented sections") {
    MutationReport report = run_pipeline(demo_config());
    auto j = nlohmann::json::parse(emit_report_json(report));
    for (const char* key : {"config", "catalog", "equivalence", "tests",
                            "kill_matrix", "score", "minimized"})
        CHECK(j.contains(key));
    CHECK(j["config"]["model"] == "demo.eam");
    CHECK(j["config"]["seed"] == 7);
    CHECK(j["score"].get<double>() == doctest::Approx(1.0));
    CHECK(j["equivalence"]["live"].size() == report.partition.live.size());
}

TEST_CASE("artifacts round-trip through the filesystem") {
    fs::path dir = scratch_dir("artifacts");
    PipelineConfig cfg = demo_config((dir / "out").string());
    MutationReport report = run_pipeline(cfg);
    write_artifacts(report);

    CHECK(fs::exists(dir / "out" / "report.json"));
    CHECK(fs::exists(dir / "out" / "tests.json"));
    CHECK(fs::exists(dir / "out" / "catalog.json"));
    for (const auto& m : report.catalog.mutants)
        CHECK(fs::exists(dir / "out" / "mutants" / (m.id + ".eam")));

    MutantCatalog again = catalog_from_dir((dir / "out").string());
    REQUIRE(again.mutants.size() == report.catalog.mutants.size());
    for (std::size_t i = 0; i < again.mutants.size(); ++i) {
        CHECK(again.mutants[i].id == report.catalog.mutants[i].id);
        CHECK(serialize_model(again.mutants[i].model) ==
              serialize_model(report.catalog.mutants[i].model));
    }

    TestSuite suite = suite_from_json(read_file((dir / "out" / "tests.json").string()));
    CHECK(suite.bound == report.suite.bound);
    CHECK(suite.samples == report.suite.samples);
    CHECK(suite.master_seed == report.suite.master_seed);
    CHECK(suite.runs == report.suite.runs);
    REQUIRE(suite.tests.size() == report.suite.tests.size());
    for (std::size_t i = 0; i < suite.tests.size(); ++i) {
        CHECK(suite.tests[i].id == report.suite.tests[i].id);
        CHECK(suite.tests[i].input == report.suite.tests[i].input);
        CHECK(suite.tests[i].seed == report.suite.tests[i].seed);
        CHECK(suite.tests[i].dwell == report.suite.tests[i].dwell);
        CHECK(suite.tests[i].expected.scaled == report.suite.tests[i].expected.scaled);
    }
    fs::remove_all(dir);
}

TEST_CASE("csv format adds a flat matrix dump") {
    fs::path dir = scratch_dir("csv");
    PipelineConfig cfg = demo_config((dir / "out").string());
    cfg.format = "csv";
    MutationReport report = run_pipeline(cfg);
    write_artifacts(report);
    CHECK(fs::exists(dir / "out" / "report.csv"));
    std::string csv = read_file((dir / "out" / "report.csv").string());
    CHECK(csv.rfind("test,mutant,detected,deviation\n", 0) == 0);
    CHECK(csv.find("score,,1") != std::string::npos);
    fs::remove_all(dir);
}

TEST_CASE("model loading maps failures to exit codes") {
    fs::path dir = scratch_dir("exitcodes");

    try {
        load_model((dir / "missing.eam").string());
        FAIL("expected an I/O failure");
    } catch (const PipelineError& e) {
        CHECK(e.exit_code == 4);
    }

    atomic_write((dir / "broken.eam").string(), "system x timeunit ms\ncomponent {\n");
    try {
        load_model((dir / "broken.eam").string());
        FAIL("expected a parse failure");
    } catch (const PipelineError& e) {
        CHECK(e.exit_code == 2);
    }

    atomic_write((dir / "invalid.eam").string(),
                 "system x timeunit ms\ncomponent a {\n  trigger periodic 5\n"
                 "  exec [2, 9]\n  energy 1\n}\n");
    try {
        load_model((dir / "invalid.eam").string());
        FAIL("expected a validation failure");
    } catch (const PipelineError& e) {
        CHECK(e.exit_code == 3);
    }
    fs::remove_all(dir);
}

TEST_CASE("invalid pipeline configuration is rejected up front") {
    PipelineConfig cfg = demo_config();
    cfg.threshold = 0;
    CHECK_THROWS_AS(run_pipeline(cfg), PipelineError);
    cfg = demo_config();
    cfg.runs = 0;
    CHECK_THROWS_AS(run_pipeline(cfg), PipelineError);
}

TEST_CASE("kill matrix is stable across job counts") {
    ArchitectureModel model = load_model(models_dir() + "/pipeline3.eam");
    MutantCatalog catalog = generate_mutants(model);
    CatalogPartition partition = partition_catalog(catalog, 1, 48, 8, 500);
    SimulationQuery query;
    query.runs = 4;
    query.bound = 48;
    TestSuite suite = generate_tests(model, query, 8, 3);

    KillMatrix serial = build_kill_matrix(suite, catalog, partition.live, 1, 1);
    KillMatrix threaded = build_kill_matrix(suite, catalog, partition.live, 1, 3);
    REQUIRE(serial.cells.size() == threaded.cells.size());
    for (std::size_t r = 0; r < serial.cells.size(); ++r)
        for (std::size_t c = 0; c < serial.cells[r].size(); ++c) {
            CHECK(serial.cells[r][c].detected == threaded.cells[r][c].detected);
            CHECK(serial.cells[r][c].max_deviation_scaled ==
                  threaded.cells[r][c].max_deviation_scaled);
            CHECK(serial.cells[r][c].first_index == threaded.cells[r][c].first_index);
        }
}
