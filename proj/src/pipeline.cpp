#include "emut/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "emut/parse.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace emut {

namespace {

std::string factor_text(const std::optional<Factor>& f) {
    return f ? f->text() : "";
}

std::optional<Factor> factor_from_text(const std::string& s) {
    if (s.empty()) return std::nullopt;
    Factor f;
    const auto slash = s.find('/');
    if (slash == std::string::npos) {
        f.num = std::stoll(s);
        f.den = 1;
    } else {
        f.num = std::stoll(s.substr(0, slash));
        f.den = std::stoll(s.substr(slash + 1));
    }
    return f;
}

ordered_json factors_json(const std::vector<Factor>& factors) {
    auto arr = ordered_json::array();
    for (const auto& f : factors) arr.push_back(f.text());
    return arr;
}

ordered_json env_json(const EnvValuation& env) {
    auto obj = ordered_json::object();
    for (const auto& [k, v] : env) obj[k] = v;
    return obj;
}

ordered_json verdict_json(const std::string& id, const EquivalenceVerdict& v,
                          Time bound, std::int64_t samples) {
    ordered_json j;
    j["id"] = id;
    j["verdict"] = v.non_equivalent ? "non_equivalent" : "equivalent_up_to_budget";
    if (v.non_equivalent) {
        j["witness"] = env_json(v.witness);
        j["divergence"] = v.divergence.value(samples);
        j["witness_time"] =
            static_cast<double>((v.divergence.sample_index + 1) * bound) /
            static_cast<double>(samples);
    } else {
        j["max_seen_divergence"] = v.divergence.value(samples);
    }
    j["explored"] = v.explored;
    j["budget"] = v.budget;
    j["exhaustive"] = v.exhaustive;
    return j;
}

const char* dwell_text(DwellPolicy p) {
    return p == DwellPolicy::Seeded ? "seeded" : "wcet";
}

}  // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw PipelineError(4, "cannot read '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw PipelineError(4, "cannot write '" + tmp + "'");
        out << content;
        if (!out) throw PipelineError(4, "write failed for '" + tmp + "'");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw PipelineError(4, "rename failed for '" + path + "': " + ec.message());
}

ArchitectureModel load_model(const std::string& path) {
    const std::string text = read_file(path);
    ParseResult result = parse_model(text);
    if (result.ok()) return *result.model;

    std::ostringstream msg;
    bool syntax = false;
    for (const auto& d : result.diagnostics) {
        if (d.code == DiagCode::SyntaxError) syntax = true;
        msg << path << ":" << d.line << ":" << d.column << ": "
            << to_string(d.code) << ": " << d.message << "\n";
    }
    throw PipelineError(syntax ? 2 : 3, msg.str());
}

std::string catalog_json(const MutantCatalog& catalog) {
    ordered_json j;
    j["original"] = serialize_model(catalog.original);
    j["generation_config"] = {
        {"ero_factors", factors_json(catalog.config.ero_factors)},
        {"pro_factors", factors_json(catalog.config.pro_factors)},
        {"eto_factors", factors_json(catalog.config.eto_factors)},
        {"enable_ero", catalog.config.enable_ero},
        {"enable_pro", catalog.config.enable_pro},
        {"enable_eto", catalog.config.enable_eto},
        {"enable_cro", catalog.config.enable_cro},
        {"enable_cio", catalog.config.enable_cio},
        {"enable_tro", catalog.config.enable_tro},
    };
    j["mutants"] = ordered_json::array();
    for (const auto& m : catalog.mutants) {
        j["mutants"].push_back({{"id", m.id},
                                {"kind", to_string(m.provenance.kind)},
                                {"target", m.provenance.target},
                                {"original_value", m.provenance.original_value},
                                {"mutated_value", m.provenance.mutated_value},
                                {"factor", factor_text(m.provenance.factor)}});
    }
    j["discarded"] = ordered_json::array();
    for (const auto& d : catalog.discards) {
        j["discarded"].push_back({{"kind", to_string(d.kind)},
                                  {"target", d.target},
                                  {"reason", to_string(d.reason)},
                                  {"detail", d.detail}});
    }
    return j.dump(2) + "\n";
}

MutantCatalog catalog_from_dir(const std::string& dir) {
    const ordered_json j = ordered_json::parse(read_file(dir + "/catalog.json"));

    MutantCatalog catalog;
    ParseResult orig = parse_model(j.at("original").get<std::string>());
    if (!orig.ok()) throw PipelineError(3, "catalog original model is invalid");
    catalog.original = *orig.model;

    for (const auto& m : j.at("mutants")) {
        Mutant mutant;
        mutant.id = m.at("id").get<std::string>();
        auto kind = mutation_kind_from_string(m.at("kind").get<std::string>());
        if (!kind) throw PipelineError(3, "unknown mutation kind in catalog");
        mutant.provenance.kind = *kind;
        mutant.provenance.target = m.at("target").get<std::string>();
        mutant.provenance.original_value = m.at("original_value").get<std::string>();
        mutant.provenance.mutated_value = m.at("mutated_value").get<std::string>();
        mutant.provenance.factor = factor_from_text(m.at("factor").get<std::string>());

        const std::string path = dir + "/mutants/" + mutant.id + ".eam";
        ParseResult parsed = parse_model(read_file(path));
        if (!parsed.model) {
            // CRO mutants may carry starved data triggers; reapply instead.
            mutant.model = reapply(catalog.original, mutant.provenance);
        } else {
            mutant.model = *parsed.model;
        }
        catalog.mutants.push_back(std::move(mutant));
    }
    return catalog;
}

std::string suite_json(const TestSuite& suite) {
    ordered_json j;
    j["bound"] = suite.bound;
    j["samples"] = suite.samples;
    j["master_seed"] = suite.master_seed;
    j["runs"] = suite.runs;
    j["tests"] = ordered_json::array();
    for (const auto& t : suite.tests) {
        ordered_json tj;
        tj["id"] = t.id;
        tj["input"] = env_json(t.input);
        tj["seed"] = t.seed;
        tj["dwell"] = dwell_text(t.dwell);
        tj["expected_scaled"] = t.expected.scaled;
        j["tests"].push_back(std::move(tj));
    }
    return j.dump(2) + "\n";
}

TestSuite suite_from_json(const std::string& text) {
    const ordered_json j = ordered_json::parse(text);
    TestSuite suite;
    suite.bound = j.at("bound").get<Time>();
    suite.samples = j.at("samples").get<std::int64_t>();
    suite.master_seed = j.at("master_seed").get<std::uint64_t>();
    suite.runs = j.value("runs", std::int64_t{0});
    for (const auto& tj : j.at("tests")) {
        TestCase t;
        t.id = tj.at("id").get<std::string>();
        for (auto it = tj.at("input").begin(); it != tj.at("input").end(); ++it)
            t.input[it.key()] = it.value().get<Value>();
        t.seed = tj.at("seed").get<std::uint64_t>();
        t.dwell = tj.at("dwell").get<std::string>() == "wcet" ? DwellPolicy::WorstCase
                                                              : DwellPolicy::Seeded;
        t.expected.bound = suite.bound;
        t.expected.samples = suite.samples;
        t.expected.scaled = tj.at("expected_scaled").get<std::vector<Energy>>();
        suite.tests.push_back(std::move(t));
    }
    return suite;
}

MutationReport run_pipeline(const PipelineConfig& config) {
    if (!config.valid()) throw PipelineError(3, "invalid pipeline configuration");

    MutationReport report;
    report.config = config;

    const ArchitectureModel model = load_model(config.model_path);
    report.catalog = generate_mutants(model, config.operators);
    report.partition =
        partition_catalog(report.catalog, config.threshold, config.bound,
                          config.samples, config.equiv_budget, config.jobs);

    SimulationQuery query;
    query.runs = config.runs;
    query.bound = config.bound;
    report.suite = generate_tests(model, query, config.samples, config.master_seed);

    if (config.witness_tests) {
        for (const auto& id : report.partition.live) {
            const EquivalenceVerdict& v = report.partition.verdicts.at(id);
            report.suite.tests.push_back(witness_test(
                model, "W_" + id, v.witness, config.bound, config.samples));
        }
    }

    report.matrix = build_kill_matrix(report.suite, report.catalog,
                                      report.partition.live, config.threshold,
                                      config.jobs);
    report.score = mutation_score(report.matrix);

    const std::vector<std::size_t> kept = minimize_rows(report.matrix);
    for (std::size_t r : kept) report.minimized_ids.push_back(report.suite.tests[r].id);
    return report;
}

std::string emit_report_json(const MutationReport& report) {
    const PipelineConfig& cfg = report.config;
    ordered_json j;
    j["config"] = {{"model", fs::path(cfg.model_path).filename().string()},
                   {"threshold", cfg.threshold},
                   {"bound", cfg.bound},
                   {"samples", cfg.samples},
                   {"runs", cfg.runs},
                   {"seed", cfg.master_seed},
                   {"equiv_budget", cfg.equiv_budget},
                   {"witness_tests", cfg.witness_tests}};

    j["catalog"] = {{"mutants", ordered_json::array()},
                    {"discarded", ordered_json::array()}};
    for (const auto& m : report.catalog.mutants)
        j["catalog"]["mutants"].push_back(
            {{"id", m.id},
             {"kind", to_string(m.provenance.kind)},
             {"target", m.provenance.target},
             {"original_value", m.provenance.original_value},
             {"mutated_value", m.provenance.mutated_value},
             {"factor", factor_text(m.provenance.factor)}});
    for (const auto& d : report.catalog.discards)
        j["catalog"]["discarded"].push_back({{"kind", to_string(d.kind)},
                                             {"target", d.target},
                                             {"reason", to_string(d.reason)}});

    j["equivalence"] = {{"live", report.partition.live},
                        {"equivalent", report.partition.equivalent},
                        {"verdicts", ordered_json::array()}};
    for (const auto& m : report.catalog.mutants) {
        auto it = report.partition.verdicts.find(m.id);
        if (it != report.partition.verdicts.end())
            j["equivalence"]["verdicts"].push_back(
                verdict_json(m.id, it->second, cfg.bound, cfg.samples));
    }

    j["tests"] = ordered_json::array();
    for (const auto& t : report.suite.tests) {
        j["tests"].push_back({{"id", t.id},
                              {"input", env_json(t.input)},
                              {"seed", t.seed},
                              {"dwell", dwell_text(t.dwell)},
                              {"expected_scaled", t.expected.scaled}});
    }

    j["kill_matrix"] = {{"tests", report.matrix.test_ids},
                        {"mutants", report.matrix.mutant_ids},
                        {"detected", ordered_json::array()}};
    for (std::size_t r = 0; r < report.matrix.test_ids.size(); ++r) {
        for (std::size_t c = 0; c < report.matrix.mutant_ids.size(); ++c) {
            const KillCell& cell = report.matrix.cells[r][c];
            if (!cell.detected) continue;
            j["kill_matrix"]["detected"].push_back(
                {{"test", report.matrix.test_ids[r]},
                 {"mutant", report.matrix.mutant_ids[c]},
                 {"deviation", static_cast<double>(cell.max_deviation_scaled) /
                                   static_cast<double>(cfg.samples)},
                 {"first_index", cell.first_index}});
        }
    }

    j["score"] = report.score;
    j["minimized"] = report.minimized_ids;
    return j.dump(2) + "\n";
}

std::string emit_report_csv(const MutationReport& report) {
    std::ostringstream os;
    os << "test,mutant,detected,deviation\n";
    for (std::size_t r = 0; r < report.matrix.test_ids.size(); ++r) {
        for (std::size_t c = 0; c < report.matrix.mutant_ids.size(); ++c) {
            const KillCell& cell = report.matrix.cells[r][c];
            os << report.matrix.test_ids[r] << "," << report.matrix.mutant_ids[c]
               << "," << (cell.detected ? 1 : 0) << ","
               << static_cast<double>(cell.max_deviation_scaled) /
                      static_cast<double>(report.config.samples)
               << "\n";
        }
    }
    os << "score,," << report.score << ",\n";
    return os.str();
}

void write_artifacts(const MutationReport& report) {
    const fs::path out(report.config.out_dir);
    std::error_code ec;
    fs::create_directories(out / "mutants", ec);
    if (ec) throw PipelineError(4, "cannot create '" + out.string() + "'");

    for (const auto& m : report.catalog.mutants)
        atomic_write((out / "mutants" / (m.id + ".eam")).string(),
                     serialize_model(m.model));

    // catalog.json with verdicts shaped on the pipeline's grid.
    {
        ordered_json j = ordered_json::parse(catalog_json(report.catalog));
        j["live"] = report.partition.live;
        j["equivalent"] = report.partition.equivalent;
        j["verdicts"] = ordered_json::array();
        for (const auto& m : report.catalog.mutants) {
            auto it = report.partition.verdicts.find(m.id);
            if (it != report.partition.verdicts.end())
                j["verdicts"].push_back(verdict_json(m.id, it->second,
                                                     report.config.bound,
                                                     report.config.samples));
        }
        atomic_write((out / "catalog.json").string(), j.dump(2) + "\n");
    }

    atomic_write((out / "tests.json").string(), suite_json(report.suite));
    atomic_write((out / "report.json").string(), emit_report_json(report));
    if (report.config.format == "csv")
        atomic_write((out / "report.csv").string(), emit_report_csv(report));
}

}  // namespace emut
