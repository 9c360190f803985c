#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <nlohmann/json.hpp>

#include "emut/parse.hpp"
#include "emut/pipeline.hpp"

namespace py = pybind11;
using namespace emut;

namespace {

py::object json_to_py(const std::string& text) {
    py::module_ json = py::module_::import("json");
    return json.attr("loads")(text);
}

std::vector<std::string> diag_codes(const std::vector<Diagnostic>& diags) {
    std::vector<std::string> codes;
    for (const auto& d : diags) codes.push_back(to_string(d.code));
    return codes;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Energy-aware mutation testing pipeline";

    py::class_<ArchitectureModel>(m, "Model")
        .def_property_readonly("name",
                               [](const ArchitectureModel& mod) { return mod.name; })
        .def_property_readonly(
            "component_names",
            [](const ArchitectureModel& mod) {
                std::vector<std::string> names;
                for (const auto& c : mod.components) names.push_back(c.name);
                return names;
            })
        .def("__repr__", [](const ArchitectureModel& mod) {
            return "<Model '" + mod.name + "', " +
                   std::to_string(mod.components.size()) + " components>";
        });

    m.def("parse_model", [](const std::string& text) {
        ParseResult result = parse_model(text);
        if (!result.ok()) {
            std::string msg = "invalid model:";
            for (const auto& d : result.diagnostics)
                msg += std::string(" ") + to_string(d.code);
            throw py::value_error(msg);
        }
        return *result.model;
    });
    m.def("validate", [](const std::string& text) {
        auto raw = parse_document_raw(text);
        if (!raw) throw py::value_error("syntax error");
        return diag_codes(validate(*raw));
    });
    m.def("serialize_model", &serialize_model);

    m.def(
        "generate_mutants",
        [](const ArchitectureModel& model) {
            return json_to_py(catalog_json(generate_mutants(model)));
        },
        "Mutant catalog (default operator configuration) as a dict");

    m.def(
        "simulate",
        [](const ArchitectureModel& model, std::int64_t runs, Time bound,
           std::uint64_t seed) {
            SimulationQuery query;
            query.runs = runs;
            query.bound = bound;
            auto traces = simulate(to_pta(model), query, seed);
            py::list out;
            std::istringstream lines(export_traces_jsonl(traces));
            std::string line;
            while (std::getline(lines, line)) out.append(json_to_py(line));
            return out;
        },
        py::arg("model"), py::arg("runs"), py::arg("bound"), py::arg("seed") = 0);

    m.def(
        "check_equivalence",
        [](const ArchitectureModel& original, const ArchitectureModel& mutant,
           Energy threshold, Time bound, std::int64_t samples, std::int64_t budget) {
            EquivalenceProblem problem;
            problem.original = to_pta(original);
            problem.mutant = to_pta(mutant);
            problem.threshold = threshold;
            problem.bound = bound;
            problem.sample_count = samples;
            const EquivalenceVerdict v = check_equivalence(problem, budget);
            py::dict out;
            out["non_equivalent"] = v.non_equivalent;
            out["witness"] = v.witness;
            out["divergence"] = v.divergence.value(samples);
            out["explored"] = v.explored;
            out["exhaustive"] = v.exhaustive;
            return out;
        },
        py::arg("original"), py::arg("mutant"), py::arg("threshold") = 1,
        py::arg("bound") = 100, py::arg("samples") = 20, py::arg("budget") = 10000);

    m.def(
        "run_pipeline",
        [](const std::string& model_path, Energy threshold, Time bound,
           std::int64_t samples, std::int64_t runs, std::uint64_t seed,
           std::int64_t equiv_budget, int jobs, bool witness_tests) {
            PipelineConfig cfg;
            cfg.model_path = model_path;
            cfg.threshold = threshold;
            cfg.bound = bound;
            cfg.samples = samples;
            cfg.runs = runs;
            cfg.master_seed = seed;
            cfg.equiv_budget = equiv_budget;
            cfg.jobs = jobs;
            cfg.witness_tests = witness_tests;
            return json_to_py(emit_report_json(run_pipeline(cfg)));
        },
        py::arg("model_path"), py::arg("threshold") = 1, py::arg("bound") = 100,
        py::arg("samples") = 20, py::arg("runs") = 50, py::arg("seed") = 0,
        py::arg("equiv_budget") = 10000, py::arg("jobs") = 1,
        py::arg("witness_tests") = true);

    m.def("debug_listing", [](const ArchitectureModel& model) {
        return debug_listing(to_pta(model));
    });
}
