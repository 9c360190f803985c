#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "emut/mutation.hpp"
#include "emut/parse.hpp"
#include "emut/sim.hpp"
#include "support.hpp"

using namespace emut;

namespace {

ArchitectureModel load(const std::string& name) {
    std::ifstream in(std::filesystem::path(EMUT_MODELS_DIR) / name);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    ParseResult r = parse_model(os.str());
    REQUIRE(r.ok());
    return *r.model;
}

}  // namespace

TEST_CASE("demo catalog has the expected shape") {
    const ArchitectureModel model = load("demo.eam");
    MutantCatalog catalog = generate_mutants(model);

    CHECK(catalog.mutants.size() == 17);
    CHECK(catalog.discards.empty());

    std::map<MutationKind, int> per_kind;
    for (const auto& m : catalog.mutants) ++per_kind[m.provenance.kind];
    CHECK(per_kind[MutationKind::ERO] == 4);
    CHECK(per_kind[MutationKind::PRO] == 4);
    CHECK(per_kind[MutationKind::ETO] == 4);
    CHECK(per_kind[MutationKind::CRO] == 2);
    CHECK(per_kind[MutationKind::CIO] == 1);
    CHECK(per_kind[MutationKind::TRO] == 2);

    // Operator-major, declaration-order ids.
    CHECK(catalog.mutants[0].id == "ERO_sensor_1");
    CHECK(catalog.mutants[1].id == "ERO_sensor_2");
    CHECK(catalog.mutants[2].id == "ERO_controller_1");
    CHECK(catalog.mutants.back().id == "TRO_controller_1");
}

TEST_CASE("every generated mutant is first order") {
    const ArchitectureModel model = load("demo.eam");
    for (const auto& mutant : generate_mutants(model).mutants) {
        CAPTURE(mutant.id);
        CHECK(mutant.model != model);
        int touched = 0;  // components changed, removed or added
        for (const auto& comp : model.components) {
            const Component* other = mutant.model.find_component(comp.name);
            if (!other || !(*other == comp)) ++touched;
        }
        for (const auto& comp : mutant.model.components)
            if (!model.find_component(comp.name)) ++touched;
        CHECK(touched == 1);
        if (mutant.provenance.kind == MutationKind::CRO)
            CHECK(mutant.model.find_component(mutant.provenance.target) == nullptr);
        else
            CHECK(mutant.model.find_component(mutant.provenance.target) != nullptr);
    }
}

TEST_CASE("ERO halves and doubles rates with round-half-up") {
    const ArchitectureModel model = load("demo.eam");

    Mutant half = apply_ero_factor(model, "sensor", {1, 2});
    CHECK(half.model.find_component("sensor")->energy_rate == 1);
    CHECK(half.model.find_component("sensor")->modes[0].energy_rate == 3);
    CHECK(half.provenance.original_value == "2");
    CHECK(half.provenance.mutated_value == "1");
    CHECK(half.provenance.factor == Factor{1, 2});

    Mutant twice = apply_ero_factor(model, "sensor", {2, 1});
    CHECK(twice.model.find_component("sensor")->energy_rate == 4);
    CHECK(twice.model.find_component("sensor")->modes[0].energy_rate == 12);

    CHECK(Factor{1, 2}.apply(5) == 3);  // round half up
    CHECK(Factor{1, 2}.apply(4) == 2);
    CHECK(Factor{3, 2}.apply(3) == 5);
}

TEST_CASE("ERO rejects no-ops and out-of-range rates") {
    const ArchitectureModel model = load("demo.eam");
    CHECK_THROWS_WITH_AS(apply_ero(model, "sensor", 2), doctest::Contains("unchanged"),
                         MutationError);
    CHECK_THROWS_AS(apply_ero(model, "sensor", -3), MutationError);
    CHECK_THROWS_AS(apply_ero(model, "ghost", 7), MutationError);
    // rate 0 everywhere: halving is the identity
    ArchitectureModel zero = testing::periodic_model(0, 2, 10);
    CHECK_THROWS_AS(apply_ero_factor(zero, "worker", {1, 2}), MutationError);
}

TEST_CASE("PRO preserves the wcet-within-period invariant") {
    const ArchitectureModel model = load("demo.eam");
    Mutant m = apply_pro(model, "controller", 40);
    CHECK(m.model.find_component("controller")->trigger.period == 40);
    CHECK(m.provenance.original_value == "20");

    // period 3 < wcet 4 would break the sensor
    CHECK_THROWS_AS(apply_pro(model, "sensor", 3), MutationError);
    CHECK_THROWS_AS(apply_pro(model, "sensor", 0), MutationError);

    ArchitectureModel data_model = load("pipeline3.eam");
    bool found_data = false;
    for (const auto& c : data_model.components) {
        if (c.trigger.is_periodic()) continue;
        found_data = true;
        CHECK_THROWS_AS(apply_pro(data_model, c.name, 10), MutationError);
    }
    CHECK(found_data);
}

TEST_CASE("ETO scaling clamps execution times to at least 1") {
    ArchitectureModel model = testing::periodic_model(2, 1, 10);
    model.components[0].exec = {1, 2};
    // 1/4 of [1, 2] rounds to [0, 1] and clamps to [1, 1].
    Mutant m = apply_eto_factor(model, "worker", {1, 4});
    CHECK(m.model.find_component("worker")->exec == Interval{1, 1});

    // Scaling that lands back on the original interval is a discard condition.
    model.components[0].exec = {1, 1};
    CHECK_THROWS_AS(apply_eto_factor(model, "worker", {1, 2}), MutationError);
    CHECK_THROWS_AS(apply_eto_factor(model, "worker", {1, 1}), MutationError);
}

TEST_CASE("ETO rejects intervals beyond the period") {
    const ArchitectureModel model = load("demo.eam");
    CHECK_THROWS_AS(apply_eto(model, "sensor", {2, 15}), MutationError);
    Mutant m = apply_eto(model, "sensor", {1, 2});
    CHECK(m.provenance.original_value == "[2, 4]");
    CHECK(m.provenance.mutated_value == "[1, 2]");
}

TEST_CASE("CRO removes the component and its connections") {
    const ArchitectureModel model = load("demo.eam");
    Mutant m = apply_cro(model, "sensor");
    CHECK(m.model.components.size() == 1);
    CHECK(m.model.connections.empty());
    CHECK(m.model.find_component("sensor") == nullptr);
    // Provenance keeps the removed block so reapply can reproduce the mutant.
    CHECK(m.provenance.original_value.find("component sensor") != std::string::npos);

    ArchitectureModel single = testing::periodic_model(1, 1, 5);
    CHECK_THROWS_AS(apply_cro(single, "worker"), MutationError);
}

TEST_CASE("CRO may starve a data-triggered sink") {
    ArchitectureModel model = load("pipeline3.eam");
    // Removing the head leaves the next stage without a producer; the mutant
    // is still a legal model where that stage never runs.
    Mutant m = apply_cro(model, model.components.front().name);
    CHECK(m.model.components.size() == model.components.size() - 1);
}

TEST_CASE("CIO inserts the default template") {
    const ArchitectureModel model = load("demo.eam");
    Component tmpl = default_cio_template(model);
    CHECK(tmpl.name == "inserted");
    CHECK(tmpl.trigger.period == 15);  // median of {10, 20}
    CHECK(tmpl.exec == Interval{1, 1});
    CHECK(tmpl.energy_rate == 3);      // median of {2, 4}

    Mutant m = apply_cio(model, tmpl);
    CHECK(m.model.components.size() == 3);
    CHECK(validate(m.model).empty());

    Component clash = tmpl;
    clash.name = "sensor";
    CHECK_THROWS_AS(apply_cio(model, clash), MutationError);
}

TEST_CASE("CIO attachment must not close a cycle") {
    ArchitectureModel model = load("demo.eam");
    Component tmpl = default_cio_template(model);
    tmpl.in_ports.push_back({"in", std::nullopt});
    tmpl.out_ports.push_back("out");
    // inserted feeds the sensor's only in-port? sensor.cfg is param bound, so
    // route into the controller instead and read back from it.
    Connection attach{"controller", "actuate", "inserted", "in"};
    Mutant ok = apply_cio(model, tmpl, attach);
    CHECK(ok.model.connections.size() == 2);

    CHECK_THROWS_AS(
        apply_cio(model, tmpl, Connection{"inserted", "out", "inserted", "in"}),
        MutationError);
}

TEST_CASE("TRO flips the trigger kind in both directions") {
    const ArchitectureModel model = load("demo.eam");

    Mutant to_data = apply_tro(model, "controller");
    CHECK(to_data.model.find_component("controller")->trigger ==
          TriggerSpec::data("sample"));
    CHECK(to_data.provenance.original_value == "periodic 20");
    CHECK(to_data.provenance.mutated_value == "data sample");

    Mutant back = apply_tro(to_data.model, "controller");
    CHECK(back.model.find_component("controller")->trigger.is_periodic());
    CHECK(back.model.find_component("controller")->trigger.period == 10);
    // 10 is the median over the remaining periodic components ({10})

    ArchitectureModel no_port = testing::periodic_model(1, 1, 5);
    CHECK_THROWS_AS(apply_tro(no_port, "worker"), MutationError);
}

TEST_CASE("PRO skips data-driven components without recording discards") {
    ArchitectureModel model = load("pipeline3.eam");
    MutantCatalog catalog = generate_mutants(model);
    for (const auto& d : catalog.discards)
        CHECK(d.reason != MutationErrorCode::NotPeriodic);
}

TEST_CASE("reapply reproduces every mutant byte for byte") {
    for (const char* name : {"demo.eam", "pipeline3.eam", "diamond.eam",
                             "modes.eam", "sensor_fusion.eam"}) {
        CAPTURE(name);
        const ArchitectureModel model = load(name);
        for (const auto& mutant : generate_mutants(model).mutants) {
            CAPTURE(mutant.id);
            ArchitectureModel again = reapply(model, mutant.provenance);
            CHECK(serialize_model(again) == serialize_model(mutant.model));
        }
    }
}

TEST_CASE("generation is deterministic") {
    const ArchitectureModel model = load("sensor_fusion.eam");
    MutantCatalog a = generate_mutants(model);
    MutantCatalog b = generate_mutants(model);
    REQUIRE(a.mutants.size() == b.mutants.size());
    for (std::size_t i = 0; i < a.mutants.size(); ++i) {
        CHECK(a.mutants[i].id == b.mutants[i].id);
        CHECK(a.mutants[i].model == b.mutants[i].model);
    }
}

TEST_CASE("generated mutants validate (starved triggers aside)") {
    Rng rng(4242);
    for (int i = 0; i < 50; ++i) {
        ArchitectureModel model = testing::random_model(rng);
        for (const auto& mutant : generate_mutants(model).mutants) {
            CAPTURE(mutant.id);
            for (const auto& d : validate(mutant.model)) {
                CHECK(d.code == DiagCode::UnboundTriggerPort);
                CHECK(mutant.provenance.kind == MutationKind::CRO);
            }
        }
    }
}

TEST_CASE("operator toggles restrict the catalog") {
    const ArchitectureModel model = load("demo.eam");
    GenerationConfig cfg;
    cfg.enable_pro = cfg.enable_eto = cfg.enable_cro = false;
    cfg.enable_cio = cfg.enable_tro = false;
    MutantCatalog catalog = generate_mutants(model, cfg);
    CHECK(catalog.mutants.size() == 4);
    for (const auto& m : catalog.mutants)
        CHECK(m.provenance.kind == MutationKind::ERO);
}
