#include "emut/mutation.hpp"

#include <algorithm>
#include <charconv>

#include "emut/parse.hpp"

namespace emut {

const char* to_string(MutationKind kind) {
    switch (kind) {
        case MutationKind::ERO: return "ERO";
        case MutationKind::PRO: return "PRO";
        case MutationKind::ETO: return "ETO";
        case MutationKind::CRO: return "CRO";
        case MutationKind::CIO: return "CIO";
        case MutationKind::TRO: return "TRO";
    }
    return "?";
}

std::optional<MutationKind> mutation_kind_from_string(std::string_view s) {
    if (s == "ERO") return MutationKind::ERO;
    if (s == "PRO") return MutationKind::PRO;
    if (s == "ETO") return MutationKind::ETO;
    if (s == "CRO") return MutationKind::CRO;
    if (s == "CIO") return MutationKind::CIO;
    if (s == "TRO") return MutationKind::TRO;
    return std::nullopt;
}

const char* to_string(MutationErrorCode code) {
    switch (code) {
        case MutationErrorCode::NoChange: return "NO_CHANGE";
        case MutationErrorCode::NotPeriodic: return "NOT_PERIODIC";
        case MutationErrorCode::InvariantBreak: return "INVARIANT_BREAK";
        case MutationErrorCode::LastComponent: return "LAST_COMPONENT";
        case MutationErrorCode::NameCollision: return "NAME_COLLISION";
        case MutationErrorCode::CyclicDataflow: return "CYCLIC_DATAFLOW";
        case MutationErrorCode::NoInPort: return "NO_IN_PORT";
        case MutationErrorCode::UnknownTarget: return "UNKNOWN_TARGET";
    }
    return "?";
}

namespace {

const Component& require_component(const ArchitectureModel& model,
                                   const std::string& name) {
    const Component* comp = model.find_component(name);
    if (!comp)
        throw MutationError(MutationErrorCode::UnknownTarget,
                            "no component '" + name + "'");
    return *comp;
}

/// Starved data triggers are legal in CRO mutants: the component stays in
/// the model and simply never activates.
void require_valid(const ArchitectureModel& model, bool allow_starved_trigger) {
    for (const auto& d : validate(model)) {
        if (allow_starved_trigger && d.code == DiagCode::UnboundTriggerPort) continue;
        throw MutationError(MutationErrorCode::InvariantBreak,
                            std::string(to_string(d.code)) + ": " + d.message);
    }
}

std::string interval_text(const Interval& iv) {
    return "[" + std::to_string(iv.lo) + ", " + std::to_string(iv.hi) + "]";
}

std::string trigger_text(const TriggerSpec& t) {
    return t.is_periodic() ? "periodic " + std::to_string(t.period)
                           : "data " + t.port;
}

Mutant make_mutant(MutationKind kind, const std::string& target,
                   std::string original_value, std::string mutated_value,
                   ArchitectureModel mutated, std::optional<Factor> factor = {}) {
    Mutant m;
    m.provenance = {kind, target, std::move(original_value),
                    std::move(mutated_value), factor};
    m.model = std::move(mutated);
    return m;
}

std::int64_t median(std::vector<std::int64_t> values, std::int64_t fallback) {
    if (values.empty()) return fallback;
    std::sort(values.begin(), values.end());
    std::size_t n = values.size();
    if (n % 2 == 1) return values[n / 2];
    return (values[n / 2 - 1] + values[n / 2]) / 2;
}

std::int64_t parse_int(const std::string& s) {
    std::int64_t v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

Interval parse_interval_text(const std::string& s) {
    // "[a, b]"
    Interval iv;
    std::size_t open = s.find('['), comma = s.find(','), close = s.find(']');
    if (open == std::string::npos || comma == std::string::npos ||
        close == std::string::npos)
        throw MutationError(MutationErrorCode::UnknownTarget,
                            "malformed interval '" + s + "'");
    iv.lo = parse_int(s.substr(open + 1, comma - open - 1));
    std::string hi = s.substr(comma + 1, close - comma - 1);
    hi.erase(0, hi.find_first_not_of(' '));
    iv.hi = parse_int(hi);
    return iv;
}

}  // namespace

Mutant apply_ero(const ArchitectureModel& model, const std::string& component,
                 Energy new_rate) {
    const Component& comp = require_component(model, component);
    if (new_rate < 0)
        throw MutationError(MutationErrorCode::InvariantBreak, "negative rate");
    if (new_rate == comp.energy_rate)
        throw MutationError(MutationErrorCode::NoChange,
                            "rate unchanged for '" + component + "'");
    ArchitectureModel mutated = model;
    mutated.find_component(component)->energy_rate = new_rate;
    require_valid(mutated, false);
    return make_mutant(MutationKind::ERO, component,
                       std::to_string(comp.energy_rate), std::to_string(new_rate),
                       std::move(mutated));
}

Mutant apply_ero_factor(const ArchitectureModel& model, const std::string& component,
                        Factor factor) {
    const Component& comp = require_component(model, component);
    ArchitectureModel mutated = model;
    Component* target = mutated.find_component(component);
    target->energy_rate = factor.apply(comp.energy_rate);
    for (auto& m : target->modes) m.energy_rate = factor.apply(m.energy_rate);
    if (*target == comp)
        throw MutationError(MutationErrorCode::NoChange,
                            "rates unchanged for '" + component + "'");
    require_valid(mutated, false);
    return make_mutant(MutationKind::ERO, component,
                       std::to_string(comp.energy_rate),
                       std::to_string(target->energy_rate), std::move(mutated),
                       factor);
}

Mutant apply_pro(const ArchitectureModel& model, const std::string& component,
                 Time new_period) {
    const Component& comp = require_component(model, component);
    if (!comp.trigger.is_periodic())
        throw MutationError(MutationErrorCode::NotPeriodic,
                            "'" + component + "' is not periodic");
    if (new_period <= 0)
        throw MutationError(MutationErrorCode::InvariantBreak, "NONPOSITIVE_PERIOD");
    if (new_period == comp.trigger.period)
        throw MutationError(MutationErrorCode::NoChange,
                            "period unchanged for '" + component + "'");
    ArchitectureModel mutated = model;
    mutated.find_component(component)->trigger.period = new_period;
    require_valid(mutated, false);
    return make_mutant(MutationKind::PRO, component,
                       std::to_string(comp.trigger.period),
                       std::to_string(new_period), std::move(mutated));
}

Mutant apply_eto(const ArchitectureModel& model, const std::string& component,
                 Interval new_exec) {
    const Component& comp = require_component(model, component);
    if (new_exec == comp.exec)
        throw MutationError(MutationErrorCode::NoChange,
                            "exec unchanged for '" + component + "'");
    ArchitectureModel mutated = model;
    mutated.find_component(component)->exec = new_exec;
    require_valid(mutated, false);
    return make_mutant(MutationKind::ETO, component, interval_text(comp.exec),
                       interval_text(new_exec), std::move(mutated));
}

Mutant apply_eto_factor(const ArchitectureModel& model, const std::string& component,
                        Factor factor) {
    const Component& comp = require_component(model, component);
    auto scale = [&](const Interval& iv) {
        // Execution times stay at least 1 under scaling.
        Interval s{std::max<std::int64_t>(1, factor.apply(iv.lo)),
                   std::max<std::int64_t>(1, factor.apply(iv.hi))};
        return s;
    };
    ArchitectureModel mutated = model;
    Component* target = mutated.find_component(component);
    target->exec = scale(comp.exec);
    for (auto& m : target->modes) m.exec = scale(m.exec);
    if (*target == comp)
        throw MutationError(MutationErrorCode::NoChange,
                            "exec unchanged for '" + component + "'");
    require_valid(mutated, false);
    return make_mutant(MutationKind::ETO, component, interval_text(comp.exec),
                       interval_text(target->exec), std::move(mutated), factor);
}

Mutant apply_cro(const ArchitectureModel& model, const std::string& component) {
    require_component(model, component);
    if (model.components.size() < 2)
        throw MutationError(MutationErrorCode::LastComponent,
                            "cannot remove the last component");
    ArchitectureModel mutated = model;
    std::string original = render_component(*model.find_component(component));
    std::erase_if(mutated.components,
                  [&](const Component& c) { return c.name == component; });
    std::erase_if(mutated.connections, [&](const Connection& c) {
        return c.source_component == component || c.sink_component == component;
    });
    require_valid(mutated, true);
    return make_mutant(MutationKind::CRO, component, std::move(original), "",
                       std::move(mutated));
}

Mutant apply_cio(const ArchitectureModel& model, const Component& tmpl,
                 const std::optional<Connection>& attach) {
    if (model.find_component(tmpl.name))
        throw MutationError(MutationErrorCode::NameCollision,
                            "component '" + tmpl.name + "' already exists");
    ArchitectureModel mutated = model;
    mutated.components.push_back(tmpl);
    std::string rendered = render_component(tmpl);
    if (attach) {
        mutated.connections.push_back(*attach);
        rendered += "connect " + attach->source_component + "." + attach->source_port +
                    " -> " + attach->sink_component + "." + attach->sink_port + "\n";
    }
    if (has_dataflow_cycle(mutated))
        throw MutationError(MutationErrorCode::CyclicDataflow,
                            "attachment creates a data-flow cycle");
    require_valid(mutated, false);
    return make_mutant(MutationKind::CIO, tmpl.name, "", std::move(rendered),
                       std::move(mutated));
}

Mutant apply_tro(const ArchitectureModel& model, const std::string& component) {
    const Component& comp = require_component(model, component);
    ArchitectureModel mutated = model;
    Component* target = mutated.find_component(component);
    if (comp.trigger.is_periodic()) {
        if (comp.in_ports.empty())
            throw MutationError(MutationErrorCode::NoInPort,
                                "'" + component + "' has no input port");
        target->trigger = TriggerSpec::data(comp.in_ports.front().name);
    } else {
        std::vector<std::int64_t> periods;
        for (const auto& c : model.components)
            if (c.trigger.is_periodic()) periods.push_back(c.trigger.period);
        target->trigger = TriggerSpec::periodic(median(std::move(periods), 10));
    }
    require_valid(mutated, false);
    return make_mutant(MutationKind::TRO, component, trigger_text(comp.trigger),
                       trigger_text(target->trigger), std::move(mutated));
}

Component default_cio_template(const ArchitectureModel& model) {
    std::vector<std::int64_t> periods, rates;
    for (const auto& c : model.components) {
        if (c.trigger.is_periodic()) periods.push_back(c.trigger.period);
        rates.push_back(c.energy_rate);
    }
    Component tmpl;
    tmpl.name = "inserted";
    tmpl.trigger = TriggerSpec::periodic(median(std::move(periods), 10));
    tmpl.exec = {1, 1};
    tmpl.energy_rate = median(std::move(rates), 1);
    return tmpl;
}

MutantCatalog generate_mutants(const ArchitectureModel& model,
                               const GenerationConfig& config) {
    MutantCatalog catalog;
    catalog.original = model;
    catalog.config = config;

    auto attempt = [&](MutationKind kind, const std::string& target, int ordinal,
                       auto&& apply) {
        try {
            Mutant m = apply();
            m.id = std::string(to_string(kind)) + "_" + target + "_" +
                   std::to_string(ordinal);
            catalog.mutants.push_back(std::move(m));
        } catch (const MutationError& e) {
            catalog.discards.push_back({kind, target, e.code, e.what()});
        }
    };

    if (config.enable_ero) {
        for (const auto& comp : model.components) {
            int ord = 1;
            for (const auto& f : config.ero_factors)
                attempt(MutationKind::ERO, comp.name, ord++,
                        [&] { return apply_ero_factor(model, comp.name, f); });
        }
    }
    if (config.enable_pro) {
        for (const auto& comp : model.components) {
            if (!comp.trigger.is_periodic()) continue;  // operator not applicable
            int ord = 1;
            for (const auto& f : config.pro_factors) {
                Time p = std::max<Time>(1, f.apply(comp.trigger.period));
                attempt(MutationKind::PRO, comp.name, ord++,
                        [&] { return apply_pro(model, comp.name, p); });
            }
        }
    }
    if (config.enable_eto) {
        for (const auto& comp : model.components) {
            int ord = 1;
            for (const auto& f : config.eto_factors)
                attempt(MutationKind::ETO, comp.name, ord++,
                        [&] { return apply_eto_factor(model, comp.name, f); });
        }
    }
    if (config.enable_cro) {
        for (const auto& comp : model.components)
            attempt(MutationKind::CRO, comp.name, 1,
                    [&] { return apply_cro(model, comp.name); });
    }
    if (config.enable_cio) {
        Component tmpl =
            config.cio_template ? *config.cio_template : default_cio_template(model);
        attempt(MutationKind::CIO, tmpl.name, 1,
                [&] { return apply_cio(model, tmpl, config.cio_attach); });
    }
    if (config.enable_tro) {
        for (const auto& comp : model.components)
            attempt(MutationKind::TRO, comp.name, 1,
                    [&] { return apply_tro(model, comp.name); });
    }
    return catalog;
}

ArchitectureModel reapply(const ArchitectureModel& original, const Provenance& prov) {
    switch (prov.kind) {
        case MutationKind::ERO:
            if (prov.factor)
                return apply_ero_factor(original, prov.target, *prov.factor).model;
            return apply_ero(original, prov.target, parse_int(prov.mutated_value)).model;
        case MutationKind::PRO:
            return apply_pro(original, prov.target, parse_int(prov.mutated_value)).model;
        case MutationKind::ETO:
            if (prov.factor)
                return apply_eto_factor(original, prov.target, *prov.factor).model;
            return apply_eto(original, prov.target,
                             parse_interval_text(prov.mutated_value))
                .model;
        case MutationKind::CRO:
            return apply_cro(original, prov.target).model;
        case MutationKind::CIO: {
            auto frag = parse_document_raw("system _frag timeunit ms\n" +
                                           prov.mutated_value);
            if (!frag || frag->components.size() != 1)
                throw MutationError(MutationErrorCode::UnknownTarget,
                                    "unreadable CIO provenance");
            std::optional<Connection> attach;
            if (!frag->connections.empty()) attach = frag->connections.front();
            return apply_cio(original, frag->components.front(), attach).model;
        }
        case MutationKind::TRO:
            return apply_tro(original, prov.target).model;
    }
    throw MutationError(MutationErrorCode::UnknownTarget, "bad provenance kind");
}

}  // namespace emut
