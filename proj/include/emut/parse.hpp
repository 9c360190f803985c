#ifndef EMUT_PARSE_HPP
#define EMUT_PARSE_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "emut/model.hpp"

namespace emut {

struct ParseResult {
    std::optional<ArchitectureModel> model;
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return model.has_value() && diagnostics.empty(); }
};

/// Parses a model document. On success the model has already passed
/// validate(); otherwise `diagnostics` holds syntax errors with source
/// positions and/or semantic violations.
ParseResult parse_model(std::string_view text);

/// Canonical textual form: declaration order preserved, normalized
/// whitespace. parse_model(serialize_model(m)) == m for valid m.
std::string serialize_model(const ArchitectureModel& model);

/// Renders a single component block in canonical form (used for mutant
/// provenance records).
std::string render_component(const Component& comp);

/// Parses a component block rendered by render_component.
std::optional<Component> parse_component_block(std::string_view text);

/// Structural parse without semantic validation (fragments may reference
/// elements that live elsewhere).
std::optional<ArchitectureModel> parse_document_raw(std::string_view text);

}  // namespace emut

#endif
