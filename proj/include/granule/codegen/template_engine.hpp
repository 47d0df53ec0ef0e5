// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <string>
#include <string_view>

#include "granule/schema/schema.hpp"

namespace granule::codegen {

/// Expands a source template against a schema. The template language has
/// exactly three constructs:
///
///   {{name}}                       placeholder substitution
///   {% for prop %} ... {% endfor %}   body once per property, declaration order
///   {% if ... %} ... {% endif %}      conditional on the current property:
///       {% if mode COPY ALWAYS %}       syncMode is one of the listed modes
///       {% if context GHOST_CREATE %}   property is part of the given context
///
/// Inside a loop the current property is addressable as {{prop.name}},
/// {{prop.Name}} (first letter capitalized), {{prop.type}}, {{prop.cpptype}},
/// {{prop.cppconstref}}, {{prop.default}}, {{prop.cppdefault}},
/// {{prop.width}}, {{prop.mode}} and {{prop.wire}}. Additional globals can be
/// supplied by the caller. Unknown placeholders, unknown conditions and
/// unbalanced blocks are errors, never silently emitted.
///
/// A block tag that sits alone on a line is consumed together with the line,
/// so templates can be indented without leaking blank lines into the output.
std::string expandTemplate(
    std::string_view text, const ParticleSchema& schema,
    const std::map<std::string, std::string, std::less<>>& globals = {});

}  // namespace granule::codegen
