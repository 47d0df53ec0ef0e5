// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "granule/core/types.hpp"

namespace granule {

// Shared lexical layer for the two line-oriented file formats (property
// schemas and simulation configs): `#` comments, trimmed tokens, decimal
// number literals and `(a,b,c)` vector literals.

/// Removes a `#` comment (if any) and surrounding whitespace.
std::string_view stripCommentAndTrim(std::string_view line);

std::string_view trim(std::string_view text);

bool isIdentifier(std::string_view text);

/// Strict full-token parses; nullopt when the token is not exactly one
/// literal of the requested kind.
std::optional<double> parseReal(std::string_view token);
std::optional<std::int64_t> parseInt64(std::string_view token);
std::optional<std::uint64_t> parseUint64(std::string_view token);

/// Parses `(a,b,c)`; spaces around the components are allowed.
std::optional<Vec3> parseVec3(std::string_view token);

/// Splits a line into whitespace-separated tokens, keeping a parenthesized
/// vector literal together as a single token.
std::vector<std::string_view> splitTokens(std::string_view line);

}  // namespace granule
