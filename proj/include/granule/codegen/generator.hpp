// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "granule/schema/schema.hpp"

namespace granule::codegen {

struct GeneratedArtifact {
  std::string relativePath;
  std::string contents;
};

inline constexpr std::string_view kDefaultNamespace = "granule::gen";

/// Renders every artifact for `schema` without touching the filesystem:
///   particle_store.hpp  struct-of-arrays store, accessors, pack/unpack,
///                       default initialization
///   manifest.txt        properties, datatypes, byte widths, per-context
///                       membership
/// Deterministic: identical inputs yield byte-identical contents.
std::vector<GeneratedArtifact> renderArtifacts(
    const ParticleSchema& schema,
    std::string_view namespaceName = kDefaultNamespace);

/// Machine-readable listing of the codegen decisions; one property per line
/// plus one line per sync context.
std::string emitManifest(const ParticleSchema& schema);

/// Renders and writes all artifacts into `outDir` (created if absent).
/// Files are written atomically (temp file + rename). Returns the list.
std::vector<GeneratedArtifact> generateAll(
    const ParticleSchema& schema, const std::filesystem::path& outDir,
    std::string_view namespaceName = kDefaultNamespace);

}  // namespace granule::codegen
