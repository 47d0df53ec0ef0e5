// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/codegen/generator.hpp"

#include <fstream>
#include <map>

#include "granule/codegen/template_engine.hpp"
#include "granule/core/error.hpp"
#include "granule/core/parse_util.hpp"

namespace granule::codegen {

namespace {

// The two embedded source templates. Placeholders and block constructs are
// documented in template_engine.hpp.

constexpr std::string_view kStoreTemplate =
    R"gr_tmpl(// Generated by the granule code generator. Do not edit.
//
// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"
#include "granule/schema/schema.hpp"
#include "granule/storage/store_base.hpp"
#include "granule/storage/wire_buffer.hpp"

namespace {{namespace}} {

using granule::Rank;
using granule::SyncContext;
using granule::Uid;
using granule::Vec3;
using granule::storage::WireBuffer;

/// Struct-of-arrays particle container generated from the property schema
/// below: one contiguous array per property. Metadata, uid indexing and
/// dense create/remove come from StoreBase.
class ParticleStore : public granule::storage::StoreBase<ParticleStore> {
  friend granule::storage::StoreBase<ParticleStore>;

 public:
  /// The schema this store was generated from, in canonical form.
  static constexpr std::string_view kSchemaText =
      R"granule_schema({{schema.canonical}})granule_schema";

{% for prop %}
  {{prop.cppconstref}} get{{prop.Name}}(std::size_t i) const {
    checkIndex(i);
    return {{prop.name}}_[i];
  }
  void set{{prop.Name}}(std::size_t i, {{prop.cppconstref}} v) {
    checkIndex(i);
    {{prop.name}}_[i] = v;
  }

{% endfor %}
  /// Appends the header (uid: 8 bytes, owner rank: 4 bytes) and the
  /// properties belonging to `ctx`, in declaration order.
  void pack(std::size_t i, SyncContext ctx, WireBuffer& out) const {
    checkIndex(i);
    out.writeUint64(uid(i));
    out.writeInt32(ownerRank(i));
    switch (ctx) {
      case SyncContext::GhostCreate:
{% for prop %}
{% if context GHOST_CREATE %}
        out.write{{prop.wire}}({{prop.name}}_[i]);
{% endif %}
{% endfor %}
        break;
      case SyncContext::GhostUpdate:
{% for prop %}
{% if context GHOST_UPDATE %}
        out.write{{prop.wire}}({{prop.name}}_[i]);
{% endif %}
{% endfor %}
        break;
      case SyncContext::MigrationTransfer:
{% for prop %}
{% if context MIGRATION_TRANSFER %}
        out.write{{prop.wire}}({{prop.name}}_[i]);
{% endif %}
{% endfor %}
        break;
    }
  }

  /// Applies a record produced by pack() with the same schema and context.
  /// GhostCreate creates a ghost (or overwrites an existing particle),
  /// untransmitted properties reset to their defaults. GhostUpdate requires
  /// the uid to exist and overwrites the ALWAYS properties only.
  /// MigrationTransfer creates or overwrites with every non-NEVER property;
  /// promotion to owned is the caller's concern. Returns the local index.
  std::size_t unpackApply(SyncContext ctx, WireBuffer& in) {
    const Uid u = in.readUint64();
    const Rank owner = in.readInt32();
    switch (ctx) {
      case SyncContext::GhostCreate: {
        std::size_t i = 0;
        if (const auto existing = findByUid(u)) {
          i = *existing;
          setOwnerRank(i, owner);
          setIsGhost(i, true);
          ghostHolders(i).clear();
          resetToDefaults(i);
        } else {
          i = createParticle(u, owner, /*ghost=*/true);
        }
{% for prop %}
{% if context GHOST_CREATE %}
        {{prop.name}}_[i] = in.read{{prop.wire}}();
{% endif %}
{% endfor %}
        return i;
      }
      case SyncContext::GhostUpdate: {
        const auto existing = findByUid(u);
        if (!existing)
          throw granule::ProtocolError("ghost update for unknown uid " +
                                       std::to_string(u));
        const std::size_t i = *existing;
{% for prop %}
{% if context GHOST_UPDATE %}
        {{prop.name}}_[i] = in.read{{prop.wire}}();
{% endif %}
{% endfor %}
        return i;
      }
      case SyncContext::MigrationTransfer: {
        std::size_t i = 0;
        if (const auto existing = findByUid(u)) {
          i = *existing;
          setOwnerRank(i, owner);
          resetToDefaults(i);
        } else {
          i = createParticle(u, owner, /*ghost=*/true);
        }
{% for prop %}
{% if context MIGRATION_TRANSFER %}
        {{prop.name}}_[i] = in.read{{prop.wire}}();
{% endif %}
{% endfor %}
        return i;
      }
    }
    throw granule::ProtocolError("unknown sync context");
  }

 private:
  void resetToDefaults(std::size_t i) {
{% for prop %}
    {{prop.name}}_[i] = {{prop.cppdefault}};
{% endfor %}
  }

  void propertyPushDefaults() {
{% for prop %}
    {{prop.name}}_.push_back({{prop.cppdefault}});
{% endfor %}
  }

  void propertyMoveFromLast(std::size_t i) {
{% for prop %}
    {{prop.name}}_[i] = {{prop.name}}_.back();
{% endfor %}
  }

  void propertyPopBack() {
{% for prop %}
    {{prop.name}}_.pop_back();
{% endfor %}
  }

{% for prop %}
  std::vector<{{prop.cpptype}}> {{prop.name}}_;
{% endfor %}
};

/// Default accessor: forwards kernel property access straight to the store.
class ParticleAccessor {
 public:
  explicit ParticleAccessor(ParticleStore& store) : store_(&store) {}

  std::size_t size() const { return store_->size(); }

{% for prop %}
  {{prop.cppconstref}} get{{prop.Name}}(std::size_t i) const {
    return store_->get{{prop.Name}}(i);
  }
  void set{{prop.Name}}(std::size_t i, {{prop.cppconstref}} v) {
    store_->set{{prop.Name}}(i, v);
  }

{% endfor %}
 private:
  ParticleStore* store_;
};

}  // namespace {{namespace}}
)gr_tmpl";

constexpr std::string_view kManifestTemplate =
    R"gr_tmpl({% for prop %}
{{prop.name}} {{prop.type}} {{prop.width}} {{prop.mode}}
{% endfor %}
GHOST_CREATE{% for prop %}{% if context GHOST_CREATE %} {{prop.name}}{% endif %}{% endfor %}
GHOST_UPDATE{% for prop %}{% if context GHOST_UPDATE %} {{prop.name}}{% endif %}{% endfor %}
MIGRATION_TRANSFER{% for prop %}{% if context MIGRATION_TRANSFER %} {{prop.name}}{% endif %}{% endfor %}
)gr_tmpl";

void validateNamespace(std::string_view ns) {
  std::size_t start = 0;
  while (true) {
    const auto sep = ns.find("::", start);
    const std::string_view part =
        ns.substr(start, sep == std::string_view::npos ? ns.size() - start
                                                       : sep - start);
    if (!isIdentifier(part))
      throw Error("invalid namespace '" + std::string(ns) + "'");
    if (sep == std::string_view::npos) break;
    start = sep + 2;
  }
}

void writeAtomically(const std::filesystem::path& path,
                     const std::string& contents) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(),
              static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace

std::string emitManifest(const ParticleSchema& schema) {
  return expandTemplate(kManifestTemplate, schema);
}

std::vector<GeneratedArtifact> renderArtifacts(const ParticleSchema& schema,
                                               std::string_view namespaceName) {
  validateNamespace(namespaceName);
  const std::map<std::string, std::string, std::less<>> globals = {
      {"namespace", std::string(namespaceName)},
      {"schema.canonical", serializeSchema(schema)},
  };
  std::vector<GeneratedArtifact> artifacts;
  artifacts.push_back(
      {"particle_store.hpp", expandTemplate(kStoreTemplate, schema, globals)});
  artifacts.push_back({"manifest.txt", emitManifest(schema)});
  return artifacts;
}

std::vector<GeneratedArtifact> generateAll(const ParticleSchema& schema,
                                           const std::filesystem::path& outDir,
                                           std::string_view namespaceName) {
  auto artifacts = renderArtifacts(schema, namespaceName);
  std::filesystem::create_directories(outDir);
  for (const auto& artifact : artifacts)
    writeAtomically(outDir / artifact.relativePath, artifact.contents);
  return artifacts;
}

}  // namespace granule::codegen
