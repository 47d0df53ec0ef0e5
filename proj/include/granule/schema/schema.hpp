// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "granule/core/types.hpp"

namespace granule {

/// Per-property policy controlling when a value crosses rank boundaries.
enum class SyncMode {
  Never,      ///< local scratch, never transmitted
  Copy,       ///< sent once, when a ghost is created
  Migration,  ///< sent when ownership changes
  Always,     ///< sent in every synchronization
};

/// The three packing situations a property can participate in.
enum class SyncContext {
  GhostCreate,
  GhostUpdate,
  MigrationTransfer,
};

enum class PropertyType {
  Real64,
  Vec3,
  Int64,
  Uint64,
};

using PropertyValue = std::variant<double, Vec3, std::int64_t, std::uint64_t>;

std::string_view syncModeName(SyncMode mode);
std::string_view contextName(SyncContext ctx);
std::string_view propertyTypeName(PropertyType type);

/// Whether a property with mode `mode` is part of the payload of `ctx`.
/// This single predicate is the source of truth for every pack/unpack pair.
constexpr bool syncedIn(SyncMode mode, SyncContext ctx) {
  switch (ctx) {
    case SyncContext::GhostCreate:
      return mode == SyncMode::Copy || mode == SyncMode::Always;
    case SyncContext::GhostUpdate:
      return mode == SyncMode::Always;
    case SyncContext::MigrationTransfer:
      return mode != SyncMode::Never;
  }
  return false;
}

/// Transmitted size in bytes (little-endian wire format).
constexpr std::size_t wireWidth(PropertyType type) {
  switch (type) {
    case PropertyType::Vec3:
      return 24;
    case PropertyType::Real64:
    case PropertyType::Int64:
    case PropertyType::Uint64:
      return 8;
  }
  return 0;
}

/// uid (8 bytes) + ownerRank (4 bytes), prepended to every particle payload.
inline constexpr std::size_t kWireHeaderBytes = 12;

struct PropertySpec {
  std::string name;
  PropertyType type = PropertyType::Real64;
  PropertyValue defaultValue = 0.0;
  SyncMode syncMode = SyncMode::Never;

  std::size_t width() const { return wireWidth(type); }
};

/// Ordered list of particle properties; the single description every other
/// module is derived from. Instances are valid by construction and immutable
/// afterwards.
class ParticleSchema {
 public:
  /// Validates and adopts `properties`. Throws SchemaError on duplicate
  /// names, bad identifiers, default/type mismatches, or when the required
  /// `position` / `interactionRadius` properties are missing.
  static ParticleSchema fromProperties(std::vector<PropertySpec> properties);

  const std::vector<PropertySpec>& properties() const { return properties_; }
  std::size_t size() const { return properties_.size(); }

  const PropertySpec* find(std::string_view name) const;

  bool operator==(const ParticleSchema& other) const;

 private:
  ParticleSchema() = default;
  std::vector<PropertySpec> properties_;
};

/// Parses the line-oriented schema format:
///
///   # comment
///   property <name> : <type> = <default> sync <MODE>
///
/// Throws SchemaError with a 1-based line number on the first problem.
ParticleSchema parseSchema(std::string_view text);

/// Canonical text form; parseSchema(serializeSchema(s)) == s.
std::string serializeSchema(const ParticleSchema& schema);

/// The properties transmitted in `ctx`, in declaration order.
std::vector<PropertySpec> propertiesForContext(const ParticleSchema& schema,
                                               SyncContext ctx);

/// Payload size of a full particle record for `ctx`, header included.
std::size_t wireSize(const ParticleSchema& schema, SyncContext ctx);

}  // namespace granule
