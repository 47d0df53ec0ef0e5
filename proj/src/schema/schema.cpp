// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/schema/schema.hpp"

#include <optional>
#include <sstream>
#include <unordered_set>

#include "granule/core/error.hpp"
#include "granule/core/format.hpp"
#include "granule/core/parse_util.hpp"

namespace granule {

namespace {

std::optional<SyncMode> syncModeFromString(std::string_view text) {
  if (text == "NEVER") return SyncMode::Never;
  if (text == "COPY") return SyncMode::Copy;
  if (text == "MIGRATION") return SyncMode::Migration;
  if (text == "ALWAYS") return SyncMode::Always;
  return std::nullopt;
}

std::optional<PropertyType> propertyTypeFromString(std::string_view text) {
  if (text == "real64") return PropertyType::Real64;
  if (text == "vec3") return PropertyType::Vec3;
  if (text == "int64") return PropertyType::Int64;
  if (text == "uint64") return PropertyType::Uint64;
  return std::nullopt;
}

std::optional<PropertyValue> parseDefault(PropertyType type,
                                          std::string_view literal) {
  switch (type) {
    case PropertyType::Real64:
      if (const auto v = parseReal(literal)) return PropertyValue(*v);
      return std::nullopt;
    case PropertyType::Vec3:
      if (const auto v = parseVec3(literal)) return PropertyValue(*v);
      return std::nullopt;
    case PropertyType::Int64:
      if (const auto v = parseInt64(literal)) return PropertyValue(*v);
      return std::nullopt;
    case PropertyType::Uint64:
      if (const auto v = parseUint64(literal)) return PropertyValue(*v);
      return std::nullopt;
  }
  return std::nullopt;
}

std::string formatDefault(const PropertySpec& prop) {
  switch (prop.type) {
    case PropertyType::Real64:
      return formatReal(std::get<double>(prop.defaultValue));
    case PropertyType::Vec3:
      return formatVec3(std::get<Vec3>(prop.defaultValue));
    case PropertyType::Int64:
      return std::to_string(std::get<std::int64_t>(prop.defaultValue));
    case PropertyType::Uint64:
      return std::to_string(std::get<std::uint64_t>(prop.defaultValue));
  }
  return {};
}

bool defaultsEqual(const PropertyValue& a, const PropertyValue& b) {
  if (a.index() != b.index()) return false;
  if (std::holds_alternative<Vec3>(a))
    return std::get<Vec3>(a) == std::get<Vec3>(b);
  return a == b;
}

}  // namespace

std::string_view syncModeName(SyncMode mode) {
  switch (mode) {
    case SyncMode::Never: return "NEVER";
    case SyncMode::Copy: return "COPY";
    case SyncMode::Migration: return "MIGRATION";
    case SyncMode::Always: return "ALWAYS";
  }
  return "?";
}

std::string_view contextName(SyncContext ctx) {
  switch (ctx) {
    case SyncContext::GhostCreate: return "GHOST_CREATE";
    case SyncContext::GhostUpdate: return "GHOST_UPDATE";
    case SyncContext::MigrationTransfer: return "MIGRATION_TRANSFER";
  }
  return "?";
}

std::string_view propertyTypeName(PropertyType type) {
  switch (type) {
    case PropertyType::Real64: return "real64";
    case PropertyType::Vec3: return "vec3";
    case PropertyType::Int64: return "int64";
    case PropertyType::Uint64: return "uint64";
  }
  return "?";
}

ParticleSchema ParticleSchema::fromProperties(
    std::vector<PropertySpec> properties) {
  std::unordered_set<std::string_view> seen;
  for (const auto& prop : properties) {
    if (!isIdentifier(prop.name))
      throw SchemaError(0, "invalid property name '" + prop.name + "'");
    if (!seen.insert(prop.name).second)
      throw SchemaError(0, "duplicate property '" + prop.name + "'");

    const bool typeMatches =
        (prop.type == PropertyType::Real64 &&
         std::holds_alternative<double>(prop.defaultValue)) ||
        (prop.type == PropertyType::Vec3 &&
         std::holds_alternative<Vec3>(prop.defaultValue)) ||
        (prop.type == PropertyType::Int64 &&
         std::holds_alternative<std::int64_t>(prop.defaultValue)) ||
        (prop.type == PropertyType::Uint64 &&
         std::holds_alternative<std::uint64_t>(prop.defaultValue));
    if (!typeMatches)
      throw SchemaError(0, "default value of '" + prop.name +
                               "' does not match its datatype");
  }

  ParticleSchema schema;
  schema.properties_ = std::move(properties);

  const PropertySpec* position = schema.find("position");
  if (!position) throw SchemaError(0, "required property position absent");
  if (position->type != PropertyType::Vec3 ||
      position->syncMode != SyncMode::Always)
    throw SchemaError(0, "property position must be vec3 with sync ALWAYS");

  const PropertySpec* radius = schema.find("interactionRadius");
  if (!radius)
    throw SchemaError(0, "required property interactionRadius absent");
  if (radius->type != PropertyType::Real64 ||
      radius->syncMode != SyncMode::Copy)
    throw SchemaError(0,
                      "property interactionRadius must be real64 with sync COPY");

  return schema;
}

const PropertySpec* ParticleSchema::find(std::string_view name) const {
  for (const auto& prop : properties_)
    if (prop.name == name) return &prop;
  return nullptr;
}

bool ParticleSchema::operator==(const ParticleSchema& other) const {
  if (properties_.size() != other.properties_.size()) return false;
  for (std::size_t i = 0; i < properties_.size(); ++i) {
    const auto& a = properties_[i];
    const auto& b = other.properties_[i];
    if (a.name != b.name || a.type != b.type || a.syncMode != b.syncMode ||
        !defaultsEqual(a.defaultValue, b.defaultValue))
      return false;
  }
  return true;
}

ParticleSchema parseSchema(std::string_view text) {
  std::vector<PropertySpec> properties;
  std::unordered_set<std::string> names;

  int lineNo = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    const std::string_view rawLine =
        text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                       : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++lineNo;

    const std::string_view line = stripCommentAndTrim(rawLine);
    if (line.empty()) continue;

    const auto tokens = splitTokens(line);
    // property <name> : <type> = <default> sync <MODE>
    if (tokens.size() != 8 || tokens[0] != "property" || tokens[2] != ":" ||
        tokens[4] != "=" || tokens[6] != "sync")
      throw SchemaError(lineNo,
                        "expected 'property <name> : <type> = <default> sync "
                        "<MODE>'");

    PropertySpec prop;
    prop.name = std::string(tokens[1]);
    if (!isIdentifier(prop.name))
      throw SchemaError(lineNo, "invalid property name '" + prop.name + "'");
    if (!names.insert(prop.name).second)
      throw SchemaError(lineNo, "duplicate property '" + prop.name + "'");

    const auto type = propertyTypeFromString(tokens[3]);
    if (!type)
      throw SchemaError(lineNo,
                        "unknown datatype '" + std::string(tokens[3]) + "'");
    prop.type = *type;

    const auto value = parseDefault(prop.type, tokens[5]);
    if (!value)
      throw SchemaError(lineNo, "default '" + std::string(tokens[5]) +
                                    "' is not a valid " +
                                    std::string(propertyTypeName(prop.type)) +
                                    " literal");
    prop.defaultValue = *value;

    const auto mode = syncModeFromString(tokens[7]);
    if (!mode)
      throw SchemaError(lineNo,
                        "unknown syncMode '" + std::string(tokens[7]) + "'");
    prop.syncMode = *mode;

    properties.push_back(std::move(prop));
  }

  return ParticleSchema::fromProperties(std::move(properties));
}

std::string serializeSchema(const ParticleSchema& schema) {
  std::ostringstream out;
  for (const auto& prop : schema.properties())
    out << "property " << prop.name << " : " << propertyTypeName(prop.type) << " = "
        << formatDefault(prop) << " sync " << syncModeName(prop.syncMode) << '\n';
  return out.str();
}

std::vector<PropertySpec> propertiesForContext(const ParticleSchema& schema,
                                               SyncContext ctx) {
  std::vector<PropertySpec> result;
  for (const auto& prop : schema.properties())
    if (syncedIn(prop.syncMode, ctx)) result.push_back(prop);
  return result;
}

std::size_t wireSize(const ParticleSchema& schema, SyncContext ctx) {
  std::size_t bytes = kWireHeaderBytes;
  for (const auto& prop : schema.properties())
    if (syncedIn(prop.syncMode, ctx)) bytes += prop.width();
  return bytes;
}

}  // namespace granule
