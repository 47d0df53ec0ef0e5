// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/codegen/template_engine.hpp"

#include <cctype>
#include <memory>
#include <optional>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/format.hpp"
#include "granule/core/parse_util.hpp"

namespace granule::codegen {

namespace {

struct Node {
  enum class Kind { Text, Placeholder, For, IfMode, IfContext };

  Kind kind = Kind::Text;
  std::string text;             // Text: literal; Placeholder: name
  std::vector<SyncMode> modes;  // IfMode
  SyncContext context = SyncContext::GhostCreate;  // IfContext
  std::vector<Node> children;   // For / If bodies
};

struct Tag {
  enum class Kind { For, EndFor, If, EndIf };
  Kind kind;
  std::vector<std::string_view> args;
};

std::string capitalize(std::string name) {
  if (!name.empty())
    name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  return name;
}

std::string cppType(PropertyType type) {
  switch (type) {
    case PropertyType::Real64: return "double";
    case PropertyType::Vec3: return "Vec3";
    case PropertyType::Int64: return "std::int64_t";
    case PropertyType::Uint64: return "std::uint64_t";
  }
  return {};
}

std::string cppConstRef(PropertyType type) {
  return type == PropertyType::Vec3 ? "const Vec3&" : cppType(type);
}

std::string wireSuffix(PropertyType type) {
  switch (type) {
    case PropertyType::Real64: return "Real64";
    case PropertyType::Vec3: return "Vec3";
    case PropertyType::Int64: return "Int64";
    case PropertyType::Uint64: return "Uint64";
  }
  return {};
}

std::string schemaLiteral(const PropertySpec& prop) {
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

std::string cppLiteral(const PropertySpec& prop) {
  switch (prop.type) {
    case PropertyType::Real64:
      return formatReal(std::get<double>(prop.defaultValue));
    case PropertyType::Vec3: {
      const Vec3& v = std::get<Vec3>(prop.defaultValue);
      return "Vec3(" + formatReal(v.x()) + ", " + formatReal(v.y()) + ", " +
             formatReal(v.z()) + ")";
    }
    case PropertyType::Int64:
      return "static_cast<std::int64_t>(" +
             std::to_string(std::get<std::int64_t>(prop.defaultValue)) + ")";
    case PropertyType::Uint64:
      return "static_cast<std::uint64_t>(" +
             std::to_string(std::get<std::uint64_t>(prop.defaultValue)) + "u)";
  }
  return {};
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::vector<Node> parse() {
    std::vector<Node> nodes = parseNodes(/*depth=*/0);
    if (pos_ != text_.size())
      throw TemplateError("'" + std::string(pendingEnd_) + "' without opening block");
    return nodes;
  }

 private:
  // Parses until an end tag matching the enclosing block (or end of input at
  // depth 0). The matched end tag is consumed.
  std::vector<Node> parseNodes(int depth) {
    std::vector<Node> nodes;
    while (pos_ < text_.size()) {
      const auto next = text_.find('{', pos_);
      if (next == std::string_view::npos || next + 1 >= text_.size()) break;

      const char marker = text_[next + 1];
      if (marker != '{' && marker != '%') {
        pos_ = emitText(nodes, pos_, next + 1);
        continue;
      }

      if (marker == '{') {
        const auto close = text_.find("}}", next + 2);
        if (close == std::string_view::npos)
          throw TemplateError("unterminated '{{' placeholder");
        emitText(nodes, pos_, next);
        Node node;
        node.kind = Node::Kind::Placeholder;
        node.text = std::string(trim(text_.substr(next + 2, close - next - 2)));
        nodes.push_back(std::move(node));
        pos_ = close + 2;
        continue;
      }

      // {% ... %}
      const auto close = text_.find("%}", next + 2);
      if (close == std::string_view::npos)
        throw TemplateError("unterminated '{%' tag");
      auto [tagBegin, tagEnd] = trimTagLine(next, close + 2);
      const Tag tag = parseTag(text_.substr(next + 2, close - next - 2));

      switch (tag.kind) {
        case Tag::Kind::For: {
          emitText(nodes, pos_, tagBegin);
          pos_ = tagEnd;
          Node node;
          node.kind = Node::Kind::For;
          node.children = parseNodes(depth + 1);
          if (pendingEnd_ != "endfor")
            throw TemplateError("'{% for %}' closed by '" +
                                std::string(pendingEnd_.empty() ? "end of input"
                                                                : pendingEnd_) +
                                "'");
          pendingEnd_ = {};
          nodes.push_back(std::move(node));
          break;
        }
        case Tag::Kind::If: {
          emitText(nodes, pos_, tagBegin);
          pos_ = tagEnd;
          Node node = makeIfNode(tag);
          node.children = parseNodes(depth + 1);
          if (pendingEnd_ != "endif")
            throw TemplateError("'{% if %}' closed by '" +
                                std::string(pendingEnd_.empty() ? "end of input"
                                                                : pendingEnd_) +
                                "'");
          pendingEnd_ = {};
          nodes.push_back(std::move(node));
          break;
        }
        case Tag::Kind::EndFor:
        case Tag::Kind::EndIf: {
          emitText(nodes, pos_, tagBegin);
          pos_ = tagEnd;
          pendingEnd_ = tag.kind == Tag::Kind::EndFor ? "endfor" : "endif";
          if (depth == 0)
            throw TemplateError("'" + std::string(pendingEnd_) +
                                "' without opening block");
          return nodes;
        }
      }
    }
    // Flush trailing text.
    emitText(nodes, pos_, text_.size());
    pos_ = text_.size();
    pendingEnd_ = {};
    return nodes;
  }

  Node makeIfNode(const Tag& tag) {
    Node node;
    if (tag.args.empty())
      throw TemplateError("'{% if %}' needs a condition");
    const std::string_view kind = tag.args[0];
    if (kind == "mode") {
      node.kind = Node::Kind::IfMode;
      if (tag.args.size() < 2)
        throw TemplateError("'{% if mode %}' needs at least one mode");
      for (std::size_t i = 1; i < tag.args.size(); ++i) {
        const auto arg = tag.args[i];
        if (arg == "NEVER") node.modes.push_back(SyncMode::Never);
        else if (arg == "COPY") node.modes.push_back(SyncMode::Copy);
        else if (arg == "MIGRATION") node.modes.push_back(SyncMode::Migration);
        else if (arg == "ALWAYS") node.modes.push_back(SyncMode::Always);
        else
          throw TemplateError("unknown sync mode '" + std::string(arg) +
                              "' in '{% if mode %}'");
      }
    } else if (kind == "context") {
      node.kind = Node::Kind::IfContext;
      if (tag.args.size() != 2)
        throw TemplateError("'{% if context %}' needs exactly one context");
      const auto arg = tag.args[1];
      if (arg == "GHOST_CREATE") node.context = SyncContext::GhostCreate;
      else if (arg == "GHOST_UPDATE") node.context = SyncContext::GhostUpdate;
      else if (arg == "MIGRATION_TRANSFER")
        node.context = SyncContext::MigrationTransfer;
      else
        throw TemplateError("unknown context '" + std::string(arg) +
                            "' in '{% if context %}'");
    } else {
      throw TemplateError("unknown condition '" + std::string(kind) + "'");
    }
    return node;
  }

  static Tag parseTag(std::string_view body) {
    const auto tokens = splitTokens(body);
    if (tokens.empty()) throw TemplateError("empty '{% %}' tag");
    Tag tag;
    if (tokens[0] == "for") {
      if (tokens.size() != 2 || tokens[1] != "prop")
        throw TemplateError("expected '{% for prop %}'");
      tag.kind = Tag::Kind::For;
    } else if (tokens[0] == "endfor") {
      if (tokens.size() != 1) throw TemplateError("expected '{% endfor %}'");
      tag.kind = Tag::Kind::EndFor;
    } else if (tokens[0] == "if") {
      tag.kind = Tag::Kind::If;
      tag.args.assign(tokens.begin() + 1, tokens.end());
    } else if (tokens[0] == "endif") {
      if (tokens.size() != 1) throw TemplateError("expected '{% endif %}'");
      tag.kind = Tag::Kind::EndIf;
    } else {
      throw TemplateError("unknown block tag '" + std::string(tokens[0]) + "'");
    }
    return tag;
  }

  // When a block tag is alone on its line, widen its span to swallow the
  // leading indentation and the trailing newline.
  std::pair<std::size_t, std::size_t> trimTagLine(std::size_t tagBegin,
                                                  std::size_t tagEnd) const {
    std::size_t lineStart = tagBegin;
    while (lineStart > 0 && text_[lineStart - 1] != '\n') --lineStart;
    for (std::size_t i = lineStart; i < tagBegin; ++i)
      if (text_[i] != ' ' && text_[i] != '\t') return {tagBegin, tagEnd};

    std::size_t lineEnd = tagEnd;
    while (lineEnd < text_.size() && text_[lineEnd] != '\n') {
      if (text_[lineEnd] != ' ' && text_[lineEnd] != '\t')
        return {tagBegin, tagEnd};
      ++lineEnd;
    }
    if (lineEnd < text_.size()) ++lineEnd;  // consume the newline
    return {lineStart, lineEnd};
  }

  std::size_t emitText(std::vector<Node>& nodes, std::size_t from,
                       std::size_t to) {
    if (to > from) {
      Node node;
      node.kind = Node::Kind::Text;
      node.text = std::string(text_.substr(from, to - from));
      nodes.push_back(std::move(node));
    }
    return to;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::string_view pendingEnd_;
};

class Expander {
 public:
  Expander(const ParticleSchema& schema,
           const std::map<std::string, std::string, std::less<>>& globals)
      : schema_(schema), globals_(globals) {}

  std::string expand(const std::vector<Node>& nodes) {
    std::string out;
    expandInto(nodes, nullptr, out);
    return out;
  }

 private:
  void expandInto(const std::vector<Node>& nodes, const PropertySpec* prop,
                  std::string& out) {
    for (const auto& node : nodes) {
      switch (node.kind) {
        case Node::Kind::Text:
          out += node.text;
          break;
        case Node::Kind::Placeholder:
          out += resolve(node.text, prop);
          break;
        case Node::Kind::For:
          if (prop)
            throw TemplateError("nested '{% for prop %}' loops are not supported");
          for (const auto& p : schema_.properties())
            expandInto(node.children, &p, out);
          break;
        case Node::Kind::IfMode: {
          if (!prop)
            throw TemplateError("'{% if mode %}' outside a property loop");
          bool match = false;
          for (const auto mode : node.modes) match |= prop->syncMode == mode;
          if (match) expandInto(node.children, prop, out);
          break;
        }
        case Node::Kind::IfContext:
          if (!prop)
            throw TemplateError("'{% if context %}' outside a property loop");
          if (syncedIn(prop->syncMode, node.context))
            expandInto(node.children, prop, out);
          break;
      }
    }
  }

  std::string resolve(const std::string& name, const PropertySpec* prop) {
    if (name.starts_with("prop.")) {
      if (!prop)
        throw TemplateError("placeholder '{{" + name +
                            "}}' outside a property loop");
      const std::string_view field = std::string_view(name).substr(5);
      if (field == "name") return prop->name;
      if (field == "Name") return capitalize(prop->name);
      if (field == "type") return std::string(propertyTypeName(prop->type));
      if (field == "cpptype") return cppType(prop->type);
      if (field == "cppconstref") return cppConstRef(prop->type);
      if (field == "default") return schemaLiteral(*prop);
      if (field == "cppdefault") return cppLiteral(*prop);
      if (field == "width") return std::to_string(prop->width());
      if (field == "mode") return std::string(syncModeName(prop->syncMode));
      if (field == "wire") return wireSuffix(prop->type);
      throw TemplateError("unknown placeholder '{{" + name + "}}'");
    }
    const auto it = globals_.find(name);
    if (it == globals_.end())
      throw TemplateError("unknown placeholder '{{" + name + "}}'");
    return it->second;
  }

  const ParticleSchema& schema_;
  const std::map<std::string, std::string, std::less<>>& globals_;
};

}  // namespace

std::string expandTemplate(
    std::string_view text, const ParticleSchema& schema,
    const std::map<std::string, std::string, std::less<>>& globals) {
  Parser parser(text);
  const std::vector<Node> nodes = parser.parse();
  Expander expander(schema, globals);
  return expander.expand(nodes);
}

}  // namespace granule::codegen
