// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/core/parse_util.hpp"

#include <cctype>
#include <cerrno>
#include <cstdlib>

namespace granule {

namespace {

bool isSpace(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::string_view trim(std::string_view text) {
  while (!text.empty() && isSpace(text.front())) text.remove_prefix(1);
  while (!text.empty() && isSpace(text.back())) text.remove_suffix(1);
  return text;
}

std::string_view stripCommentAndTrim(std::string_view line) {
  if (const auto hash = line.find('#'); hash != std::string_view::npos)
    line = line.substr(0, hash);
  return trim(line);
}

bool isIdentifier(std::string_view text) {
  if (text.empty()) return false;
  const auto alpha = [](char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
  };
  const auto alnum = [&](char c) {
    return alpha(c) || std::isdigit(static_cast<unsigned char>(c)) != 0;
  };
  if (!alpha(text.front())) return false;
  for (char c : text)
    if (!alnum(c)) return false;
  return true;
}

std::optional<double> parseReal(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  const std::string owned(token);
  errno = 0;
  char* end = nullptr;
  const double value = std::strtod(owned.c_str(), &end);
  if (end != owned.c_str() + owned.size() || errno == ERANGE) return std::nullopt;
  return value;
}

std::optional<std::int64_t> parseInt64(std::string_view token) {
  token = trim(token);
  if (token.empty()) return std::nullopt;
  const std::string owned(token);
  errno = 0;
  char* end = nullptr;
  const long long value = std::strtoll(owned.c_str(), &end, 10);
  if (end != owned.c_str() + owned.size() || errno == ERANGE) return std::nullopt;
  return static_cast<std::int64_t>(value);
}

std::optional<std::uint64_t> parseUint64(std::string_view token) {
  token = trim(token);
  if (token.empty() || token.front() == '-') return std::nullopt;
  const std::string owned(token);
  errno = 0;
  char* end = nullptr;
  const unsigned long long value = std::strtoull(owned.c_str(), &end, 10);
  if (end != owned.c_str() + owned.size() || errno == ERANGE) return std::nullopt;
  return static_cast<std::uint64_t>(value);
}

std::optional<Vec3> parseVec3(std::string_view token) {
  token = trim(token);
  if (token.size() < 2 || token.front() != '(' || token.back() != ')')
    return std::nullopt;
  token = token.substr(1, token.size() - 2);

  double comps[3];
  for (int i = 0; i < 3; ++i) {
    std::string_view part;
    if (i < 2) {
      const auto comma = token.find(',');
      if (comma == std::string_view::npos) return std::nullopt;
      part = token.substr(0, comma);
      token.remove_prefix(comma + 1);
    } else {
      part = token;
    }
    const auto value = parseReal(part);
    if (!value) return std::nullopt;
    comps[i] = *value;
  }
  return Vec3(comps[0], comps[1], comps[2]);
}

std::vector<std::string_view> splitTokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    if (isSpace(line[i])) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (line[i] == '(') {
      // keep `(a, b, c)` together
      while (i < line.size() && line[i] != ')') ++i;
      if (i < line.size()) ++i;
    } else {
      while (i < line.size() && !isSpace(line[i])) ++i;
    }
    tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

}  // namespace granule
