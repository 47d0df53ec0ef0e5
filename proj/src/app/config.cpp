// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/app/config.hpp"

#include <fstream>
#include <map>
#include <sstream>

#include "granule/core/error.hpp"
#include "granule/core/parse_util.hpp"

namespace granule::app {

namespace {

[[noreturn]] void fail(int line, const std::string& message) {
  throw ConfigError("config line " + std::to_string(line) + ": " + message);
}

struct Call {
  std::string name;
  std::vector<std::string> args;
};

// `name(a, b, c)` or a bare `name`.
Call splitCall(std::string_view value, int line) {
  Call call;
  const auto open = value.find('(');
  if (open == std::string_view::npos) {
    call.name = std::string(trim(value));
    return call;
  }
  if (value.back() != ')') fail(line, "missing ')' in '" + std::string(value) + "'");
  call.name = std::string(trim(value.substr(0, open)));
  std::string_view args = value.substr(open + 1, value.size() - open - 2);
  while (!args.empty()) {
    const auto comma = args.find(',');
    call.args.emplace_back(
        trim(comma == std::string_view::npos ? args : args.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    args.remove_prefix(comma + 1);
  }
  return call;
}

double realArg(const Call& call, std::size_t i, int line) {
  const auto v = parseReal(call.args[i]);
  if (!v) fail(line, "'" + call.args[i] + "' is not a number");
  return *v;
}

long longArg(const Call& call, std::size_t i, int line) {
  const auto v = parseInt64(call.args[i]);
  if (!v) fail(line, "'" + call.args[i] + "' is not an integer");
  return static_cast<long>(*v);
}

}  // namespace

SimConfig parseConfig(std::string_view text) {
  SimConfig config;
  std::map<std::string, bool> seen;

  bool haveBoxMin = false, haveBoxMax = false, haveDt = false,
       haveSteps = false, haveScenario = false, havePartitioning = false;
  Vec3 boxMin = Vec3::Zero(), boxMax = Vec3::Zero();

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

    const auto equals = line.find('=');
    if (equals == std::string_view::npos) fail(lineNo, "expected 'key = value'");
    const std::string key{trim(line.substr(0, equals))};
    const std::string_view value = trim(line.substr(equals + 1));
    if (key.empty() || value.empty()) fail(lineNo, "expected 'key = value'");
    if (!seen.emplace(key, true).second) fail(lineNo, "duplicate key '" + key + "'");

    if (key == "schema") {
      config.schemaPath = std::string(value);
    } else if (key == "partitioning") {
      const Call call = splitCall(value, lineNo);
      if (call.name == "single") {
        if (!call.args.empty()) fail(lineNo, "single takes no arguments");
        config.partitioning.kind = PartitionSpec::Kind::Single;
      } else if (call.name == "blockgrid") {
        if (call.args.size() != 3) fail(lineNo, "blockgrid needs (nx,ny,nz)");
        config.partitioning.kind = PartitionSpec::Kind::BlockGrid;
        config.partitioning.nx = static_cast<int>(longArg(call, 0, lineNo));
        config.partitioning.ny = static_cast<int>(longArg(call, 1, lineNo));
        config.partitioning.nz = static_cast<int>(longArg(call, 2, lineNo));
      } else if (call.name == "shells") {
        if (call.args.empty()) fail(lineNo, "shells needs at least one radius");
        config.partitioning.kind = PartitionSpec::Kind::Shells;
        for (std::size_t i = 0; i < call.args.size(); ++i)
          config.partitioning.shellRadii.push_back(realArg(call, i, lineNo));
      } else {
        fail(lineNo, "unknown partitioning '" + call.name + "'");
      }
      havePartitioning = true;
    } else if (key == "box_min" || key == "box_max") {
      const auto v = parseVec3(value);
      if (!v) fail(lineNo, "'" + std::string(value) + "' is not a vec3 literal");
      (key == "box_min" ? boxMin : boxMax) = *v;
      (key == "box_min" ? haveBoxMin : haveBoxMax) = true;
    } else if (key == "dt") {
      const auto v = parseReal(value);
      if (!v || !(*v > 0.0)) fail(lineNo, "dt must be a positive number");
      config.dt = *v;
      haveDt = true;
    } else if (key == "steps") {
      const auto v = parseInt64(value);
      if (!v || *v < 0) fail(lineNo, "steps must be a non-negative integer");
      config.steps = static_cast<long>(*v);
      haveSteps = true;
    } else if (key == "integrator") {
      if (value == "euler") config.integrator = Integrator::Euler;
      else if (value == "vverlet") config.integrator = Integrator::VelocityVerlet;
      else fail(lineNo, "integrator must be 'euler' or 'vverlet'");
    } else if (key == "kn") {
      const auto v = parseReal(value);
      if (!v || *v < 0.0) fail(lineNo, "kn must be a non-negative number");
      config.kn = *v;
    } else if (key == "gamma_n") {
      const auto v = parseReal(value);
      if (!v || *v < 0.0) fail(lineNo, "gamma_n must be a non-negative number");
      config.gammaN = *v;
    } else if (key == "gravity") {
      const auto v = parseVec3(value);
      if (!v) fail(lineNo, "'" + std::string(value) + "' is not a vec3 literal");
      config.gravity = *v;
    } else if (key == "scenario") {
      const Call call = splitCall(value, lineNo);
      if (call.name == "two_sphere") {
        if (!call.args.empty()) fail(lineNo, "two_sphere takes no arguments");
        config.scenario.kind = ScenarioSpec::Kind::TwoSphere;
      } else if (call.name == "gas") {
        if (call.args.size() != 3) fail(lineNo, "gas needs (count, seed, maxSpeed)");
        config.scenario.kind = ScenarioSpec::Kind::Gas;
        config.scenario.count = longArg(call, 0, lineNo);
        config.scenario.seed = static_cast<std::uint64_t>(longArg(call, 1, lineNo));
        config.scenario.maxSpeed = realArg(call, 2, lineNo);
        if (config.scenario.count < 0) fail(lineNo, "gas count must be >= 0");
        if (config.scenario.maxSpeed < 0.0) fail(lineNo, "gas maxSpeed must be >= 0");
      } else if (call.name == "settle") {
        if (call.args.size() != 2) fail(lineNo, "settle needs (count, seed)");
        config.scenario.kind = ScenarioSpec::Kind::Settle;
        config.scenario.count = longArg(call, 0, lineNo);
        config.scenario.seed = static_cast<std::uint64_t>(longArg(call, 1, lineNo));
        if (config.scenario.count < 0) fail(lineNo, "settle count must be >= 0");
      } else {
        fail(lineNo, "unknown scenario '" + call.name + "'");
      }
      haveScenario = true;
    } else if (key == "snapshot") {
      config.snapshotPath = std::string(value);
    } else if (key == "metrics") {
      config.metricsPath = std::string(value);
    } else if (key == "output_interval") {
      const auto v = parseInt64(value);
      if (!v || *v < 1) fail(lineNo, "output_interval must be >= 1");
      config.outputInterval = static_cast<long>(*v);
    } else {
      fail(lineNo, "unknown key '" + key + "'");
    }
  }

  if (config.schemaPath.empty()) throw ConfigError("config: missing 'schema'");
  if (!havePartitioning) throw ConfigError("config: missing 'partitioning'");
  if (!haveBoxMin || !haveBoxMax)
    throw ConfigError("config: missing 'box_min'/'box_max'");
  if (!haveDt) throw ConfigError("config: missing 'dt'");
  if (!haveSteps) throw ConfigError("config: missing 'steps'");
  if (!haveScenario) throw ConfigError("config: missing 'scenario'");
  if (config.snapshotPath.empty()) throw ConfigError("config: missing 'snapshot'");

  if ((boxMin.array() >= boxMax.array()).any())
    throw ConfigError("config: box_min must be strictly below box_max");
  config.globalBox = domain::AABB(boxMin, boxMax);
  return config;
}

SimConfig loadConfigFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parseConfig(ss.str());
}

}  // namespace granule::app
