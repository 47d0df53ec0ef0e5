// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
//
// granule: schema-driven particle dynamics.
//
//   granule generate --schema <file> --out <dir> [--ns <namespace>]
//   granule run --config <file> [--check] [--vtk] [--threads]
//   granule version

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "granule/app/config.hpp"
#include "granule/app/driver.hpp"
#include "granule/codegen/generator.hpp"
#include "granule/core/error.hpp"
#include "granule/schema/schema.hpp"

namespace {

constexpr const char* kVersion = "granule 0.1.0";

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw granule::ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int runGenerate(const std::string& schemaPath, const std::string& outDir,
                const std::string& namespaceName) {
  const auto schema = granule::parseSchema(readFile(schemaPath));
  const auto artifacts =
      granule::codegen::generateAll(schema, outDir, namespaceName);
  for (const auto& artifact : artifacts)
    std::cout << outDir << '/' << artifact.relativePath << '\n';
  return 0;
}

int runRun(const std::string& configPath, const granule::app::RunOptions& options) {
  const auto config = granule::app::loadConfigFile(configPath);
  return granule::app::runSimulation(config, options);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"schema-driven particle dynamics engine"};
  app.require_subcommand(1);

  std::string schemaPath, outDir;
  std::string namespaceName{granule::codegen::kDefaultNamespace};
  auto* generate = app.add_subcommand(
      "generate", "expand the storage/serialization code for a schema");
  generate->add_option("--schema", schemaPath, "property schema file")
      ->required();
  generate->add_option("--out", outDir, "output directory")->required();
  generate->add_option("--ns", namespaceName, "namespace of the generated code");

  std::string configPath;
  granule::app::RunOptions options;
  auto* run = app.add_subcommand("run", "run a simulation");
  run->add_option("--config", configPath, "simulation config file")->required();
  run->add_flag("--check", options.check,
                "verify cross-rank consistency after every step");
  run->add_flag("--vtk", options.vtk, "also write legacy-VTK point files");
  run->add_flag("--threads", options.threaded, "one thread per simulated rank");

  auto* version = app.add_subcommand("version", "print the version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : granule::app::kExitConfigError;
  }

  try {
    if (generate->parsed()) return runGenerate(schemaPath, outDir, namespaceName);
    if (run->parsed()) return runRun(configPath, options);
    if (version->parsed()) {
      std::cout << kVersion << '\n';
      return 0;
    }
  } catch (const granule::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return granule::app::kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
