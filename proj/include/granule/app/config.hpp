// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "granule/core/types.hpp"
#include "granule/domain/aabb.hpp"
#include "granule/kernels/kernels.hpp"

namespace granule::app {

struct PartitionSpec {
  enum class Kind { Single, BlockGrid, Shells };
  Kind kind = Kind::Single;
  int nx = 1, ny = 1, nz = 1;       // BlockGrid
  std::vector<double> shellRadii;   // Shells
};

struct ScenarioSpec {
  enum class Kind { TwoSphere, Gas, Settle };
  Kind kind = Kind::TwoSphere;
  long count = 0;            // Gas, Settle
  std::uint64_t seed = 0;    // Gas, Settle
  double maxSpeed = 0.0;     // Gas
};

enum class Integrator { Euler, VelocityVerlet };

/// A full simulation description, parsed from the line-oriented
/// `key = value` config format (same lexical conventions as schema files).
struct SimConfig {
  std::string schemaPath;
  PartitionSpec partitioning;
  domain::AABB globalBox;
  double dt = 1e-3;
  long steps = 0;
  Integrator integrator = Integrator::VelocityVerlet;
  double kn = 0.0;
  double gammaN = 0.0;
  Vec3 gravity = Vec3::Zero();
  ScenarioSpec scenario;
  std::string snapshotPath;
  std::string metricsPath;  // empty: no metrics file
  long outputInterval = 1;

  kernels::KernelParams kernelParams() const {
    kernels::KernelParams params;
    params.dt = dt;
    params.gravity = gravity;
    params.kn = kn;
    params.gammaN = gammaN;
    return params;
  }
};

/// Parses a config. Throws ConfigError with a line number on the first
/// problem (unknown key, bad literal, missing required key, bad range).
SimConfig parseConfig(std::string_view text);

SimConfig loadConfigFile(const std::filesystem::path& path);

}  // namespace granule::app
