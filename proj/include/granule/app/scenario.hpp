// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "granule/app/config.hpp"
#include "granule/core/types.hpp"

namespace granule::app {

struct ParticleInit {
  Uid uid = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
  double radius = 0.0;
  double invMass = 1.0;
};

/// Builds the global initial particle list for the configured scenario.
/// Bitwise reproducible for a fixed config (the random scenarios draw from a
/// seeded generator with a fixed draw order); independent of the domain
/// partitioning, which only decides where each particle is created.
std::vector<ParticleInit> buildScenario(const SimConfig& config);

}  // namespace granule::app
