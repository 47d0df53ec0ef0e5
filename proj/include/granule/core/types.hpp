// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Core>

#include <cstdint>

namespace granule {

using Vec3 = Eigen::Vector3d;

/// Simulated process id. Negative ranks are invalid; -1 is the explicit
/// "no rank" marker used on the wire.
using Rank = std::int32_t;

/// Globally unique particle id, assigned at creation and stable across
/// migration.
using Uid = std::uint64_t;

inline constexpr Rank kInvalidRank = -1;

}  // namespace granule
