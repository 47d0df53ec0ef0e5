// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"

namespace granule::domain {

/// Axis-aligned bounding box, min <= max componentwise.
struct AABB {
  Vec3 min = Vec3::Zero();
  Vec3 max = Vec3::Zero();

  AABB() = default;
  AABB(const Vec3& lo, const Vec3& hi) : min(lo), max(hi) {
    if ((min.array() > max.array()).any())
      throw Error("AABB min exceeds max");
  }

  static AABB aroundPoint(const Vec3& p, double halfWidth) {
    return AABB(p.array() - halfWidth, p.array() + halfWidth);
  }

  Vec3 extent() const { return max - min; }
  Vec3 center() const { return 0.5 * (min + max); }

  bool containsPoint(const Vec3& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }

  /// Closed-box overlap test (touching counts as overlap).
  bool overlaps(const AABB& other) const {
    return (min.array() <= other.max.array()).all() &&
           (max.array() >= other.min.array()).all();
  }
};

/// Particle bounding volume: position inflated by the interaction radius.
inline AABB inflatedBox(const Vec3& position, double interactionRadius) {
  return AABB::aroundPoint(position, interactionRadius);
}

}  // namespace granule::domain
