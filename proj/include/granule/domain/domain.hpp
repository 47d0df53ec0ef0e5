// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "granule/core/types.hpp"
#include "granule/domain/aabb.hpp"

namespace granule::domain {

/// Geometric contract every domain partitioning implements. The
/// synchronization algorithm talks to the partitioning exclusively through
/// these five predicates, so swapping the implementation never touches
/// particle dynamics code.
///
/// Contract:
///   - ownership is a partition: every point inside the global domain is
///     contained by exactly one rank, and ownerOfPoint returns that rank
///   - containsPoint(r, p) implies intersectsSubdomain(r, {p, p})
///   - intersectsSubdomain may be conservative: false positives are allowed,
///     false negatives are not
///   - neighborRanks(r) contains every rank an AABB of diameter up to
///     2 * maxInteractionRadius touching subdomain r can reach
///
/// Implementations are immutable after construction and safe for concurrent
/// reads.
class DomainDecomposition {
 public:
  virtual ~DomainDecomposition() = default;

  virtual Rank numRanks() const = 0;

  /// The unique owning rank, or nullopt when `p` lies outside the global
  /// domain.
  virtual std::optional<Rank> ownerOfPoint(const Vec3& p) const = 0;

  virtual bool containsPoint(Rank rank, const Vec3& p) const = 0;

  virtual bool intersectsSubdomain(Rank rank, const AABB& box) const = 0;

  /// Sorted ascending, never contains `rank` itself.
  virtual std::vector<Rank> neighborRanks(Rank rank) const = 0;
};

/// Regular grid of nx * ny * nz blocks over `globalBox`; rank id is
/// ix + nx * (iy + ny * iz). Cells are half-open per axis and closed on the
/// global upper boundary.
std::unique_ptr<DomainDecomposition> makeBlockGrid(const AABB& globalBox,
                                                   int nx, int ny, int nz);

/// Concentric spherical shells around `center`; rank i owns
/// { p : radii[i-1] <= |p - center| < radii[i] } with radii[-1] = 0. Points
/// at or beyond the last radius are outside the domain.
std::unique_ptr<DomainDecomposition> makeSphericalShells(
    const Vec3& center, std::vector<double> radii);

/// One rank owning everything inside `globalBox`; the serial oracle.
std::unique_ptr<DomainDecomposition> makeSingleDomain(const AABB& globalBox);

}  // namespace granule::domain
