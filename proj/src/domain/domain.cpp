// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/domain/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "granule/core/error.hpp"

namespace granule::domain {

namespace {

class BlockGrid final : public DomainDecomposition {
 public:
  BlockGrid(const AABB& globalBox, int nx, int ny, int nz)
      : box_(globalBox), counts_{nx, ny, nz} {
    if (nx < 1 || ny < 1 || nz < 1)
      throw Error("block grid counts must be >= 1");
    if ((box_.extent().array() <= 0.0).any())
      throw Error("block grid needs a non-degenerate global box");
    extent_ = Vec3(box_.extent().x() / nx, box_.extent().y() / ny,
                   box_.extent().z() / nz);
  }

  Rank numRanks() const override {
    return static_cast<Rank>(counts_[0] * counts_[1] * counts_[2]);
  }

  std::optional<Rank> ownerOfPoint(const Vec3& p) const override {
    if (!box_.containsPoint(p)) return std::nullopt;
    return rankOf(cellOf(p));
  }

  bool containsPoint(Rank rank, const Vec3& p) const override {
    if (!box_.containsPoint(p)) return false;
    return rankOf(cellOf(p)) == rank;
  }

  bool intersectsSubdomain(Rank rank, const AABB& box) const override {
    const std::array<int, 3> cell = cellCoords(rank);
    for (int axis = 0; axis < 3; ++axis) {
      const double lo = box_.min[axis] + cell[axis] * extent_[axis];
      const double hi = box_.min[axis] + (cell[axis] + 1) * extent_[axis];
      if (box.max[axis] < lo || box.min[axis] > hi) return false;
    }
    return true;
  }

  std::vector<Rank> neighborRanks(Rank rank) const override {
    const std::array<int, 3> cell = cellCoords(rank);
    std::vector<Rank> neighbors;
    for (int dz = -1; dz <= 1; ++dz)
      for (int dy = -1; dy <= 1; ++dy)
        for (int dx = -1; dx <= 1; ++dx) {
          const std::array<int, 3> other = {cell[0] + dx, cell[1] + dy,
                                            cell[2] + dz};
          if (other[0] < 0 || other[0] >= counts_[0] || other[1] < 0 ||
              other[1] >= counts_[1] || other[2] < 0 || other[2] >= counts_[2])
            continue;
          const Rank r = rankOf(other);
          if (r != rank) neighbors.push_back(r);
        }
    std::sort(neighbors.begin(), neighbors.end());
    return neighbors;
  }

 private:
  // Half-open cells; the floor expression and the clamp on the global upper
  // boundary make ownership a total function on the closed global box.
  std::array<int, 3> cellOf(const Vec3& p) const {
    std::array<int, 3> cell;
    for (int axis = 0; axis < 3; ++axis) {
      const int i = static_cast<int>(
          std::floor((p[axis] - box_.min[axis]) / extent_[axis]));
      cell[axis] = std::clamp(i, 0, counts_[axis] - 1);
    }
    return cell;
  }

  std::array<int, 3> cellCoords(Rank rank) const {
    const int ix = static_cast<int>(rank) % counts_[0];
    const int iy = (static_cast<int>(rank) / counts_[0]) % counts_[1];
    const int iz = static_cast<int>(rank) / (counts_[0] * counts_[1]);
    return {ix, iy, iz};
  }

  Rank rankOf(const std::array<int, 3>& cell) const {
    return static_cast<Rank>(cell[0] +
                             counts_[0] * (cell[1] + counts_[1] * cell[2]));
  }

  AABB box_;
  std::array<int, 3> counts_;
  Vec3 extent_;
};

class SphericalShells final : public DomainDecomposition {
 public:
  SphericalShells(const Vec3& center, std::vector<double> radii)
      : center_(center), radii_(std::move(radii)) {
    if (radii_.empty()) throw Error("spherical shells need at least one radius");
    double previous = 0.0;
    for (const double r : radii_) {
      if (r <= previous)
        throw Error("shell radii must be strictly ascending and positive");
      previous = r;
    }
  }

  Rank numRanks() const override { return static_cast<Rank>(radii_.size()); }

  std::optional<Rank> ownerOfPoint(const Vec3& p) const override {
    const double d = (p - center_).norm();
    for (std::size_t i = 0; i < radii_.size(); ++i)
      if (d < radii_[i]) return static_cast<Rank>(i);
    return std::nullopt;  // at or beyond the outermost radius
  }

  bool containsPoint(Rank rank, const Vec3& p) const override {
    const double d = (p - center_).norm();
    return d >= innerRadius(rank) && d < radii_[static_cast<std::size_t>(rank)];
  }

  bool intersectsSubdomain(Rank rank, const AABB& box) const override {
    // Bracket the box's distance to the shell center, then test the bracket
    // against [inner, outer). Conservative by construction.
    double minSq = 0.0;
    double maxSq = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double lo = box.min[axis] - center_[axis];
      const double hi = box.max[axis] - center_[axis];
      const double farthest = std::max(std::abs(lo), std::abs(hi));
      maxSq += farthest * farthest;
      if (lo > 0.0)
        minSq += lo * lo;
      else if (hi < 0.0)
        minSq += hi * hi;
    }
    const double minDist = std::sqrt(minSq);
    const double maxDist = std::sqrt(maxSq);
    return minDist < radii_[static_cast<std::size_t>(rank)] &&
           maxDist >= innerRadius(rank);
  }

  std::vector<Rank> neighborRanks(Rank rank) const override {
    std::vector<Rank> neighbors;
    if (rank > 0) neighbors.push_back(rank - 1);
    if (rank + 1 < numRanks()) neighbors.push_back(rank + 1);
    return neighbors;
  }

 private:
  double innerRadius(Rank rank) const {
    return rank == 0 ? 0.0 : radii_[static_cast<std::size_t>(rank) - 1];
  }

  Vec3 center_;
  std::vector<double> radii_;
};

class SingleDomain final : public DomainDecomposition {
 public:
  explicit SingleDomain(const AABB& globalBox) : box_(globalBox) {}

  Rank numRanks() const override { return 1; }

  std::optional<Rank> ownerOfPoint(const Vec3& p) const override {
    if (!box_.containsPoint(p)) return std::nullopt;
    return 0;
  }

  bool containsPoint(Rank rank, const Vec3& p) const override {
    return rank == 0 && box_.containsPoint(p);
  }

  bool intersectsSubdomain(Rank rank, const AABB& box) const override {
    return rank == 0 && box_.overlaps(box);
  }

  std::vector<Rank> neighborRanks(Rank) const override { return {}; }

 private:
  AABB box_;
};

}  // namespace

std::unique_ptr<DomainDecomposition> makeBlockGrid(const AABB& globalBox,
                                                   int nx, int ny, int nz) {
  return std::make_unique<BlockGrid>(globalBox, nx, ny, nz);
}

std::unique_ptr<DomainDecomposition> makeSphericalShells(
    const Vec3& center, std::vector<double> radii) {
  return std::make_unique<SphericalShells>(center, std::move(radii));
}

std::unique_ptr<DomainDecomposition> makeSingleDomain(const AABB& globalBox) {
  return std::make_unique<SingleDomain>(globalBox);
}

}  // namespace granule::domain
