// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <tuple>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"

namespace granule::kernels {

/// Linked-cell pair traversal: invokes `kernel(i, j)` exactly once per
/// unordered particle pair in the same or an adjacent cell, ghost-ghost
/// pairs excluded. Pairs are visited in ascending (min uid, max uid) order
/// and the smaller-uid particle is passed first, which makes the force
/// accumulation order (and therefore the results) independent of storage
/// order and domain partitioning.
///
/// `cellSize` must be at least twice the largest interaction radius present
/// so that no interacting pair can span more than one cell.
template <class Store, class PairKernel>
void forEachPair(const Store& store, double cellSize, PairKernel&& kernel) {
  const std::size_t n = store.size();
  if (n < 2) return;
  if (!(cellSize > 0.0)) throw ConfigError("cell size must be positive");

  double maxRadius = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    maxRadius = std::max(maxRadius, store.getInteractionRadius(i));
  if (cellSize < 2.0 * maxRadius)
    throw ConfigError("cell size " + std::to_string(cellSize) +
                      " is smaller than twice the largest interaction radius " +
                      std::to_string(maxRadius));

  Vec3 origin = store.getPosition(0);
  for (std::size_t i = 1; i < n; ++i)
    origin = origin.cwiseMin(store.getPosition(i));

  const auto cellOf = [&](std::size_t i) {
    const Vec3 p = store.getPosition(i);
    std::array<int, 3> c;
    for (int axis = 0; axis < 3; ++axis)
      c[axis] = static_cast<int>(std::floor((p[axis] - origin[axis]) / cellSize));
    return c;
  };

  std::array<int, 3> dims = {1, 1, 1};
  std::vector<std::array<int, 3>> coords(n);
  for (std::size_t i = 0; i < n; ++i) {
    coords[i] = cellOf(i);
    for (int axis = 0; axis < 3; ++axis)
      dims[axis] = std::max(dims[axis], coords[i][axis] + 1);
  }
  const std::size_t totalCells = static_cast<std::size_t>(dims[0]) * dims[1] *
                                 static_cast<std::size_t>(dims[2]);
  if (totalCells > (std::size_t{1} << 27))
    throw ConfigError("linked cell grid would need " +
                      std::to_string(totalCells) + " cells");

  const auto linear = [&](const std::array<int, 3>& c) {
    return static_cast<std::size_t>(c[0]) +
           static_cast<std::size_t>(dims[0]) *
               (static_cast<std::size_t>(c[1]) +
                static_cast<std::size_t>(dims[1]) * c[2]);
  };

  std::vector<std::vector<std::uint32_t>> buckets(totalCells);
  for (std::size_t i = 0; i < n; ++i)
    buckets[linear(coords[i])].push_back(static_cast<std::uint32_t>(i));

  // Forward half of the 27-neighborhood; each unordered cell pair is visited
  // exactly once.
  static constexpr std::array<std::array<int, 3>, 13> kForwardOffsets = {{
      {1, 0, 0},  {-1, 1, 0}, {0, 1, 0},  {1, 1, 0},  {-1, -1, 1},
      {0, -1, 1}, {1, -1, 1}, {-1, 0, 1}, {0, 0, 1},  {1, 0, 1},
      {-1, 1, 1}, {0, 1, 1},  {1, 1, 1},
  }};

  struct Candidate {
    Uid minUid;
    Uid maxUid;
    std::uint32_t minIndex;
    std::uint32_t maxIndex;
  };
  std::vector<Candidate> candidates;

  const auto addPair = [&](std::uint32_t a, std::uint32_t b) {
    if (store.isGhost(a) && store.isGhost(b)) return;
    Candidate c;
    if (store.uid(a) < store.uid(b))
      c = {store.uid(a), store.uid(b), a, b};
    else
      c = {store.uid(b), store.uid(a), b, a};
    candidates.push_back(c);
  };

  for (int cz = 0; cz < dims[2]; ++cz)
    for (int cy = 0; cy < dims[1]; ++cy)
      for (int cx = 0; cx < dims[0]; ++cx) {
        const auto& bucket = buckets[linear({cx, cy, cz})];
        if (bucket.empty()) continue;
        for (std::size_t a = 0; a < bucket.size(); ++a)
          for (std::size_t b = a + 1; b < bucket.size(); ++b)
            addPair(bucket[a], bucket[b]);
        for (const auto& offset : kForwardOffsets) {
          const std::array<int, 3> other = {cx + offset[0], cy + offset[1],
                                            cz + offset[2]};
          if (other[0] < 0 || other[0] >= dims[0] || other[1] < 0 ||
              other[1] >= dims[1] || other[2] < 0 || other[2] >= dims[2])
            continue;
          for (const auto a : bucket)
            for (const auto b : buckets[linear(other)]) addPair(a, b);
        }
      }

  std::sort(candidates.begin(), candidates.end(),
            [](const Candidate& a, const Candidate& b) {
              return std::tie(a.minUid, a.maxUid) <
                     std::tie(b.minUid, b.maxUid);
            });

  for (const auto& c : candidates)
    kernel(static_cast<std::size_t>(c.minIndex),
           static_cast<std::size_t>(c.maxIndex));
}

}  // namespace granule::kernels
