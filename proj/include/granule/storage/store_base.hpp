// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"

namespace granule::storage {

/// Schema-independent half of a struct-of-arrays particle store: per-particle
/// metadata (uid, owner rank, ghost flag, ghost-holder set), the uid -> index
/// map, and dense creation/removal. The generated store derives from this and
/// contributes one array per schema property via the property* hooks.
///
/// Invariants maintained here:
///   - every metadata array shares one length with the property arrays
///   - uidIndex[uid(i)] == i for all i, and no other entries
///   - uids are unique within a store
///
/// Removal swaps the last particle into the vacated slot to keep arrays
/// dense; the uid index is repaired on the swap.
///
/// A store belongs to exactly one simulated rank; there is no internal
/// locking (single-writer contract).
template <class Derived>
class StoreBase {
 public:
  std::size_t size() const { return uid_.size(); }
  bool empty() const { return uid_.empty(); }

  Uid uid(std::size_t i) const {
    checkIndex(i);
    return uid_[i];
  }

  Rank ownerRank(std::size_t i) const {
    checkIndex(i);
    return ownerRank_[i];
  }
  void setOwnerRank(std::size_t i, Rank rank) {
    checkIndex(i);
    ownerRank_[i] = rank;
  }

  bool isGhost(std::size_t i) const {
    checkIndex(i);
    return isGhost_[i] != 0;
  }
  void setIsGhost(std::size_t i, bool ghost) {
    checkIndex(i);
    isGhost_[i] = ghost ? 1 : 0;
  }

  /// Ranks currently holding a ghost copy; meaningful only while the
  /// particle is owned by this store's rank.
  std::set<Rank>& ghostHolders(std::size_t i) {
    checkIndex(i);
    return ghostHolders_[i];
  }
  const std::set<Rank>& ghostHolders(std::size_t i) const {
    checkIndex(i);
    return ghostHolders_[i];
  }

  std::optional<std::size_t> findByUid(Uid uid) const {
    const auto it = uidIndex_.find(uid);
    if (it == uidIndex_.end()) return std::nullopt;
    return it->second;
  }

  /// Appends a particle with all properties at their schema defaults.
  /// Throws StoreError when the uid is already present.
  std::size_t createParticle(Uid uid, Rank owner, bool ghost) {
    if (uidIndex_.count(uid) != 0)
      throw StoreError("duplicate uid " + std::to_string(uid));
    const std::size_t index = uid_.size();
    uid_.push_back(uid);
    ownerRank_.push_back(owner);
    isGhost_.push_back(ghost ? 1 : 0);
    ghostHolders_.emplace_back();
    uidIndex_.emplace(uid, index);
    derived().propertyPushDefaults();
    return index;
  }

  void removeParticle(std::size_t i) {
    checkIndex(i);
    const std::size_t last = uid_.size() - 1;
    uidIndex_.erase(uid_[i]);
    if (i != last) {
      uid_[i] = uid_[last];
      ownerRank_[i] = ownerRank_[last];
      isGhost_[i] = isGhost_[last];
      ghostHolders_[i] = std::move(ghostHolders_[last]);
      uidIndex_[uid_[i]] = i;
      derived().propertyMoveFromLast(i);
    }
    uid_.pop_back();
    ownerRank_.pop_back();
    isGhost_.pop_back();
    ghostHolders_.pop_back();
    derived().propertyPopBack();
  }

 protected:
  void checkIndex(std::size_t i) const {
    if (i >= uid_.size())
      throw std::out_of_range("particle index " + std::to_string(i) +
                              " out of range (size " +
                              std::to_string(uid_.size()) + ")");
  }

 private:
  Derived& derived() { return static_cast<Derived&>(*this); }

  std::vector<Uid> uid_;
  std::vector<Rank> ownerRank_;
  std::vector<std::uint8_t> isGhost_;
  std::vector<std::set<Rank>> ghostHolders_;
  std::unordered_map<Uid, std::size_t> uidIndex_;
};

}  // namespace granule::storage
