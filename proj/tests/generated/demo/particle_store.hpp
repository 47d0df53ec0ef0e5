// Generated by the granule code generator. Do not edit.
//
// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "granule/core/error.hpp"
#include "granule/core/types.hpp"
#include "granule/schema/schema.hpp"
#include "granule/storage/store_base.hpp"
#include "granule/storage/wire_buffer.hpp"

namespace granule::gen_demo {

using granule::Rank;
using granule::SyncContext;
using granule::Uid;
using granule::Vec3;
using granule::storage::WireBuffer;

/// Struct-of-arrays particle container generated from the property schema
/// below: one contiguous array per property. Metadata, uid indexing and
/// dense create/remove come from StoreBase.
class ParticleStore : public granule::storage::StoreBase<ParticleStore> {
  friend granule::storage::StoreBase<ParticleStore>;

 public:
  /// The schema this store was generated from, in canonical form.
  static constexpr std::string_view kSchemaText =
      R"granule_schema(property position : vec3 = (0,0,0) sync ALWAYS
property interactionRadius : real64 = 0 sync COPY
property force : vec3 = (0,0,0) sync NEVER
)granule_schema";

  const Vec3& getPosition(std::size_t i) const {
    checkIndex(i);
    return position_[i];
  }
  void setPosition(std::size_t i, const Vec3& v) {
    checkIndex(i);
    position_[i] = v;
  }

  double getInteractionRadius(std::size_t i) const {
    checkIndex(i);
    return interactionRadius_[i];
  }
  void setInteractionRadius(std::size_t i, double v) {
    checkIndex(i);
    interactionRadius_[i] = v;
  }

  const Vec3& getForce(std::size_t i) const {
    checkIndex(i);
    return force_[i];
  }
  void setForce(std::size_t i, const Vec3& v) {
    checkIndex(i);
    force_[i] = v;
  }

  /// Appends the header (uid: 8 bytes, owner rank: 4 bytes) and the
  /// properties belonging to `ctx`, in declaration order.
  void pack(std::size_t i, SyncContext ctx, WireBuffer& out) const {
    checkIndex(i);
    out.writeUint64(uid(i));
    out.writeInt32(ownerRank(i));
    switch (ctx) {
      case SyncContext::GhostCreate:
        out.writeVec3(position_[i]);
        out.writeReal64(interactionRadius_[i]);
        break;
      case SyncContext::GhostUpdate:
        out.writeVec3(position_[i]);
        break;
      case SyncContext::MigrationTransfer:
        out.writeVec3(position_[i]);
        out.writeReal64(interactionRadius_[i]);
        break;
    }
  }

  /// Applies a record produced by pack() with the same schema and context.
  /// GhostCreate creates a ghost (or overwrites an existing particle),
  /// untransmitted properties reset to their defaults. GhostUpdate requires
  /// the uid to exist and overwrites the ALWAYS properties only.
  /// MigrationTransfer creates or overwrites with every non-NEVER property;
  /// promotion to owned is the caller's concern. Returns the local index.
  std::size_t unpackApply(SyncContext ctx, WireBuffer& in) {
    const Uid u = in.readUint64();
    const Rank owner = in.readInt32();
    switch (ctx) {
      case SyncContext::GhostCreate: {
        std::size_t i = 0;
        if (const auto existing = findByUid(u)) {
          i = *existing;
          setOwnerRank(i, owner);
          setIsGhost(i, true);
          ghostHolders(i).clear();
          resetToDefaults(i);
        } else {
          i = createParticle(u, owner, /*ghost=*/true);
        }
        position_[i] = in.readVec3();
        interactionRadius_[i] = in.readReal64();
        return i;
      }
      case SyncContext::GhostUpdate: {
        const auto existing = findByUid(u);
        if (!existing)
          throw granule::ProtocolError("ghost update for unknown uid " +
                                       std::to_string(u));
        const std::size_t i = *existing;
        position_[i] = in.readVec3();
        return i;
      }
      case SyncContext::MigrationTransfer: {
        std::size_t i = 0;
        if (const auto existing = findByUid(u)) {
          i = *existing;
          setOwnerRank(i, owner);
          resetToDefaults(i);
        } else {
          i = createParticle(u, owner, /*ghost=*/true);
        }
        position_[i] = in.readVec3();
        interactionRadius_[i] = in.readReal64();
        return i;
      }
    }
    throw granule::ProtocolError("unknown sync context");
  }

 private:
  void resetToDefaults(std::size_t i) {
    position_[i] = Vec3(0, 0, 0);
    interactionRadius_[i] = 0;
    force_[i] = Vec3(0, 0, 0);
  }

  void propertyPushDefaults() {
    position_.push_back(Vec3(0, 0, 0));
    interactionRadius_.push_back(0);
    force_.push_back(Vec3(0, 0, 0));
  }

  void propertyMoveFromLast(std::size_t i) {
    position_[i] = position_.back();
    interactionRadius_[i] = interactionRadius_.back();
    force_[i] = force_.back();
  }

  void propertyPopBack() {
    position_.pop_back();
    interactionRadius_.pop_back();
    force_.pop_back();
  }

  std::vector<Vec3> position_;
  std::vector<double> interactionRadius_;
  std::vector<Vec3> force_;
};

/// Default accessor: forwards kernel property access straight to the store.
class ParticleAccessor {
 public:
  explicit ParticleAccessor(ParticleStore& store) : store_(&store) {}

  std::size_t size() const { return store_->size(); }

  const Vec3& getPosition(std::size_t i) const {
    return store_->getPosition(i);
  }
  void setPosition(std::size_t i, const Vec3& v) {
    store_->setPosition(i, v);
  }

  double getInteractionRadius(std::size_t i) const {
    return store_->getInteractionRadius(i);
  }
  void setInteractionRadius(std::size_t i, double v) {
    store_->setInteractionRadius(i, v);
  }

  const Vec3& getForce(std::size_t i) const {
    return store_->getForce(i);
  }
  void setForce(std::size_t i, const Vec3& v) {
    store_->setForce(i, v);
  }

 private:
  ParticleStore* store_;
};

}  // namespace granule::gen_demo
