// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "granule/core/log.hpp"
#include "granule/core/types.hpp"
#include "granule/domain/domain.hpp"
#include "granule/schema/schema.hpp"
#include "granule/storage/wire_buffer.hpp"
#include "granule/transport/mailbox.hpp"

namespace granule::sync {

// Next-neighbor ghost synchronization and ownership migration, driven by the
// per-property sync modes baked into the generated store. The protocol is
// owner-driven push: the owner decides ghost creation, update and removal;
// holders never request anything. One exchange per superstep.
//
// Store is any generated particle store: the algorithm uses only the
// metadata surface of StoreBase, getPosition/getInteractionRadius, and the
// generated pack/unpackApply wire operations, so it is independent of the
// concrete property set and of the domain partitioning.

/// Send phase for one rank. Mutates only this rank's store; safe to run
/// concurrently across ranks.
///
/// Per owned particle, with S the neighbor ranks whose subdomain intersects
/// the particle's inflated bounding box:
///   - GHOST_CREATE to ranks newly in S, GHOST_UPDATE to ranks staying in S,
///     GHOST_REMOVE to ranks that left S (ghost-holder set updated in step)
///   - when the particle's center left this subdomain, a MIGRATE carrying the
///     full migration payload plus the ghost-holder set goes to the new
///     owner, OWNER_CHANGED to every remaining holder, and the local copy is
///     demoted to a ghost when this subdomain still intersects the inflated
///     box, removed otherwise
///   - a particle that left the global domain is removed (logged, not an
///     error); its holders get GHOST_REMOVE
template <class Store>
void sendPhase(Store& store, const domain::DomainDecomposition& domain,
               transport::Mailbox& mailbox, Rank rank) {
  std::size_t i = 0;
  while (i < store.size()) {
    if (store.isGhost(i)) {
      ++i;
      continue;
    }

    const Vec3 position = store.getPosition(i);
    const domain::AABB box =
        domain::inflatedBox(position, store.getInteractionRadius(i));
    const Uid uid = store.uid(i);

    std::set<Rank> overlapping;
    for (const Rank r : domain.neighborRanks(rank))
      if (domain.intersectsSubdomain(r, box)) overlapping.insert(r);

    std::set<Rank>& holders = store.ghostHolders(i);

    std::vector<Rank> newRanks;
    std::vector<Rank> keptRanks;
    std::vector<Rank> droppedRanks;
    std::set_difference(overlapping.begin(), overlapping.end(),
                        holders.begin(), holders.end(),
                        std::back_inserter(newRanks));
    std::set_intersection(overlapping.begin(), overlapping.end(),
                          holders.begin(), holders.end(),
                          std::back_inserter(keptRanks));
    std::set_difference(holders.begin(), holders.end(), overlapping.begin(),
                        overlapping.end(), std::back_inserter(droppedRanks));

    for (const Rank r : newRanks) {
      storage::WireBuffer buffer;
      store.pack(i, SyncContext::GhostCreate, buffer);
      mailbox.send(rank, r, transport::MessageKind::GhostCreate,
                   std::move(buffer).takeBytes());
      holders.insert(r);
    }
    for (const Rank r : keptRanks) {
      storage::WireBuffer buffer;
      store.pack(i, SyncContext::GhostUpdate, buffer);
      mailbox.send(rank, r, transport::MessageKind::GhostUpdate,
                   std::move(buffer).takeBytes());
    }
    for (const Rank r : droppedRanks) {
      storage::WireBuffer buffer;
      buffer.writeUint64(uid);
      mailbox.send(rank, r, transport::MessageKind::GhostRemove,
                   std::move(buffer).takeBytes());
      holders.erase(r);
    }

    if (domain.containsPoint(rank, position)) {
      ++i;
      continue;
    }

    // Ownership ends here: migrate or drop.
    const auto newOwner = domain.ownerOfPoint(position);
    if (!newOwner) {
      logEvent("particle " + std::to_string(uid) +
               " left the global domain; removed");
      for (const Rank r : holders) {
        storage::WireBuffer buffer;
        buffer.writeUint64(uid);
        mailbox.send(rank, r, transport::MessageKind::GhostRemove,
                     std::move(buffer).takeBytes());
      }
      store.removeParticle(i);
      continue;  // the swapped-in particle takes index i
    }

    const bool keepGhost = domain.intersectsSubdomain(rank, box);
    std::set<Rank> finalHolders = holders;
    if (keepGhost) finalHolders.insert(rank);
    finalHolders.erase(*newOwner);

    storage::WireBuffer buffer;
    store.pack(i, SyncContext::MigrationTransfer, buffer);
    buffer.writeUint32(static_cast<std::uint32_t>(finalHolders.size()));
    for (const Rank r : finalHolders) buffer.writeInt32(r);
    mailbox.send(rank, *newOwner, transport::MessageKind::Migrate,
                 std::move(buffer).takeBytes());

    for (const Rank r : finalHolders) {
      if (r == rank) continue;
      storage::WireBuffer notice;
      notice.writeUint64(uid);
      notice.writeInt32(*newOwner);
      mailbox.send(rank, r, transport::MessageKind::OwnerChanged,
                   std::move(notice).takeBytes());
    }

    if (keepGhost) {
      store.setIsGhost(i, true);
      store.setOwnerRank(i, *newOwner);
      store.ghostHolders(i).clear();
      ++i;
    } else {
      store.removeParticle(i);
    }
  }
}

/// Receive phase for one rank: applies this rank's inbox in delivery order,
/// ghost traffic first, MIGRATE promotions second (so an update can never
/// race ahead of the promotion it precedes).
template <class Store>
void receivePhase(Store& store, transport::Mailbox& mailbox, Rank rank) {
  const std::vector<transport::Envelope> inbox = mailbox.recv(rank);

  std::vector<const transport::Envelope*> migrations;
  for (const auto& envelope : inbox) {
    storage::WireBuffer buffer{std::vector<std::uint8_t>(envelope.payload)};
    switch (envelope.kind) {
      case transport::MessageKind::GhostCreate:
        store.unpackApply(SyncContext::GhostCreate, buffer);
        break;
      case transport::MessageKind::GhostUpdate:
        store.unpackApply(SyncContext::GhostUpdate, buffer);
        break;
      case transport::MessageKind::GhostRemove: {
        const Uid uid = buffer.readUint64();
        const auto index = store.findByUid(uid);
        if (!index || !store.isGhost(*index))
          throw ProtocolError("ghost remove for uid " + std::to_string(uid) +
                              " which is not a local ghost");
        store.removeParticle(*index);
        break;
      }
      case transport::MessageKind::OwnerChanged: {
        const Uid uid = buffer.readUint64();
        const Rank newOwner = buffer.readInt32();
        const auto index = store.findByUid(uid);
        if (!index || !store.isGhost(*index))
          throw ProtocolError("owner change for uid " + std::to_string(uid) +
                              " which is not a local ghost");
        store.setOwnerRank(*index, newOwner);
        break;
      }
      case transport::MessageKind::Migrate:
        migrations.push_back(&envelope);
        break;
    }
  }

  for (const auto* envelope : migrations) {
    storage::WireBuffer buffer{std::vector<std::uint8_t>(envelope->payload)};
    const std::size_t index =
        store.unpackApply(SyncContext::MigrationTransfer, buffer);
    std::set<Rank> holders;
    const std::uint32_t count = buffer.readUint32();
    for (std::uint32_t k = 0; k < count; ++k) holders.insert(buffer.readInt32());
    store.setIsGhost(index, false);
    store.setOwnerRank(index, rank);
    store.ghostHolders(index) = std::move(holders);
  }
}

/// One full synchronization superstep over all ranks, run sequentially:
/// send phases, one exchange, receive phases. The threaded driver calls the
/// phases itself.
template <class Store>
void syncNextNeighbors(std::span<Store> stores,
                       const domain::DomainDecomposition& domain,
                       transport::Mailbox& mailbox) {
  for (Rank rank = 0; rank < static_cast<Rank>(stores.size()); ++rank)
    sendPhase(stores[static_cast<std::size_t>(rank)], domain, mailbox, rank);
  mailbox.exchange();
  for (Rank rank = 0; rank < static_cast<Rank>(stores.size()); ++rank)
    receivePhase(stores[static_cast<std::size_t>(rank)], mailbox, rank);
}

struct ConsistencyReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Cross-rank invariant checker, intended between the exchange and the next
/// compute phase (positions must not have moved since the last sync):
///   - every uid is owned by exactly one rank, and owned rows carry their own
///     rank; ghost rows point at the true owner
///   - the owner's ghost-holder set equals the set of ranks actually holding
///     a ghost
///   - every neighbor rank whose subdomain intersects a particle's inflated
///     box holds a ghost whose ALWAYS properties match the owner bitwise
template <class Store>
ConsistencyReport globalConsistencyCheck(
    std::span<const Store> stores, const domain::DomainDecomposition& domain) {
  ConsistencyReport report;
  const auto complain = [&report](std::string message) {
    report.violations.push_back(std::move(message));
  };

  struct Owned {
    Rank rank;
    std::size_t index;
  };
  std::map<Uid, Owned> owners;
  std::map<Uid, std::set<Rank>> ghostsOf;

  for (Rank rank = 0; rank < static_cast<Rank>(stores.size()); ++rank) {
    const Store& store = stores[static_cast<std::size_t>(rank)];
    for (std::size_t i = 0; i < store.size(); ++i) {
      const Uid uid = store.uid(i);
      if (store.isGhost(i)) {
        ghostsOf[uid].insert(rank);
        if (store.ownerRank(i) == rank)
          complain("ghost " + std::to_string(uid) + " on rank " +
                   std::to_string(rank) + " claims local ownership");
      } else {
        if (store.ownerRank(i) != rank)
          complain("owned particle " + std::to_string(uid) + " on rank " +
                   std::to_string(rank) + " has ownerRank " +
                   std::to_string(store.ownerRank(i)));
        const auto [it, inserted] = owners.insert({uid, Owned{rank, i}});
        if (!inserted)
          complain("uid " + std::to_string(uid) + " owned by ranks " +
                   std::to_string(it->second.rank) + " and " +
                   std::to_string(rank));
      }
    }
  }

  // Ghost coherence against the owner's bookkeeping and data.
  for (Rank rank = 0; rank < static_cast<Rank>(stores.size()); ++rank) {
    const Store& store = stores[static_cast<std::size_t>(rank)];
    for (std::size_t i = 0; i < store.size(); ++i) {
      if (!store.isGhost(i)) continue;
      const Uid uid = store.uid(i);
      const auto it = owners.find(uid);
      if (it == owners.end()) {
        complain("ghost " + std::to_string(uid) + " on rank " +
                 std::to_string(rank) + " has no owner anywhere");
        continue;
      }
      if (store.ownerRank(i) != it->second.rank)
        complain("ghost " + std::to_string(uid) + " on rank " +
                 std::to_string(rank) + " points at rank " +
                 std::to_string(store.ownerRank(i)) + ", actual owner is " +
                 std::to_string(it->second.rank));
    }
  }

  for (const auto& [uid, owned] : owners) {
    const Store& store = stores[static_cast<std::size_t>(owned.rank)];
    const std::set<Rank>& recorded = store.ghostHolders(owned.index);
    const std::set<Rank>& actual = ghostsOf.count(uid) ? ghostsOf.at(uid)
                                                       : std::set<Rank>{};
    if (recorded != actual)
      complain("uid " + std::to_string(uid) + ": owner rank " +
               std::to_string(owned.rank) + " records " +
               std::to_string(recorded.size()) + " ghost holders, " +
               std::to_string(actual.size()) + " ranks hold a ghost");

    // Coverage and bitwise agreement of ALWAYS properties.
    const domain::AABB box = domain::inflatedBox(
        store.getPosition(owned.index),
        store.getInteractionRadius(owned.index));
    for (const Rank r : domain.neighborRanks(owned.rank)) {
      if (!domain.intersectsSubdomain(r, box)) continue;
      const Store& other = stores[static_cast<std::size_t>(r)];
      const auto index = other.findByUid(uid);
      if (!index || !other.isGhost(*index)) {
        complain("uid " + std::to_string(uid) + " should be ghosted on rank " +
                 std::to_string(r) + " but is not");
        continue;
      }
      storage::WireBuffer ownerBytes;
      storage::WireBuffer ghostBytes;
      store.pack(owned.index, SyncContext::GhostUpdate, ownerBytes);
      other.pack(*index, SyncContext::GhostUpdate, ghostBytes);
      if (ownerBytes.bytes() != ghostBytes.bytes())
        complain("uid " + std::to_string(uid) + ": ghost on rank " +
                 std::to_string(r) +
                 " disagrees with the owner's ALWAYS properties");
    }
  }

  return report;
}

}  // namespace granule::sync
