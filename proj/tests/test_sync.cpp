// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <random>

#include "demo/particle_store.hpp"
#include "granule/domain/domain.hpp"
#include "granule/sync/sync.hpp"
#include "granule/transport/mailbox.hpp"

using namespace granule;
using domain::AABB;
using transport::MessageKind;
using Store = gen_demo::ParticleStore;

namespace {

// A miniature world: one store per rank over one domain and one mailbox.
struct World {
  explicit World(std::unique_ptr<domain::DomainDecomposition> dom)
      : domain(std::move(dom)),
        stores(static_cast<std::size_t>(domain->numRanks())),
        mailbox(domain->numRanks()) {}

  void addParticle(Uid uid, const Vec3& position, double radius) {
    const auto owner = domain->ownerOfPoint(position);
    REQUIRE(owner.has_value());
    Store& store = stores[static_cast<std::size_t>(*owner)];
    const std::size_t i = store.createParticle(uid, *owner, false);
    store.setPosition(i, position);
    store.setInteractionRadius(i, radius);
  }

  void sync() { sync::syncNextNeighbors(std::span(stores), *domain, mailbox); }

  sync::ConsistencyReport check() const {
    return sync::globalConsistencyCheck(std::span<const Store>(stores), *domain);
  }

  // Moves an owned particle (wherever it lives) to a new position.
  void move(Uid uid, const Vec3& position) {
    for (auto& store : stores) {
      const auto index = store.findByUid(uid);
      if (index && !store.isGhost(*index)) {
        store.setPosition(*index, position);
        return;
      }
    }
    FAIL("uid not owned anywhere");
  }

  Rank ownerOf(Uid uid) const {
    for (Rank r = 0; r < static_cast<Rank>(stores.size()); ++r) {
      const auto index = stores[static_cast<std::size_t>(r)].findByUid(uid);
      if (index && !stores[static_cast<std::size_t>(r)].isGhost(*index))
        return r;
    }
    return kInvalidRank;
  }

  std::size_t ownedCount() const {
    std::size_t count = 0;
    for (const auto& store : stores)
      for (std::size_t i = 0; i < store.size(); ++i)
        if (!store.isGhost(i)) ++count;
    return count;
  }

  std::unique_ptr<domain::DomainDecomposition> domain;
  std::vector<Store> stores;
  transport::Mailbox mailbox;
};

World twoBlockWorld() {
  return World(domain::makeBlockGrid(AABB({0, 0, 0}, {2, 1, 1}), 2, 1, 1));
}

}  // namespace

TEST_CASE("boundary particle: one create on first sync, one update on second") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);

  world.sync();
  auto stats = world.mailbox.stats().snapshot();
  CHECK(stats.messagesFor(MessageKind::GhostCreate) == 1);
  CHECK(stats.bytesFor(MessageKind::GhostCreate) == 44);
  CHECK(stats.messagesFor(MessageKind::GhostUpdate) == 0);

  REQUIRE(world.stores[1].size() == 1);
  CHECK(world.stores[1].isGhost(0));
  CHECK(world.stores[1].getPosition(0) == Vec3(0.99, 0.5, 0.5));
  CHECK(world.stores[0].ghostHolders(0) == std::set<Rank>{1});
  CHECK(world.check().ok());

  world.sync();  // nothing moved
  stats = world.mailbox.stats().snapshot();
  CHECK(stats.messagesFor(MessageKind::GhostCreate) == 1);  // unchanged
  CHECK(stats.messagesFor(MessageKind::GhostUpdate) == 1);
  CHECK(stats.bytesFor(MessageKind::GhostUpdate) == 36);
  CHECK(world.check().ok());
}

TEST_CASE("strictly interior particles produce zero messages") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.5, 0.5, 0.5), 0.05);
  world.sync();
  const auto stats = world.mailbox.stats().snapshot();
  for (std::size_t k = 0; k < transport::kNumMessageKinds; ++k) {
    CHECK(stats.messages[k] == 0);
    CHECK(stats.bytes[k] == 0);
  }
  CHECK(world.stores[1].empty());
  CHECK(world.check().ok());
}

TEST_CASE("ghost is removed when the particle retreats from the boundary") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();
  REQUIRE(world.stores[1].size() == 1);

  world.move(1, Vec3(0.5, 0.5, 0.5));
  world.sync();
  CHECK(world.mailbox.stats().snapshot().messagesFor(MessageKind::GhostRemove) ==
        1);
  CHECK(world.stores[1].empty());
  CHECK(world.stores[0].ghostHolders(0).empty());
  CHECK(world.check().ok());
}

TEST_CASE("center crossing migrates ownership exactly once") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();
  CHECK(world.ownerOf(1) == 0);

  world.move(1, Vec3(1.01, 0.5, 0.5));
  world.sync();

  const auto stats = world.mailbox.stats().snapshot();
  CHECK(stats.messagesFor(MessageKind::Migrate) == 1);
  CHECK(world.ownerOf(1) == 1);
  CHECK(world.ownedCount() == 1);
  // the old owner keeps a ghost: the inflated box still reaches rank 0
  REQUIRE(world.stores[0].size() == 1);
  CHECK(world.stores[0].isGhost(0));
  CHECK(world.stores[0].ownerRank(0) == 1);
  // position survives the transfer bitwise
  const auto newIndex = world.stores[1].findByUid(1);
  REQUIRE(newIndex.has_value());
  CHECK(world.stores[1].getPosition(*newIndex) == Vec3(1.01, 0.5, 0.5));
  CHECK(world.stores[1].ghostHolders(*newIndex) == std::set<Rank>{0});
  CHECK(world.check().ok());

  // moving deeper strips the leftover ghost without further migration
  world.move(1, Vec3(1.7, 0.5, 0.5));
  world.sync();
  CHECK(world.mailbox.stats().snapshot().messagesFor(MessageKind::Migrate) == 1);
  CHECK(world.stores[0].empty());
  CHECK(world.check().ok());
}

TEST_CASE("migration far from the boundary leaves no ghost behind") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();

  // jump across and beyond rank 0's reach in one step
  world.move(1, Vec3(1.2, 0.5, 0.5));
  world.sync();
  CHECK(world.ownerOf(1) == 1);
  CHECK(world.stores[0].empty());
  CHECK(world.check().ok());
}

TEST_CASE("a particle leaving the global domain is removed everywhere") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(1.01, 0.5, 0.5), 0.05);  // owned by rank 1
  world.sync();
  REQUIRE(world.stores[0].size() == 1);  // ghost on rank 0

  world.move(1, Vec3(2.5, 0.5, 0.5));
  world.sync();
  CHECK(world.ownedCount() == 0);
  CHECK(world.stores[0].empty());
  CHECK(world.stores[1].empty());
  CHECK(world.mailbox.stats().snapshot().messagesFor(MessageKind::Migrate) == 0);
  CHECK(world.check().ok());
}

TEST_CASE("consistency check flags a corrupted ghost exactly once") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();
  REQUIRE(world.check().ok());

  world.stores[1].setPosition(0, Vec3(0.98, 0.5, 0.5));  // corrupt the ghost
  const auto report = world.check();
  CHECK(report.violations.size() == 1);
}

TEST_CASE("consistency check flags missing coverage and holder mismatch") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();

  // silently drop the ghost on rank 1
  world.stores[1].removeParticle(0);
  const auto report = world.check();
  CHECK_FALSE(report.ok());
}

TEST_CASE("re-syncing a static world sends updates only") {
  World world(domain::makeBlockGrid(AABB({0, 0, 0}, {2, 2, 1}), 2, 2, 1));
  std::mt19937_64 rng(5);
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (Uid uid = 0; uid < 60; ++uid)
    world.addParticle(uid, Vec3(uniform(0, 2), uniform(0, 2), uniform(0, 1)),
                      0.08);

  world.sync();
  const auto first = world.mailbox.stats().snapshot();
  world.sync();
  const auto delta = world.mailbox.stats().snapshot() - first;
  CHECK(delta.messagesFor(MessageKind::GhostCreate) == 0);
  CHECK(delta.messagesFor(MessageKind::GhostRemove) == 0);
  CHECK(delta.messagesFor(MessageKind::Migrate) == 0);
  CHECK(delta.messagesFor(MessageKind::GhostUpdate) ==
        first.messagesFor(MessageKind::GhostCreate));
  CHECK(world.check().ok());
}

// Byte accounting over a scripted run with no migrations: per property,
// COPY bytes = creations * width, ALWAYS = (creations + updates) * width,
// NEVER = 0, MIGRATION = 0.
TEST_CASE("sync-mode byte accounting matches the mode contract") {
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);  // permanently ghosted
  world.addParticle(2, Vec3(0.5, 0.5, 0.5), 0.05);   // never ghosted

  const int steps = 8;
  for (int s = 0; s < steps; ++s) world.sync();

  const auto stats = world.mailbox.stats().snapshot();
  const std::uint64_t creations = stats.messagesFor(MessageKind::GhostCreate);
  const std::uint64_t updates = stats.messagesFor(MessageKind::GhostUpdate);
  CHECK(creations == 1);
  CHECK(updates == static_cast<std::uint64_t>(steps - 1));

  // per-property attribution for the demo schema
  const std::uint64_t positionBytes = (creations + updates) * 24;  // ALWAYS
  const std::uint64_t radiusBytes = creations * 8;                 // COPY
  const std::uint64_t forceBytes = 0;                              // NEVER
  const std::uint64_t headerBytes = (creations + updates) * 12;
  CHECK(stats.bytesFor(MessageKind::GhostCreate) +
            stats.bytesFor(MessageKind::GhostUpdate) ==
        positionBytes + radiusBytes + forceBytes + headerBytes);
  CHECK(stats.bytesFor(MessageKind::Migrate) == 0);
}

TEST_CASE("the same sync code runs against all three partitionings") {
  // Substitutability: identical scripted motion, three domain implementations,
  // zero changes to the synchronization code.
  const auto script = [](World world) {
    world.addParticle(1, Vec3(0.95, 0.95, 0.5), 0.06);
    world.addParticle(2, Vec3(1.6, 1.0, 0.5), 0.06);
    for (int s = 0; s < 6; ++s) {
      world.sync();
      REQUIRE(world.check().ok());
      // drift to the right, crossing subdomain boundaries along the way
      for (const Uid uid : {Uid{1}, Uid{2}}) {
        for (auto& store : world.stores) {
          const auto index = store.findByUid(uid);
          if (index && !store.isGhost(*index))
            store.setPosition(*index,
                              store.getPosition(*index) + Vec3(0.05, 0, 0));
        }
      }
    }
    world.sync();
    REQUIRE(world.check().ok());
    return world.ownedCount();
  };

  const AABB box({0, 0, 0}, {2, 2, 1});
  CHECK(script(World(domain::makeSingleDomain(box))) == 2);
  CHECK(script(World(domain::makeBlockGrid(box, 2, 2, 1))) == 2);
  CHECK(script(World(domain::makeSphericalShells(Vec3(1, 1, 0.5), {0.8, 1.6, 3.0}))) ==
        2);
}

TEST_CASE("forged messages about unknown or owned uids are fatal") {
  const auto forge = [](transport::MessageKind kind,
                        const std::vector<std::uint8_t>& payload,
                        Store* receiverStore = nullptr) {
    World world = twoBlockWorld();
    if (receiverStore) world.stores[1] = *receiverStore;
    world.mailbox.send(0, 1, kind, payload);
    world.mailbox.exchange();
    return sync::receivePhase(world.stores[1], world.mailbox, Rank{1});
  };

  storage::WireBuffer removeUnknown;
  removeUnknown.writeUint64(99);
  CHECK_THROWS_AS(
      forge(MessageKind::GhostRemove, std::move(removeUnknown).takeBytes()),
      ProtocolError);

  storage::WireBuffer ownerChangeUnknown;
  ownerChangeUnknown.writeUint64(99);
  ownerChangeUnknown.writeInt32(0);
  CHECK_THROWS_AS(forge(MessageKind::OwnerChanged,
                        std::move(ownerChangeUnknown).takeBytes()),
                  ProtocolError);

  // a remove aimed at a locally owned particle is a protocol violation too
  Store owned;
  owned.createParticle(99, 1, false);
  storage::WireBuffer removeOwned;
  removeOwned.writeUint64(99);
  CHECK_THROWS_AS(forge(MessageKind::GhostRemove,
                        std::move(removeOwned).takeBytes(), &owned),
                  ProtocolError);

  // update for a uid nobody holds
  Store scratch;
  const std::size_t i = scratch.createParticle(42, 0, false);
  storage::WireBuffer update;
  scratch.pack(i, SyncContext::GhostUpdate, update);
  CHECK_THROWS_AS(
      forge(MessageKind::GhostUpdate, std::move(update).takeBytes()),
      ProtocolError);
}

TEST_CASE("a particle oscillating across a boundary stays coherent") {
  // Exercises the overwrite paths: migrate away, migrate back, repeatedly,
  // with the old owner keeping a ghost each time.
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();

  const Vec3 left(0.99, 0.5, 0.5);
  const Vec3 right(1.01, 0.5, 0.5);
  for (int round = 0; round < 4; ++round) {
    world.move(1, round % 2 == 0 ? right : left);
    world.sync();
    const auto report = world.check();
    for (const auto& violation : report.violations) MESSAGE(violation);
    REQUIRE(report.ok());
    CHECK(world.ownerOf(1) == (round % 2 == 0 ? 1 : 0));
    CHECK(world.ownedCount() == 1);
  }
  CHECK(world.mailbox.stats().snapshot().messagesFor(MessageKind::Migrate) == 4);
}

TEST_CASE("ghost update and migrate in one superstep apply in order") {
  // The owner sends GHOST_UPDATE (steps 2-4) and then MIGRATE (step 5) to
  // the same receiver within one superstep; the receive phase must apply the
  // update to the ghost before the promotion.
  World world = twoBlockWorld();
  world.addParticle(1, Vec3(0.99, 0.5, 0.5), 0.05);
  world.sync();  // ghost exists on rank 1

  world.move(1, Vec3(1.02, 0.5, 0.5));
  world.sync();
  const auto stats = world.mailbox.stats().snapshot();
  CHECK(stats.messagesFor(MessageKind::GhostUpdate) == 1);
  CHECK(stats.messagesFor(MessageKind::Migrate) == 1);
  CHECK(world.ownerOf(1) == 1);
  const auto index = world.stores[1].findByUid(1);
  REQUIRE(index.has_value());
  CHECK(world.stores[1].getPosition(*index) == Vec3(1.02, 0.5, 0.5));
  CHECK(world.check().ok());
}

TEST_CASE("randomized 10-step drift keeps the world coherent") {
  World world(domain::makeBlockGrid(AABB({0, 0, 0}, {2, 2, 1}), 2, 2, 1));
  std::mt19937_64 rng(99);
  const auto uniform = [&rng](double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
  };
  for (Uid uid = 0; uid < 100; ++uid)
    world.addParticle(
        uid, Vec3(uniform(0.1, 1.9), uniform(0.1, 1.9), uniform(0.1, 0.9)),
        0.05);

  for (int step = 0; step < 10; ++step) {
    world.sync();
    const auto report = world.check();
    for (const auto& violation : report.violations) MESSAGE(violation);
    REQUIRE(report.ok());
    for (auto& store : world.stores)
      for (std::size_t i = 0; i < store.size(); ++i) {
        if (store.isGhost(i)) continue;
        Vec3 moved = store.getPosition(i) + Vec3(uniform(-0.04, 0.04),
                                                 uniform(-0.04, 0.04),
                                                 uniform(-0.04, 0.04));
        // stay inside the global box so nobody gets dropped
        moved = moved.cwiseMax(Vec3(0.05, 0.05, 0.05))
                    .cwiseMin(Vec3(1.95, 1.95, 0.95));
        store.setPosition(i, moved);
      }
  }
  world.sync();
  CHECK(world.check().ok());
  CHECK(world.ownedCount() == 100);  // nobody escaped the box
}
