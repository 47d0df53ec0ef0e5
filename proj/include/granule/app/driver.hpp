// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "granule/app/config.hpp"
#include "granule/app/output.hpp"
#include "granule/app/scenario.hpp"
#include "granule/domain/domain.hpp"
#include "granule/transport/mailbox.hpp"
#include "sim/particle_store.hpp"

namespace granule::app {

struct RunOptions {
  bool check = false;     ///< run the global consistency check every step
  bool vtk = false;       ///< write legacy-VTK point files per snapshot
  bool threaded = false;  ///< one thread per rank, barrier at the exchange
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitCheckFailed = 3;

/// Owns domain, per-rank stores and the transport, and executes the
/// canonical timestep loop:
///
///   1. velocity-Verlet position half (or nothing for Euler)
///   2. ghost synchronization / migration  [consistency check with --check]
///   3. gravity + wall + pair forces
///   4. velocity-Verlet velocity half (or explicit Euler step)
///   5. snapshot / metrics output
///
/// Positions move only in steps 1 and 4, immediately before a sync, so
/// forces always see post-move ghost positions.
class Simulation {
 public:
  /// Validates the config against the compiled-in particle schema, builds
  /// the domain, distributes the scenario particles onto the owning ranks.
  explicit Simulation(SimConfig config);
  ~Simulation();

  /// Runs the configured number of steps and writes the output files.
  /// Returns kExitOk, or kExitCheckFailed when --check found violations.
  int run(const RunOptions& options = {});

  const std::vector<gen::ParticleStore>& stores() const { return stores_; }
  const transport::Mailbox& mailbox() const { return mailbox_; }
  const domain::DomainDecomposition& domain() const { return *domain_; }
  Rank numRanks() const { return mailbox_.numRanks(); }

 private:
  class RankPool;  // persistent per-rank worker threads, barrier per phase

  void moveAndSync(bool threaded);
  void forEachRankDo(bool threaded, const std::function<void(Rank)>& fn);
  std::vector<SnapshotRow> gatherOwnedRows() const;

  SimConfig config_;
  std::unique_ptr<domain::DomainDecomposition> domain_;
  std::vector<gen::ParticleStore> stores_;
  transport::Mailbox mailbox_;
  double cellSize_ = 0.0;
  transport::TransferStats::Snapshot lastStats_;
  std::unique_ptr<RankPool> pool_;
};

/// Convenience wrapper used by the CLI: setup + run.
int runSimulation(const SimConfig& config, const RunOptions& options);

}  // namespace granule::app
