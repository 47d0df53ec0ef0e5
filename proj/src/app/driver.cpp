// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/app/driver.hpp"

#include <algorithm>
#include <atomic>
#include <barrier>
#include <cmath>
#include <exception>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>

#include "granule/app/output.hpp"
#include "granule/core/error.hpp"
#include "granule/kernels/kernels.hpp"
#include "granule/kernels/linked_cells.hpp"
#include "granule/schema/schema.hpp"
#include "granule/sync/sync.hpp"

namespace granule::app {

namespace {

std::string readFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::unique_ptr<domain::DomainDecomposition> buildDomain(const SimConfig& config) {
  const domain::AABB& box = config.globalBox;
  switch (config.partitioning.kind) {
    case PartitionSpec::Kind::Single:
      return domain::makeSingleDomain(box);
    case PartitionSpec::Kind::BlockGrid:
      return domain::makeBlockGrid(box, config.partitioning.nx,
                                   config.partitioning.ny,
                                   config.partitioning.nz);
    case PartitionSpec::Kind::Shells: {
      const Vec3 center = box.center();
      // Every point of the global box must fall inside the outermost shell,
      // otherwise particles near a corner would be unowned from the start.
      double cornerSq = 0.0;
      for (int axis = 0; axis < 3; ++axis) {
        const double half = 0.5 * (box.max[axis] - box.min[axis]);
        cornerSq += half * half;
      }
      if (!(std::sqrt(cornerSq) < config.partitioning.shellRadii.back()))
        throw ConfigError(
            "outermost shell radius must exceed the half-diagonal of the box");
      return domain::makeSphericalShells(center, config.partitioning.shellRadii);
    }
  }
  throw ConfigError("unknown partitioning");
}

// The synchronization precondition: an inflated bounding box on this rank
// may reach neighbor ranks only.
void checkRadiusBound(const SimConfig& config, double maxRadius) {
  if (maxRadius <= 0.0) return;
  switch (config.partitioning.kind) {
    case PartitionSpec::Kind::Single:
      return;
    case PartitionSpec::Kind::BlockGrid: {
      const Vec3 extent = config.globalBox.extent();
      const double minCell =
          std::min({extent.x() / config.partitioning.nx,
                    extent.y() / config.partitioning.ny,
                    extent.z() / config.partitioning.nz});
      if (2.0 * maxRadius > minCell)
        throw ConfigError("interaction radius too large for the block grid: "
                          "2*r must not exceed the smallest cell extent");
      return;
    }
    case PartitionSpec::Kind::Shells: {
      const auto& radii = config.partitioning.shellRadii;
      double minThickness = radii.front();
      for (std::size_t i = 1; i < radii.size(); ++i)
        minThickness = std::min(minThickness, radii[i] - radii[i - 1]);
      if (maxRadius > 0.5 * minThickness)
        throw ConfigError("interaction radius too large for the shells: "
                          "r must not exceed half the smallest shell thickness");
      return;
    }
  }
}

void createParentDirs(const std::string& file) {
  const auto parent = std::filesystem::path(file).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
}

std::filesystem::path vtkPath(const std::string& snapshotPath, long step) {
  std::filesystem::path p(snapshotPath);
  char suffix[32];
  std::snprintf(suffix, sizeof(suffix), "_%06ld.vtk", step);
  return p.parent_path() / (p.stem().string() + suffix);
}

}  // namespace

/// Worker thread per rank, kept alive across phases. A phase hands the same
/// callable to every rank; the coordinator and all workers meet at a barrier
/// on entry and again on exit, so the workers never observe a half-set
/// phase and the coordinator never reads half-finished stores.
class Simulation::RankPool {
 public:
  explicit RankPool(Rank n)
      : barrier_(n + 1), errors_(static_cast<std::size_t>(n)) {
    threads_.reserve(static_cast<std::size_t>(n));
    for (Rank rank = 0; rank < n; ++rank)
      threads_.emplace_back([this, rank] { work(rank); });
  }

  ~RankPool() {
    stopping_ = true;
    barrier_.arrive_and_wait();  // release workers into the stop check
  }

  void runPhase(const std::function<void(Rank)>& phase) {
    phase_ = &phase;
    barrier_.arrive_and_wait();  // start
    barrier_.arrive_and_wait();  // finish
    phase_ = nullptr;
    for (auto& error : errors_)
      if (error) std::rethrow_exception(std::exchange(error, nullptr));
  }

 private:
  void work(Rank rank) {
    while (true) {
      barrier_.arrive_and_wait();
      if (stopping_) return;
      try {
        (*phase_)(rank);
      } catch (...) {
        errors_[static_cast<std::size_t>(rank)] = std::current_exception();
      }
      barrier_.arrive_and_wait();
    }
  }

  std::barrier<> barrier_;
  std::atomic<bool> stopping_ = false;
  const std::function<void(Rank)>* phase_ = nullptr;
  std::vector<std::exception_ptr> errors_;
  std::vector<std::jthread> threads_;
};

Simulation::Simulation(SimConfig config)
    : config_(std::move(config)),
      domain_(buildDomain(config_)),
      mailbox_(domain_->numRanks()) {
  // The compiled-in store must match the configured schema exactly.
  const ParticleSchema fileSchema = parseSchema(readFile(config_.schemaPath));
  if (serializeSchema(fileSchema) != gen::ParticleStore::kSchemaText)
    throw ConfigError(
        "schema file " + config_.schemaPath +
        " does not match the schema compiled into this executable");

  config_.kernelParams().validate();

  const std::vector<ParticleInit> particles = buildScenario(config_);
  double maxRadius = 0.0;
  for (const auto& p : particles) maxRadius = std::max(maxRadius, p.radius);
  checkRadiusBound(config_, maxRadius);
  cellSize_ = 2.0 * maxRadius;

  stores_.resize(static_cast<std::size_t>(domain_->numRanks()));
  for (const auto& p : particles) {
    const auto owner = domain_->ownerOfPoint(p.position);
    if (!owner)
      throw ConfigError("scenario particle " + std::to_string(p.uid) +
                        " starts outside the global domain");
    gen::ParticleStore& store = stores_[static_cast<std::size_t>(*owner)];
    const std::size_t i = store.createParticle(p.uid, *owner, /*ghost=*/false);
    store.setPosition(i, p.position);
    store.setLinearVelocity(i, p.velocity);
    store.setInteractionRadius(i, p.radius);
    store.setInvMass(i, p.invMass);
  }
}

Simulation::~Simulation() = default;

void Simulation::forEachRankDo(bool threaded,
                               const std::function<void(Rank)>& fn) {
  const Rank n = numRanks();
  if (!threaded || n == 1) {
    for (Rank rank = 0; rank < n; ++rank) fn(rank);
    return;
  }
  if (!pool_) pool_ = std::make_unique<RankPool>(n);
  pool_->runPhase(fn);
}

void Simulation::moveAndSync(bool threaded) {
  const kernels::KernelParams params = config_.kernelParams();

  if (config_.integrator == Integrator::VelocityVerlet) {
    forEachRankDo(threaded, [&](Rank rank) {
      gen::ParticleStore& store = stores_[static_cast<std::size_t>(rank)];
      gen::ParticleAccessor accessor(store);
      for (std::size_t i = 0; i < store.size(); ++i)
        if (!store.isGhost(i))
          kernels::velocityVerletPre(i, accessor, params.dt);
    });
  }

  forEachRankDo(threaded, [&](Rank rank) {
    sync::sendPhase(stores_[static_cast<std::size_t>(rank)], *domain_,
                    mailbox_, rank);
  });
  mailbox_.exchange();
  forEachRankDo(threaded, [&](Rank rank) {
    sync::receivePhase(stores_[static_cast<std::size_t>(rank)], mailbox_, rank);
  });
}

int Simulation::run(const RunOptions& options) {
  createParentDirs(config_.snapshotPath);
  std::ofstream snapshot(config_.snapshotPath, std::ios::binary | std::ios::trunc);
  if (!snapshot)
    throw ConfigError("cannot open " + config_.snapshotPath + " for writing");
  writeSnapshotHeader(snapshot);

  std::ofstream metrics;
  if (!config_.metricsPath.empty()) {
    createParentDirs(config_.metricsPath);
    metrics.open(config_.metricsPath, std::ios::binary | std::ios::trunc);
    if (!metrics)
      throw ConfigError("cannot open " + config_.metricsPath + " for writing");
    writeMetricsHeader(metrics);
  }

  const kernels::KernelParams params = config_.kernelParams();

  const auto writeOutputs = [&](long step, bool snapshotDue) {
    std::vector<SnapshotRow> rows = gatherOwnedRows();
    if (snapshotDue) {
      if (options.vtk) {
        auto sorted = rows;
        std::sort(sorted.begin(), sorted.end(),
                  [](const SnapshotRow& a, const SnapshotRow& b) {
                    return a.uid < b.uid;
                  });
        writeVtkPoints(vtkPath(config_.snapshotPath, step), step, sorted);
      }
      writeSnapshotRows(snapshot, step, rows);
    }
    if (metrics.is_open()) {
      // momentum and kinetic energy over owned movable particles, summed in
      // uid order so the numbers are partition-independent
      std::vector<std::pair<Uid, std::pair<Vec3, double>>> terms;
      for (const auto& store : stores_) {
        for (std::size_t i = 0; i < store.size(); ++i) {
          if (store.isGhost(i)) continue;
          const double invMass = store.getInvMass(i);
          if (invMass <= 0.0) continue;
          const double mass = 1.0 / invMass;
          const Vec3 v = store.getLinearVelocity(i);
          terms.push_back({store.uid(i), {mass * v, 0.5 * mass * v.squaredNorm()}});
        }
      }
      std::sort(terms.begin(), terms.end(),
                [](const auto& a, const auto& b) { return a.first < b.first; });
      MetricsRow row;
      row.step = step;
      for (const auto& [uid, t] : terms) {
        row.momentum += t.first;
        row.kineticEnergy += t.second;
      }
      row.traffic = mailbox_.stats().snapshot() - lastStats_;
      lastStats_ = mailbox_.stats().snapshot();
      writeMetricsRow(metrics, row);
    }
  };

  writeOutputs(0, /*snapshotDue=*/true);

  for (long step = 1; step <= config_.steps; ++step) {
    moveAndSync(options.threaded);

    if (options.check) {
      const auto report = sync::globalConsistencyCheck(
          std::span<const gen::ParticleStore>(stores_), *domain_);
      if (!report.ok()) {
        std::cerr << "consistency check failed at step " << step << ":\n";
        for (const auto& violation : report.violations)
          std::cerr << "  " << violation << '\n';
        return kExitCheckFailed;
      }
    }

    forEachRankDo(options.threaded, [&](Rank rank) {
      gen::ParticleStore& store = stores_[static_cast<std::size_t>(rank)];
      gen::ParticleAccessor accessor(store);
      for (std::size_t i = 0; i < store.size(); ++i) {
        if (store.isGhost(i)) continue;
        kernels::applyGravity(i, accessor, params.gravity);
        kernels::wallBox(i, accessor, config_.globalBox, params.kn);
      }
      if (cellSize_ > 0.0)
        kernels::forEachPair(store, cellSize_, [&](std::size_t i, std::size_t j) {
          kernels::springDashpot(i, j, accessor, params.kn, params.gammaN);
        });
    });

    forEachRankDo(options.threaded, [&](Rank rank) {
      gen::ParticleStore& store = stores_[static_cast<std::size_t>(rank)];
      gen::ParticleAccessor accessor(store);
      for (std::size_t i = 0; i < store.size(); ++i) {
        if (store.isGhost(i)) continue;
        if (config_.integrator == Integrator::VelocityVerlet)
          kernels::velocityVerletPost(i, accessor, params.dt);
        else
          kernels::explicitEuler(i, accessor, params.dt);
      }
    });

    writeOutputs(step, step % config_.outputInterval == 0);
  }

  return kExitOk;
}

std::vector<SnapshotRow> Simulation::gatherOwnedRows() const {
  std::vector<SnapshotRow> rows;
  for (const auto& store : stores_) {
    for (std::size_t i = 0; i < store.size(); ++i) {
      if (store.isGhost(i)) continue;
      SnapshotRow row;
      row.uid = store.uid(i);
      row.position = store.getPosition(i);
      row.velocity = store.getLinearVelocity(i);
      rows.push_back(row);
    }
  }
  return rows;
}

int runSimulation(const SimConfig& config, const RunOptions& options) {
  Simulation simulation(config);
  return simulation.run(options);
}

}  // namespace granule::app
