// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <ostream>
#include <vector>

#include "granule/core/types.hpp"
#include "granule/transport/mailbox.hpp"

namespace granule::app {

struct SnapshotRow {
  Uid uid = 0;
  Vec3 position = Vec3::Zero();
  Vec3 velocity = Vec3::Zero();
};

/// Trajectory CSV. One row per owned particle per written step, sorted by
/// uid, ghosts excluded; reals carry 17 significant digits so the file is an
/// exact record of the state.
void writeSnapshotHeader(std::ostream& out);
void writeSnapshotRows(std::ostream& out, long step,
                       std::vector<SnapshotRow> rows);

/// Minimal legacy-VTK point cloud for visual inspection (one file per step).
void writeVtkPoints(const std::filesystem::path& path, long step,
                    const std::vector<SnapshotRow>& rows);

struct MetricsRow {
  long step = 0;
  Vec3 momentum = Vec3::Zero();
  double kineticEnergy = 0.0;
  transport::TransferStats::Snapshot traffic;  // this step's deltas
};

void writeMetricsHeader(std::ostream& out);
void writeMetricsRow(std::ostream& out, const MetricsRow& row);

}  // namespace granule::app
