// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/app/output.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include "granule/core/error.hpp"
#include "granule/core/format.hpp"

namespace granule::app {

void writeSnapshotHeader(std::ostream& out) {
  out << "step,uid,x,y,z,vx,vy,vz\n";
}

void writeSnapshotRows(std::ostream& out, long step,
                       std::vector<SnapshotRow> rows) {
  std::sort(rows.begin(), rows.end(),
            [](const SnapshotRow& a, const SnapshotRow& b) { return a.uid < b.uid; });
  for (const auto& row : rows) {
    out << step << ',' << row.uid << ',' << formatReal(row.position.x()) << ','
        << formatReal(row.position.y()) << ',' << formatReal(row.position.z())
        << ',' << formatReal(row.velocity.x()) << ','
        << formatReal(row.velocity.y()) << ',' << formatReal(row.velocity.z())
        << '\n';
  }
}

void writeVtkPoints(const std::filesystem::path& path, long step,
                    const std::vector<SnapshotRow>& rows) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "# vtk DataFile Version 3.0\n"
      << "granule particles, step " << step << "\n"
      << "ASCII\n"
      << "DATASET POLYDATA\n"
      << "POINTS " << rows.size() << " double\n";
  for (const auto& row : rows)
    out << formatReal(row.position.x()) << ' ' << formatReal(row.position.y())
        << ' ' << formatReal(row.position.z()) << '\n';
}

void writeMetricsHeader(std::ostream& out) {
  out << "step,px,py,pz,kinetic_energy";
  for (std::size_t k = 0; k < transport::kNumMessageKinds; ++k) {
    std::string name{transport::kindName(static_cast<transport::MessageKind>(k))};
    std::transform(name.begin(), name.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    out << ',' << name << "_msgs," << name << "_bytes";
  }
  out << '\n';
}

void writeMetricsRow(std::ostream& out, const MetricsRow& row) {
  out << row.step << ',' << formatReal(row.momentum.x()) << ','
      << formatReal(row.momentum.y()) << ',' << formatReal(row.momentum.z())
      << ',' << formatReal(row.kineticEnergy);
  for (std::size_t k = 0; k < transport::kNumMessageKinds; ++k)
    out << ',' << row.traffic.messages[k] << ',' << row.traffic.bytes[k];
  out << '\n';
}

}  // namespace granule::app
