// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdio>
#include <string>

#include "granule/core/types.hpp"

namespace granule {

/// Formats a 64-bit real with 17 significant digits, enough for an exact
/// parse round-trip. All text output (schema serialization, CSV, generated
/// code) goes through this so the formats agree.
inline std::string formatReal(double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

/// Vec3 literal in the `(a,b,c)` form shared by schema and config files.
inline std::string formatVec3(const Vec3& v) {
  return "(" + formatReal(v.x()) + "," + formatReal(v.y()) + "," +
         formatReal(v.z()) + ")";
}

}  // namespace granule
