// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#include "granule/core/log.hpp"

#include <iostream>
#include <mutex>

namespace granule {

namespace {
std::mutex logMutex;
}

void logEvent(std::string_view message) {
  std::lock_guard lock(logMutex);
  std::cerr << "[granule] " << message << '\n';
}

}  // namespace granule
