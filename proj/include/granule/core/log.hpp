// SPDX-FileCopyrightText: The granule authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string_view>

namespace granule {

/// Records a noteworthy runtime event (particle left the domain, degenerate
/// contact geometry, ...). Goes to stderr; events are informational and never
/// abort the run.
void logEvent(std::string_view message);

}  // namespace granule
