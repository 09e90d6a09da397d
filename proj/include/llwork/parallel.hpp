// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <functional>

namespace llwork {

/// Number of worker threads used by parallel_for.  Defaults to 1.
void set_thread_count(int n);
int thread_count();

/// Runs body(i) for i in [0, n).  Each index is visited exactly once; callers
/// write results into index-owned slots so the outcome does not depend on
/// scheduling.  The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace llwork
