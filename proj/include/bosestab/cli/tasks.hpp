#pragma once

#include <functional>

#include "bosestab/cli/config.hpp"
#include "bosestab/cli/report.hpp"

namespace bosestab::cli {

// Runs the configured task. Per-point failures are recorded and the scan
// continues; configuration-level validation failures throw ValidationError.
Report run_task(const RunConfig& c);

// Calls fn(i) for i in [0, count) on up to `threads` workers.
void parallel_for(int count, int threads, const std::function<void(int)>& fn);

}  // namespace bosestab::cli
