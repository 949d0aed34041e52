#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "herding/model.hpp"

namespace herding {

/// Worker count from HERDING_WORKERS when set and positive, otherwise the
/// hardware concurrency (at least 1).
unsigned default_worker_count();

/// Run body(0..count-1) on up to `workers` threads. Indices are handed out
/// dynamically; the first exception thrown by any body is rethrown here after
/// all workers have stopped.
void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body);

/// One realization: a fresh population and dynamics drawn from the
/// substreams (params.seed, index, purpose).
RealizationOutcome run_realization(const ModelParams& params, std::uint64_t index, std::uint64_t max_steps,
                                   std::optional<double> unstable_root = std::nullopt);

/// Realizations 0..n_realizations-1, merged by index. The result does not
/// depend on `workers`.
std::vector<RealizationOutcome> run_ensemble(const ModelParams& params, std::size_t n_realizations,
                                             std::uint64_t max_steps,
                                             std::optional<double> unstable_root = std::nullopt,
                                             unsigned workers = 1);

}  // namespace herding
