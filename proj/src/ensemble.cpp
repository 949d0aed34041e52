#include "herding/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "herding/errors.hpp"

namespace herding {

unsigned default_worker_count() {
  if (const char* env = std::getenv("HERDING_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) return static_cast<unsigned>(value);
    } catch (const std::exception&) {
      // fall through to hardware concurrency
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t count, unsigned workers, const std::function<void(std::size_t)>& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        failed.store(true, std::memory_order_relaxed);
      }
    }
  };

  const auto n_threads = static_cast<unsigned>(std::min<std::size_t>(workers, count));
  std::vector<std::jthread> pool;
  pool.reserve(n_threads);
  for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

RealizationOutcome run_realization(const ModelParams& params, std::uint64_t index, std::uint64_t max_steps,
                                   std::optional<double> unstable_root) {
  auto population_rng = CounterRng::substream(params.seed, index, StreamPurpose::Population);
  auto dynamics_rng = CounterRng::substream(params.seed, index, StreamPurpose::Dynamics);
  PopulationState state = build_population(params, population_rng);
  return run_to_fixed_point(state, dynamics_rng, max_steps, unstable_root);
}

std::vector<RealizationOutcome> run_ensemble(const ModelParams& params, std::size_t n_realizations,
                                             std::uint64_t max_steps, std::optional<double> unstable_root,
                                             unsigned workers) {
  if (n_realizations < 1) throw ParameterDomainError("n_realizations must be at least 1");
  params.validate();
  std::vector<RealizationOutcome> outcomes(n_realizations);
  parallel_for(n_realizations, workers, [&](std::size_t r) {
    outcomes[r] = run_realization(params, r, max_steps, unstable_root);
  });
  return outcomes;
}

}  // namespace herding
