#include "herding/ensemble.hpp"
#include "herding/errors.hpp"
#include "herding/kramers.hpp"

#include <algorithm>
#include <cmath>

namespace herding {

const char* to_string(PathOutcome o) noexcept {
  switch (o) {
    case PathOutcome::Lower: return "Lower";
    case PathOutcome::Upper: return "Upper";
    case PathOutcome::Timeout: return "Timeout";
  }
  return "Timeout";
}

PathOutcome langevin_simulate(const KramersParams& params, double q0, CounterRng& rng,
                              const LangevinOptions& options) {
  if (!(options.dt > 0.0)) throw ParameterDomainError("dt must be positive");
  const MeanFieldParams& mf = params.mean_field;
  const double sigma = std::sqrt(params.sigma2());
  const double capture = options.capture_sigmas * sigma;
  const double noise = options.noise_scale * sigma * std::sqrt(options.dt);
  const double q_lower = params.branch.q_minus();
  const double q_upper = params.branch.q_plus();
  const auto max_steps = static_cast<std::uint64_t>(std::ceil(options.max_time / options.dt));

  double q = std::clamp(q0, 0.0, 1.0);
  for (std::uint64_t step = 0;; ++step) {
    if (std::abs(q - q_lower) <= capture) return PathOutcome::Lower;
    if (std::abs(q - q_upper) <= capture) return PathOutcome::Upper;
    if (step >= max_steps) return PathOutcome::Timeout;
    const double w = omega(pi_of_q(q, mf), mf.k_peers);
    const double b = w - q;
    const double a = std::max(0.0, w * (1.0 - w) + q * (1.0 - q));
    double increment = b * options.dt;
    if (noise != 0.0) increment += noise * std::sqrt(a) * rng.normal();
    q = std::clamp(q + increment, 0.0, 1.0);
  }
}

LangevinTally langevin_ensemble(const KramersParams& params, std::size_t n_paths, std::uint64_t seed,
                                const LangevinOptions& options, unsigned workers) {
  params.validate();
  const double width = 1.0 / std::sqrt(4.0 * params.mean_field.eta * static_cast<double>(params.n_agents));
  std::vector<PathOutcome> outcomes(n_paths);
  parallel_for(n_paths, workers, [&](std::size_t i) {
    auto start_rng = CounterRng::substream(seed, i, StreamPurpose::InitialCondition);
    auto path_rng = CounterRng::substream(seed, i, StreamPurpose::Langevin);
    const double q0 = std::clamp(0.5 + width * start_rng.normal(), 1e-9, 1.0 - 1e-9);
    outcomes[i] = langevin_simulate(params, q0, path_rng, options);
  });
  LangevinTally tally;
  for (PathOutcome o : outcomes) {
    switch (o) {
      case PathOutcome::Lower: ++tally.lower; break;
      case PathOutcome::Upper: ++tally.upper; break;
      case PathOutcome::Timeout: ++tally.timeout; break;
    }
  }
  return tally;
}

}  // namespace herding
