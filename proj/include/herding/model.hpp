#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "herding/rng.hpp"

namespace herding {

using AgentIndex = std::uint32_t;
using Spin = std::int8_t;

/// Parameters of one finite-N run: N agents, a fraction eta of herders, signal
/// accuracy p and K peers per herder.
struct ModelParams {
  std::uint32_t n_agents = 0;
  double eta = 0.0;
  double p = 0.0;
  std::uint32_t k_peers = 0;
  std::uint64_t seed = 0;

  /// Throws ParameterDomainError when any invariant is violated.
  void validate() const;

  /// round(eta * N).
  std::uint32_t n_herders() const;

  /// n_herders / N; this, not the requested eta, is what every downstream
  /// formula and output uses.
  double effective_eta() const;
};

enum class Role : std::uint8_t { Informed, Herder };

enum class Basin : std::uint8_t { Lower, Upper, Unresolved };

const char* to_string(Basin basin) noexcept;

/// Agents, their quenched signals and the directed peer network.
///
/// Herders carry signal 0 and exactly K distinct peers (never themselves);
/// informed agents carry a signal of +1 or -1 and no peers.
class PopulationState {
 public:
  /// Assemble a state from explicit parts. `peer_groups[i]` must be empty for
  /// informed agents (signal != 0) and hold K distinct indices != i for
  /// herders. Throws ParameterDomainError on any inconsistency.
  PopulationState(std::vector<Spin> spins, std::vector<Spin> signals,
                  const std::vector<std::vector<AgentIndex>>& peer_groups);

  std::uint32_t n_agents() const noexcept { return static_cast<std::uint32_t>(spins_.size()); }
  std::uint32_t n_herders() const noexcept { return n_herders_; }
  std::uint32_t k_peers() const noexcept { return k_peers_; }

  std::span<const Spin> spins() const noexcept { return spins_; }
  std::span<const Spin> signals() const noexcept { return signals_; }
  Role role(AgentIndex i) const noexcept { return signals_[i] == 0 ? Role::Herder : Role::Informed; }

  /// Peers observed by herder i; empty for informed agents.
  std::span<const AgentIndex> peers(AgentIndex i) const noexcept;

  /// Spin agent i would adopt if updated now: its signal when informed, the
  /// majority of its peers when herding.
  Spin target_spin(AgentIndex i) const noexcept;

  /// Apply the asynchronous update to agent i; returns new spin minus old
  /// spin, one of {-2, 0, +2}.
  int update_agent(AgentIndex i) noexcept;

  /// Fraction of herders currently at +1. Throws UndefinedObservableError
  /// when there are no herders.
  double measure_q() const;

  /// Number of herders currently at +1.
  std::uint32_t herders_up() const noexcept { return herders_up_; }

  /// True iff no single update would change any spin.
  bool is_fixed_point() const noexcept;

  /// Overwrite a spin (test setup and external initial conditions).
  void set_spin(AgentIndex i, Spin s) noexcept;

 private:
  std::vector<Spin> spins_;
  std::vector<Spin> signals_;
  // Row r of peer_table_ (K entries) belongs to the agent whose peer_row_ is r.
  std::vector<std::int32_t> peer_row_;
  std::vector<AgentIndex> peer_table_;
  std::uint32_t k_peers_ = 0;
  std::uint32_t n_herders_ = 0;
  std::uint32_t herders_up_ = 0;
};

/// Draw roles, quenched signals, peer groups and initial spins.
PopulationState build_population(const ModelParams& params, CounterRng& rng);

struct RealizationOutcome {
  double q_final = 0.0;
  /// Update attempts performed (agents picked uniformly over all N).
  std::uint64_t steps = 0;
  /// Attempts that selected a herder; herder_updates / (eta N) is elapsed
  /// time on the herder clock.
  std::uint64_t herder_updates = 0;
  bool converged = false;
  Basin basin = Basin::Unresolved;
};

/// 200 * N * ceil(ln N), at least 1.
std::uint64_t default_max_steps(std::uint32_t n_agents);

/// Lower iff q < q_u, Upper iff q > q_u, Unresolved on a tie or without a
/// separating root.
Basin label_basin(double q, std::optional<double> unstable_root) noexcept;

/// Pick agents uniformly at random and update them until the state is a
/// fixed point or `max_steps` attempts have been made. The fixed-point sweep
/// runs once every N attempts and once more at the step cap.
RealizationOutcome run_to_fixed_point(PopulationState& state, CounterRng& rng, std::uint64_t max_steps,
                                      std::optional<double> unstable_root = std::nullopt);

}  // namespace herding
