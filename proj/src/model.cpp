#include "herding/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "herding/errors.hpp"

namespace herding {

void ModelParams::validate() const {
  if (n_agents < 2) {
    throw ParameterDomainError("n_agents must be at least 2, got " + std::to_string(n_agents));
  }
  if (!(eta > 0.0 && eta <= 1.0)) {
    throw ParameterDomainError("eta must lie in (0, 1], got " + std::to_string(eta));
  }
  if (!(p > 0.5 && p < 1.0)) {
    throw ParameterDomainError("p must lie in (1/2, 1), got " + std::to_string(p));
  }
  if (k_peers % 2 == 0 || k_peers < 1 || k_peers > n_agents - 1) {
    throw ParameterDomainError("k_peers must be odd and in [1, N-1], got " + std::to_string(k_peers));
  }
}

std::uint32_t ModelParams::n_herders() const {
  return static_cast<std::uint32_t>(std::lround(eta * static_cast<double>(n_agents)));
}

double ModelParams::effective_eta() const {
  return static_cast<double>(n_herders()) / static_cast<double>(n_agents);
}

const char* to_string(Basin basin) noexcept {
  switch (basin) {
    case Basin::Lower: return "Lower";
    case Basin::Upper: return "Upper";
    case Basin::Unresolved: return "Unresolved";
  }
  return "Unresolved";
}

PopulationState::PopulationState(std::vector<Spin> spins, std::vector<Spin> signals,
                                 const std::vector<std::vector<AgentIndex>>& peer_groups)
    : spins_(std::move(spins)), signals_(std::move(signals)) {
  const std::size_t n = spins_.size();
  if (signals_.size() != n || peer_groups.size() != n) {
    throw ParameterDomainError("spins, signals and peer groups must all have length N");
  }
  peer_row_.assign(n, -1);
  bool k_known = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (spins_[i] != 1 && spins_[i] != -1) {
      throw ParameterDomainError("spin of agent " + std::to_string(i) + " is not +-1");
    }
    const Spin h = signals_[i];
    const auto& group = peer_groups[i];
    if (h == 1 || h == -1) {
      if (!group.empty()) {
        throw ParameterDomainError("informed agent " + std::to_string(i) + " has a peer group");
      }
      continue;
    }
    if (h != 0) throw ParameterDomainError("signal of agent " + std::to_string(i) + " is not in {-1,0,+1}");

    if (!k_known) {
      k_peers_ = static_cast<std::uint32_t>(group.size());
      k_known = true;
      if (k_peers_ % 2 == 0) throw ParameterDomainError("peer group size must be odd");
    }
    if (group.size() != k_peers_) {
      throw ParameterDomainError("herder " + std::to_string(i) + " does not have exactly K peers");
    }
    std::vector<AgentIndex> sorted(group);
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ParameterDomainError("herder " + std::to_string(i) + " has repeated peers");
    }
    for (AgentIndex j : group) {
      if (j >= n || j == i) {
        throw ParameterDomainError("herder " + std::to_string(i) + " has an invalid peer " + std::to_string(j));
      }
    }
    peer_row_[i] = static_cast<std::int32_t>(n_herders_);
    peer_table_.insert(peer_table_.end(), group.begin(), group.end());
    ++n_herders_;
    if (spins_[i] == 1) ++herders_up_;
  }
}

std::span<const AgentIndex> PopulationState::peers(AgentIndex i) const noexcept {
  const std::int32_t row = peer_row_[i];
  if (row < 0) return {};
  return std::span<const AgentIndex>(peer_table_).subspan(static_cast<std::size_t>(row) * k_peers_, k_peers_);
}

Spin PopulationState::target_spin(AgentIndex i) const noexcept {
  if (signals_[i] != 0) return signals_[i];
  int field = 0;
  for (AgentIndex j : peers(i)) field += spins_[j];
  return field > 0 ? Spin{1} : Spin{-1};
}

int PopulationState::update_agent(AgentIndex i) noexcept {
  const Spin old_spin = spins_[i];
  const Spin new_spin = target_spin(i);
  if (new_spin == old_spin) return 0;
  spins_[i] = new_spin;
  if (signals_[i] == 0) herders_up_ = new_spin > 0 ? herders_up_ + 1 : herders_up_ - 1;
  return new_spin - old_spin;
}

double PopulationState::measure_q() const {
  if (n_herders_ == 0) throw UndefinedObservableError("q is undefined for a population without herders");
  return static_cast<double>(herders_up_) / static_cast<double>(n_herders_);
}

bool PopulationState::is_fixed_point() const noexcept {
  for (AgentIndex i = 0; i < n_agents(); ++i) {
    if (target_spin(i) != spins_[i]) return false;
  }
  return true;
}

void PopulationState::set_spin(AgentIndex i, Spin s) noexcept {
  if (signals_[i] == 0 && s != spins_[i]) herders_up_ = s > 0 ? herders_up_ + 1 : herders_up_ - 1;
  spins_[i] = s;
}

PopulationState build_population(const ModelParams& params, CounterRng& rng) {
  params.validate();
  const std::uint32_t n = params.n_agents;
  const std::uint32_t n_herders = params.n_herders();
  const std::uint32_t k = params.k_peers;

  // Partial Fisher-Yates: the first n_herders slots become herders.
  std::vector<AgentIndex> order(n);
  std::iota(order.begin(), order.end(), AgentIndex{0});
  for (std::uint32_t j = 0; j < n_herders; ++j) {
    const auto r = j + static_cast<std::uint32_t>(rng.below(n - j));
    std::swap(order[j], order[r]);
  }
  std::vector<bool> is_herder(n, false);
  for (std::uint32_t j = 0; j < n_herders; ++j) is_herder[order[j]] = true;

  std::vector<Spin> signals(n, 0);
  for (AgentIndex i = 0; i < n; ++i) {
    if (!is_herder[i]) signals[i] = rng.bernoulli(params.p) ? Spin{1} : Spin{-1};
  }

  // Floyd's sampling of K distinct values from {0..N-2}, shifted past the owner.
  std::vector<std::vector<AgentIndex>> groups(n);
  const std::uint32_t pool = n - 1;
  for (AgentIndex i = 0; i < n; ++i) {
    if (!is_herder[i]) continue;
    auto& group = groups[i];
    group.reserve(k);
    for (std::uint32_t j = pool - k; j < pool; ++j) {
      const auto t = static_cast<AgentIndex>(rng.below(static_cast<std::uint64_t>(j) + 1));
      const bool taken = std::find(group.begin(), group.end(), t) != group.end();
      group.push_back(taken ? j : t);
    }
    for (auto& j : group) {
      if (j >= i) ++j;
    }
  }

  std::vector<Spin> spins(n);
  for (AgentIndex i = 0; i < n; ++i) spins[i] = (rng() >> 63) != 0 ? Spin{1} : Spin{-1};

  return PopulationState(std::move(spins), std::move(signals), groups);
}

std::uint64_t default_max_steps(std::uint32_t n_agents) {
  const double log_n = std::ceil(std::log(static_cast<double>(n_agents)));
  const auto steps = static_cast<std::uint64_t>(200.0 * n_agents * log_n);
  return std::max<std::uint64_t>(steps, 1);
}

Basin label_basin(double q, std::optional<double> unstable_root) noexcept {
  if (!unstable_root) return Basin::Unresolved;
  if (q < *unstable_root) return Basin::Lower;
  if (q > *unstable_root) return Basin::Upper;
  return Basin::Unresolved;
}

RealizationOutcome run_to_fixed_point(PopulationState& state, CounterRng& rng, std::uint64_t max_steps,
                                      std::optional<double> unstable_root) {
  const std::uint32_t n = state.n_agents();
  RealizationOutcome out;
  std::uint64_t since_sweep = 0;
  while (out.steps < max_steps) {
    const auto i = static_cast<AgentIndex>(rng.below(n));
    if (state.role(i) == Role::Herder) ++out.herder_updates;
    state.update_agent(i);
    ++out.steps;
    if (++since_sweep >= n) {
      since_sweep = 0;
      if (state.is_fixed_point()) {
        out.converged = true;
        break;
      }
    }
  }
  if (!out.converged) out.converged = state.is_fixed_point();
  if (state.n_herders() > 0) {
    out.q_final = state.measure_q();
    out.basin = label_basin(out.q_final, unstable_root);
  }
  return out;
}

}  // namespace herding
