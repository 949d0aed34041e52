#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace herding {

/// Everything a CLI run needs. Defaults follow the figure parameters
/// (p = 0.55, K = 11).
struct RunConfig {
  std::uint32_t n = 200;
  double p = 0.55;
  std::uint32_t k = 11;
  double eta_start = 0.05;
  double eta_end = 1.0;
  int eta_steps = 20;
  std::uint64_t realizations = 10;
  std::uint64_t seed = 1;
  /// 0 selects default_max_steps(n).
  std::uint64_t max_steps = 0;
  unsigned workers = 1;
  /// "-" writes to standard output.
  std::string out = "-";

  double tol = 1e-10;       ///< nash: bisection width in eta
  double dt = 0.01;         ///< langevin: Euler-Maruyama step
  double max_time = 1e4;    ///< langevin: cap in herder-clock units

  /// Throws ParameterDomainError on an inconsistent configuration.
  void validate() const;

  /// Requested sweep points: eta_start + i (eta_end - eta_start)/(eta_steps-1).
  std::vector<double> requested_etas() const;

  /// round(eta n)/n for each requested point.
  std::vector<double> effective_etas() const;
};

/// What a command reports besides its CSV: a one-line summary and whether
/// anything failed or did not converge.
struct CommandStatus {
  std::size_t rows = 0;
  std::size_t nonconverged = 0;
  std::size_t errors = 0;
  std::string summary;

  int exit_code() const noexcept { return errors > 0 || nonconverged > 0 ? 1 : 0; }
};

/// One row per realization per eta: eta, realization, q_final, steps,
/// herder_updates, converged, basin, and the mean-field branch (q_minus, q_u,
/// q_plus) for overlay.
CommandStatus cmd_scatter(const RunConfig& config, std::ostream& csv);

/// Mean-field branches per eta: eta, q_minus, q_u, q_plus, regime.
CommandStatus cmd_branches(const RunConfig& config, std::ostream& csv);

/// Analytic <q> per eta next to the Monte Carlo mean when realizations > 0.
CommandStatus cmd_qmean(const RunConfig& config, std::ostream& csv);

/// eta_star, <q>(eta_star), eta_c, residual as a header and one line.
CommandStatus cmd_nash(const RunConfig& config, std::ostream& csv);

/// Euler-Maruyama Lower-basin fraction beside the quadrature p_minus per eta.
CommandStatus cmd_langevin(const RunConfig& config, std::ostream& csv);

}  // namespace herding
