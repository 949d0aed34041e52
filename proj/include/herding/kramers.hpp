#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "herding/meanfield.hpp"
#include "herding/rng.hpp"

namespace herding {

/// Orders used by the splitting-probability quadrature.
struct QuadratureSpec {
  int outer_nodes = 128;  ///< Gauss-Legendre order per panel of the q0 integral.
  int inner_nodes = 128;  ///< Gauss-Legendre order per psi-table cell.
  int psi_grid = 2048;    ///< Cells in the tabulated exponent.

  void validate() const;
  QuadratureSpec doubled() const { return {2 * outer_nodes, 2 * inner_nodes, 2 * psi_grid}; }
};

struct KramersParams {
  MeanFieldParams mean_field;
  std::uint32_t n_agents = 0;
  BranchSet branch;
  QuadratureSpec quadrature;

  /// sigma^2 = 1 / (eta N).
  double sigma2() const;

  /// Throws DomainError unless the branch is bistable and sigma^2 > 0.
  void validate() const;
};

/// Solve the mean-field branch and bundle it with N; throws DomainError when
/// eta is not in the bistable regime.
KramersParams make_kramers_params(const MeanFieldParams& mean_field, std::uint32_t n_agents,
                                  QuadratureSpec quadrature = {});

/// Diffusion a[q] = Omega(1 - Omega) + q (1 - q), Omega = Omega_K(pi(q)).
double diffusion(double q, const MeanFieldParams& params);

/// Initial density of q0: sqrt(2 eta N / pi) exp(-2 eta N (q0 - 1/2)^2).
double initial_density(double q0, double eta, std::uint32_t n_agents);

/// Splitting probability of the backward Fokker-Planck problem between the
/// two stable roots, with absorbing ends.
///
/// Construction tabulates psi(q) = (2/sigma^2) int_{q-}^{q} b/a on
/// Chebyshev-Lobatto spaced nodes over [q-, q+] and the per-cell integrals of
/// exp(-psi), shifted by the nodal maximum of -psi so nothing overflows. The
/// splitting probability is then
///
///     ptilde(q0) = int_{q0}^{q+} exp(-psi) / int_{q-}^{q+} exp(-psi),
///
/// extended by 1 below q- and 0 above q+.
class SplittingProbability {
 public:
  explicit SplittingProbability(const KramersParams& params);

  /// psi(q); q must lie in [q-, q+] (DomainError otherwise).
  double log_phi(double q) const;

  /// d psi / dq = (2/sigma^2) b/a, evaluated directly.
  double log_phi_slope(double q) const;

  double ptilde_minus(double q0) const;

  /// Largest |psi| over the table nodes (the dynamic range handled in log space).
  double psi_max() const noexcept { return psi_max_; }

  double q_minus() const noexcept { return nodes_.front(); }
  double q_plus() const noexcept { return nodes_.back(); }

 private:
  std::size_t cell_of(double q) const;
  double weight(double q) const;  // exp(-psi(q) - shift_)

  MeanFieldParams mean_field_;
  double two_over_sigma2_;
  int inner_nodes_;
  std::vector<double> nodes_;
  std::vector<double> psi_;
  std::vector<double> slope_;
  std::vector<double> tail_;  // tail_[j] = int_{x_j}^{q+} exp(-psi - shift)
  double shift_ = 0.0;
  double psi_max_ = 0.0;
};

/// Relative change of p_minus under doubled quadrature orders below which a
/// result is reported converged.
inline constexpr double kQuadratureSelfConsistency = 1e-8;

struct KramersResult {
  double p_minus = 0.0;
  double q_mean = 0.0;
  double psi_max = 0.0;
  bool converged = false;
  /// |p_minus(doubled) - p_minus| / p_minus; NaN when not checked.
  double relative_change = 0.0;
};

/// p- = int ptilde(q0) R(q0) dq0 over [1/2 - 8 s, 1/2 + 8 s] intersected with
/// [0,1], s = 1/sqrt(4 eta N), split into panels at q-, q_u, q+; and
/// <q> = p- q- + (1 - p-) q+. With check_convergence the whole computation is
/// repeated at doubled orders.
KramersResult p_minus(const KramersParams& params, bool check_convergence = true);

struct QMeanPoint {
  double eta = 0.0;
  double q_mean = 0.0;
  /// NaN in the monostable regime, where <q> is the single root.
  double p_minus = 0.0;
  Regime regime = Regime::Monostable;
  bool converged = true;
};

/// <q>(eta) at one point; propagates DegenerateRegimeError near eta_c.
QMeanPoint q_mean_at(double p, std::uint32_t k, std::uint32_t n_agents, double eta, QuadratureSpec quadrature = {},
                     bool check_convergence = true);

std::vector<QMeanPoint> q_mean_curve(double p, std::uint32_t k, std::uint32_t n_agents,
                                     const std::vector<double>& etas, QuadratureSpec quadrature = {});

struct NashPoint {
  double eta_star = 0.0;
  double q_mean = 0.0;
  double residual = 0.0;  ///< |<q>(eta_star) - p|
  double eta_c = 0.0;
};

/// Largest crossing of <q>(eta) = p on (eta_c, 1), bisected to width tol.
/// Throws NoEquilibriumError when no crossing is found.
NashPoint find_nash_eta(double p, std::uint32_t k, std::uint32_t n_agents, double tol = 1e-10);

// --- Langevin cross-check ---------------------------------------------------

enum class PathOutcome : std::uint8_t { Lower, Upper, Timeout };

const char* to_string(PathOutcome o) noexcept;

struct LangevinOptions {
  double dt = 0.01;
  double max_time = 1e4;
  /// Multiplies the noise term; 0 gives the deterministic flow.
  double noise_scale = 1.0;
  /// Capture radius in units of sigma = sqrt(sigma^2).
  double capture_sigmas = 2.0;
};

/// Euler-Maruyama integration of dq = b dtau + sigma sqrt(a) dW from q0,
/// clamped to [0,1], until q comes within the capture radius of q- or q+.
PathOutcome langevin_simulate(const KramersParams& params, double q0, CounterRng& rng,
                              const LangevinOptions& options = {});

struct LangevinTally {
  std::size_t lower = 0;
  std::size_t upper = 0;
  std::size_t timeout = 0;

  std::size_t total() const noexcept { return lower + upper + timeout; }
  double lower_fraction() const noexcept {
    return total() == 0 ? 0.0 : static_cast<double>(lower) / static_cast<double>(total());
  }
};

/// n_paths independent paths with q0 drawn from the initial density (clamped
/// into (0,1)); path i uses substreams (seed, i, InitialCondition/Langevin).
LangevinTally langevin_ensemble(const KramersParams& params, std::size_t n_paths, std::uint64_t seed,
                                const LangevinOptions& options = {}, unsigned workers = 1);

}  // namespace herding
