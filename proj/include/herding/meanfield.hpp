#pragma once

#include <cstdint>
#include <optional>
#include <vector>

namespace herding {

/// Largest peer-group size the binomial tables support.
inline constexpr std::uint32_t kMaxPeers = 63;

/// Default bisection width for mean-field roots.
inline constexpr double kRootTolerance = 1e-12;

/// Number of uniform grid points used to bracket drift zeros.
inline constexpr int kRootScanGrid = 4097;

struct MeanFieldParams {
  double eta = 0.0;
  double p = 0.0;
  std::uint32_t k_peers = 0;

  /// eta in [0,1], p in (1/2,1), K odd and in [1, kMaxPeers].
  void validate() const;
};

enum class Stability : std::uint8_t { Stable, Unstable };
enum class Regime : std::uint8_t { Monostable, Bistable };

const char* to_string(Stability s) noexcept;
const char* to_string(Regime r) noexcept;

/// Roots of q = Omega_K((1-eta) p + eta q), ascending, with stability labels.
/// Monostable holds one Stable root; Bistable holds (Stable, Unstable, Stable).
struct BranchSet {
  std::vector<double> roots;
  std::vector<Stability> stabilities;
  Regime regime = Regime::Monostable;

  bool bistable() const noexcept { return regime == Regime::Bistable; }
  /// Lowest stable root (equals q_plus when monostable).
  double q_minus() const { return roots.front(); }
  /// Highest stable root.
  double q_plus() const { return roots.back(); }
  /// The separating unstable root, bistable regime only.
  std::optional<double> q_unstable() const;
};

/// Probability a uniformly chosen agent is right: (1-eta) p + eta q.
double pi_of_q(double q, const MeanFieldParams& params) noexcept;

/// Probability that the majority of K independent agents, each right with
/// probability pi, is right (upper binomial tail from (K+1)/2). K odd, <= 63.
double omega(double pi, std::uint32_t k);

/// d omega / d pi = m C(K, m) [pi (1-pi)]^(m-1) with m = (K+1)/2.
double omega_derivative(double pi, std::uint32_t k);

/// Exact binomial coefficient C(n, k) for n <= kMaxPeers.
std::uint64_t binomial(std::uint32_t n, std::uint32_t k);

/// b[q] = Omega_K(pi(q)) - q.
double drift(double q, const MeanFieldParams& params);

/// b'[q] = eta Omega_K'(pi(q)) - 1.
double drift_derivative(double q, const MeanFieldParams& params);

/// Interior extrema of the drift on [0,1], ascending (0 or 2 values, 1 when
/// only one of the pair lands inside [0,1]).
std::vector<double> drift_extrema(const MeanFieldParams& params);

/// Scan the drift on a 4097-point grid (plus its extrema, so every monotone
/// piece is sampled at its ends), refine sign changes by bisection to width
/// tol and classify each root by the sign of b'.
///
/// Throws DegenerateRegimeError when the count is not 1 or 3 or two roots
/// merge at a fold (near eta_c).
BranchSet find_fixed_points(const MeanFieldParams& params, double tol = kRootTolerance);

/// Infimum of the bistable range of eta, by bisection to width tol. Throws
/// NoTransitionError when eta = 1 is not bistable (e.g. K = 1).
double find_eta_c(double p, std::uint32_t k, double tol = 1e-10);

}  // namespace herding
