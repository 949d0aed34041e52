#include "herding/meanfield.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "herding/errors.hpp"

namespace herding {

namespace {

using PascalTable = std::array<std::array<std::uint64_t, kMaxPeers + 1>, kMaxPeers + 1>;

const PascalTable& pascal() {
  static const PascalTable table = [] {
    PascalTable t{};
    for (std::uint32_t n = 0; n <= kMaxPeers; ++n) {
      t[n][0] = 1;
      for (std::uint32_t k = 1; k <= n; ++k) t[n][k] = t[n - 1][k - 1] + (k < n ? t[n - 1][k] : 0);
    }
    return t;
  }();
  return table;
}

void check_k(std::uint32_t k) {
  if (k % 2 == 0 || k > kMaxPeers) {
    throw ParameterDomainError("K must be odd and at most " + std::to_string(kMaxPeers) + ", got " +
                               std::to_string(k));
  }
}

// Upper tail for pi <= 1/2: every term is past the mode, so g = m is the
// largest and the series decreases from there.
double majority_tail(double pi, std::uint32_t k) {
  const std::uint32_t m = (k + 1) / 2;
  const double miss = 1.0 - pi;
  double sum = 0.0;
  for (std::uint32_t g = m; g <= k; ++g) {
    sum += static_cast<double>(binomial(k, g)) * std::pow(pi, g) * std::pow(miss, k - g);
  }
  return sum;
}

}  // namespace

void MeanFieldParams::validate() const {
  if (!(eta >= 0.0 && eta <= 1.0)) throw ParameterDomainError("eta must lie in [0, 1], got " + std::to_string(eta));
  if (!(p > 0.5 && p < 1.0)) throw ParameterDomainError("p must lie in (1/2, 1), got " + std::to_string(p));
  check_k(k_peers);
  if (k_peers < 1) throw ParameterDomainError("K must be positive");
}

const char* to_string(Stability s) noexcept { return s == Stability::Stable ? "Stable" : "Unstable"; }
const char* to_string(Regime r) noexcept { return r == Regime::Bistable ? "Bistable" : "Monostable"; }

std::optional<double> BranchSet::q_unstable() const {
  if (!bistable()) return std::nullopt;
  return roots[1];
}

std::uint64_t binomial(std::uint32_t n, std::uint32_t k) {
  if (n > kMaxPeers) throw ParameterDomainError("binomial table holds n <= " + std::to_string(kMaxPeers));
  if (k > n) return 0;
  return pascal()[n][k];
}

double pi_of_q(double q, const MeanFieldParams& params) noexcept {
  return std::clamp((1.0 - params.eta) * params.p + params.eta * q, 0.0, 1.0);
}

double omega(double pi, std::uint32_t k) {
  check_k(k);
  pi = std::clamp(pi, 0.0, 1.0);
  if (pi <= 0.5) return majority_tail(pi, k);
  // Complement through Omega(pi) + Omega(1 - pi) = 1 keeps the small tail exact.
  return 1.0 - majority_tail(1.0 - pi, k);
}

double omega_derivative(double pi, std::uint32_t k) {
  check_k(k);
  const std::uint32_t m = (k + 1) / 2;
  return static_cast<double>(m) * static_cast<double>(binomial(k, m)) * std::pow(pi * (1.0 - pi), m - 1);
}

double drift(double q, const MeanFieldParams& params) {
  return omega(pi_of_q(q, params), params.k_peers) - q;
}

double drift_derivative(double q, const MeanFieldParams& params) {
  return params.eta * omega_derivative(pi_of_q(q, params), params.k_peers) - 1.0;
}

std::vector<double> drift_extrema(const MeanFieldParams& params) {
  params.validate();
  const std::uint32_t k = params.k_peers;
  const double eta = params.eta;
  // Omega' is symmetric about pi = 1/2 and increasing below it, so
  // eta Omega'(pi) = 1 has either no solution or a symmetric pair.
  if (eta == 0.0 || eta * omega_derivative(0.5, k) <= 1.0 || k == 1) return {};
  double lo = 0.0, hi = 0.5;
  for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
    const double mid = 0.5 * (lo + hi);
    (eta * omega_derivative(mid, k) < 1.0 ? lo : hi) = mid;
  }
  const double pi_low = 0.5 * (lo + hi);
  std::vector<double> out;
  for (double pi : {pi_low, 1.0 - pi_low}) {
    const double q = (pi - (1.0 - eta) * params.p) / eta;
    if (q > 0.0 && q < 1.0) out.push_back(q);
  }
  return out;
}

BranchSet find_fixed_points(const MeanFieldParams& params, double tol) {
  params.validate();
  if (!(tol > 0.0)) throw ParameterDomainError("root tolerance must be positive");

  const std::vector<double> extrema = drift_extrema(params);
  std::vector<double> grid;
  grid.reserve(kRootScanGrid + extrema.size());
  for (int i = 0; i < kRootScanGrid; ++i) grid.push_back(static_cast<double>(i) / (kRootScanGrid - 1));
  for (double e : extrema) grid.push_back(e);
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) values[i] = drift(grid[i], params);

  std::vector<double> roots;
  std::vector<Bracket> brackets;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (values[i] == 0.0) {
      roots.push_back(grid[i]);
      brackets.push_back({grid[i], grid[i]});
      continue;
    }
    if (i + 1 == grid.size() || values[i + 1] == 0.0 || (values[i] > 0.0) == (values[i + 1] > 0.0)) continue;
    double lo = grid[i], hi = grid[i + 1];
    const bool lo_positive = values[i] > 0.0;
    brackets.push_back({lo, hi});
    double root = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double f = drift(mid, params);
      if (f == 0.0) {
        lo = hi = mid;
        break;
      }
      ((f > 0.0) == lo_positive ? lo : hi) = mid;
    }
    root = 0.5 * (lo + hi);
    roots.push_back(root);
  }

  if (roots.size() != 1 && roots.size() != 3) {
    throw DegenerateRegimeError("drift has " + std::to_string(roots.size()) + " zeros at eta=" +
                                    std::to_string(params.eta) + "; expected 1 or 3",
                                brackets);
  }

  // Two roots about to merge at the fold: look at the drift extremum between them.
  for (std::size_t r = 0; r + 1 < roots.size(); ++r) {
    if (roots[r + 1] - roots[r] >= 1e3 * tol) continue;
    double between = 0.5 * (roots[r] + roots[r + 1]);
    for (double e : extrema) {
      if (e > roots[r] && e < roots[r + 1]) between = e;
    }
    if (std::abs(drift(between, params)) < 10.0 * tol) {
      throw DegenerateRegimeError("fixed points merge near eta=" + std::to_string(params.eta), brackets);
    }
  }

  BranchSet set;
  set.roots = roots;
  for (double root : roots) {
    set.stabilities.push_back(drift_derivative(root, params) < 0.0 ? Stability::Stable : Stability::Unstable);
  }
  const bool ordered =
      roots.size() == 1
          ? set.stabilities[0] == Stability::Stable
          : set.stabilities == std::vector{Stability::Stable, Stability::Unstable, Stability::Stable};
  if (!ordered) {
    throw DegenerateRegimeError("unexpected stability pattern at eta=" + std::to_string(params.eta), brackets);
  }
  set.regime = roots.size() == 3 ? Regime::Bistable : Regime::Monostable;
  return set;
}

double find_eta_c(double p, std::uint32_t k, double tol) {
  if (!(tol > 0.0)) throw ParameterDomainError("eta tolerance must be positive");
  MeanFieldParams{0.0, p, k}.validate();
  auto bistable = [&](double eta) {
    try {
      return find_fixed_points({eta, p, k}).bistable();
    } catch (const DegenerateRegimeError&) {
      return false;
    }
  };
  if (bistable(0.0) || !bistable(1.0)) {
    throw NoTransitionError("no monostable-to-bistable transition on eta in [0,1] for p=" + std::to_string(p) +
                            ", K=" + std::to_string(k));
  }
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    (bistable(mid) ? hi : lo) = mid;
  }
  return hi;
}

}  // namespace herding
