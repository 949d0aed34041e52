#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "herding/errors.hpp"
#include "herding/meanfield.hpp"

using namespace herding;

namespace {

// Exact majority probability for pi = num/den, in integer arithmetic:
// sum_g C(K,g) num^g (den-num)^(K-g) / den^K. Valid while den^K < 2^63.
double exact_majority(std::uint64_t num, std::uint64_t den, std::uint32_t k) {
  auto power = [](std::uint64_t base, std::uint32_t e) {
    std::uint64_t r = 1;
    for (std::uint32_t i = 0; i < e; ++i) r *= base;
    return r;
  };
  std::uint64_t numerator = 0;
  std::uint64_t choose = 1;  // C(k, g), built up from g = 0
  for (std::uint32_t g = 0; g <= k; ++g) {
    if (g > 0) choose = choose * (k - g + 1) / g;
    if (2 * g > k) numerator += choose * power(num, g) * power(den - num, k - g);
  }
  return static_cast<double>(numerator) / static_cast<double>(power(den, k));
}

double central_difference(double q, const MeanFieldParams& params, double h = 1e-6) {
  return (drift(q + h, params) - drift(q - h, params)) / (2 * h);
}

int count_sign_changes(const MeanFieldParams& params, int points) {
  int changes = 0;
  double previous = drift(0.0, params);
  for (int i = 1; i < points; ++i) {
    const double value = drift(static_cast<double>(i) / (points - 1), params);
    if ((previous < 0.0 && value > 0.0) || (previous > 0.0 && value < 0.0)) ++changes;
    if (value != 0.0) previous = value;
  }
  return changes;
}

}  // namespace

TEST(PiOfQ, AffineMap) {
  EXPECT_DOUBLE_EQ(pi_of_q(0.55, {0.3, 0.55, 11}), 0.55);
  EXPECT_DOUBLE_EQ(pi_of_q(0.3, {1.0, 0.55, 11}), 0.3);
  EXPECT_DOUBLE_EQ(pi_of_q(0.9, {0.0, 0.55, 11}), 0.55);
}

TEST(Binomial, PascalTable) {
  EXPECT_EQ(binomial(11, 6), 462u);
  EXPECT_EQ(binomial(63, 31), 916312070471295267ull);
  EXPECT_EQ(binomial(5, 7), 0u);
  EXPECT_THROW(binomial(64, 3), ParameterDomainError);
}

TEST(Omega, SymmetricPointIsOneHalf) {
  for (std::uint32_t k = 1; k <= 63; k += 2) EXPECT_NEAR(omega(0.5, k), 0.5, 1e-12) << "K=" << k;
}

TEST(Omega, Endpoints) {
  for (std::uint32_t k : {1u, 3u, 11u, 63u}) {
    EXPECT_EQ(omega(0.0, k), 0.0);
    EXPECT_EQ(omega(1.0, k), 1.0);
  }
}

TEST(Omega, SinglePeerIsIdentity) {
  for (double pi : {0.0, 0.1, 0.37, 0.5, 0.81, 1.0}) EXPECT_NEAR(omega(pi, 1), pi, 1e-15);
}

TEST(Omega, MatchesExactRationalSum) {
  // 32415876138437 / 51200000000000, from an exact fraction sum.
  EXPECT_NEAR(exact_majority(11, 20, 11), 32415876138437.0 / 51200000000000.0, 1e-15);
  EXPECT_NEAR(omega(0.55, 11), exact_majority(11, 20, 11), 1e-12);
  EXPECT_NEAR(omega(0.3, 7), exact_majority(3, 10, 7), 1e-12);
  EXPECT_NEAR(omega(0.05, 13), exact_majority(1, 20, 13), 1e-12);
  EXPECT_NEAR(omega(0.95, 13), exact_majority(19, 20, 13), 1e-12);
}

TEST(Omega, RejectsEvenOrLargeK) {
  EXPECT_THROW(omega(0.5, 4), ParameterDomainError);
  EXPECT_THROW(omega(0.5, 65), ParameterDomainError);
}

TEST(Omega, MonotoneAndComplementSymmetric) {
  std::mt19937_64 gen(12345);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint32_t k = 2 * static_cast<std::uint32_t>(gen() % 32) + 1;
    const double a = unit(gen);
    const double b = unit(gen);
    const double lo = std::min(a, b), hi = std::max(a, b);
    EXPECT_LE(omega(lo, k), omega(hi, k));
    // Strict increase is resolvable in doubles away from the saturated tails.
    if (k > 1 && k <= 21 && hi - lo > 1e-9 && lo > 0.05 && hi < 0.95) {
      EXPECT_LT(omega(lo, k), omega(hi, k)) << "K=" << k;
    }
    EXPECT_NEAR(omega(a, k) + omega(1.0 - a, k), 1.0, 1e-12);
  }
}

TEST(Drift, Examples) {
  const MeanFieldParams all_herd{1.0, 0.55, 11};
  EXPECT_EQ(drift(0.5, all_herd), 0.0);
  const MeanFieldParams none{0.0, 0.55, 11};
  EXPECT_NEAR(drift(0.2, none), omega(0.55, 11) - 0.2, 1e-15);
  EXPECT_GT(drift(0.2, none), drift(0.3, none));
}

TEST(DriftDerivative, Examples) {
  EXPECT_EQ(drift_derivative(0.3, {0.0, 0.55, 11}), -1.0);
  const MeanFieldParams all_herd{1.0, 0.55, 11};
  // 6 C(11,6) / 4^5 - 1
  EXPECT_NEAR(drift_derivative(0.5, all_herd), 2772.0 / 1024.0 - 1.0, 1e-14);
  EXPECT_NEAR(drift_derivative(0.5, all_herd), central_difference(0.5, all_herd), 1e-6);
}

TEST(DriftDerivative, MatchesFiniteDifferences) {
  std::mt19937_64 gen(99);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    const MeanFieldParams params{unit(gen), 0.5 + 0.49 * unit(gen) + 1e-3,
                                 2 * static_cast<std::uint32_t>(gen() % 15) + 1};
    const double q = 0.01 + 0.98 * unit(gen);
    const double analytic = drift_derivative(q, params);
    const double numeric = central_difference(q, params);
    EXPECT_LE(std::abs(analytic - numeric), 1e-6 * std::max(1.0, std::abs(analytic)))
        << "eta=" << params.eta << " p=" << params.p << " K=" << params.k_peers << " q=" << q;
  }
}

TEST(FindFixedPoints, AllHerdersGiveSymmetricTriple) {
  for (std::uint32_t k : {3u, 5u, 11u, 21u}) {
    const BranchSet set = find_fixed_points({1.0, 0.7, k});
    ASSERT_TRUE(set.bistable());
    EXPECT_NEAR(set.roots[0], 0.0, 1e-10);
    EXPECT_NEAR(set.roots[1], 0.5, 1e-10);
    EXPECT_NEAR(set.roots[2], 1.0, 1e-10);
    EXPECT_EQ(set.stabilities, (std::vector{Stability::Stable, Stability::Unstable, Stability::Stable}));
  }
}

TEST(FindFixedPoints, NoHerdersGiveSingleRoot) {
  const BranchSet set = find_fixed_points({0.0, 0.55, 11});
  ASSERT_EQ(set.roots.size(), 1u);
  EXPECT_EQ(set.regime, Regime::Monostable);
  EXPECT_NEAR(set.roots[0], omega(0.55, 11), 1e-12);
  EXPECT_EQ(set.stabilities[0], Stability::Stable);
  EXPECT_FALSE(set.q_unstable().has_value());
}

TEST(FindFixedPoints, StrongHerdingIsBistableNearZeroAndOne) {
  const MeanFieldParams params{0.9, 0.55, 11};
  const BranchSet set = find_fixed_points(params);
  ASSERT_TRUE(set.bistable());
  EXPECT_LT(set.q_minus(), 0.01);
  EXPECT_GT(set.q_plus(), 0.99);
  EXPECT_GT(drift_derivative(set.roots[1], params), 0.0);
}

TEST(FindFixedPoints, ResidualAndCompleteness) {
  for (int i = 1; i <= 9; ++i) {
    const MeanFieldParams params{0.1 * i, 0.55, 11};
    const BranchSet set = find_fixed_points(params);
    for (double r : set.roots) EXPECT_LE(std::abs(drift(r, params)), 10 * kRootTolerance);
    EXPECT_EQ(static_cast<int>(set.roots.size()), count_sign_changes(params, 1'000'000)) << "eta=" << params.eta;
    if (set.bistable()) {
      EXPECT_EQ(set.stabilities, (std::vector{Stability::Stable, Stability::Unstable, Stability::Stable}));
    }
  }
}

TEST(FindFixedPoints, IdenticallyZeroDriftIsDegenerate) {
  // K = 1, eta = 1: every q is a fixed point.
  EXPECT_THROW(find_fixed_points({1.0, 0.55, 1}), DegenerateRegimeError);
  try {
    find_fixed_points({1.0, 0.55, 1});
  } catch (const DegenerateRegimeError& e) {
    EXPECT_FALSE(e.brackets().empty());
  }
}

TEST(FindFixedPoints, RejectsBadInput) {
  EXPECT_THROW(find_fixed_points({0.5, 0.55, 11}, 0.0), ParameterDomainError);
  EXPECT_THROW(find_fixed_points({1.5, 0.55, 11}), ParameterDomainError);
  EXPECT_THROW(find_fixed_points({0.5, 0.45, 11}), ParameterDomainError);
}

TEST(DriftExtrema, AreZerosOfDerivative) {
  const MeanFieldParams params{0.8, 0.55, 11};
  const auto extrema = drift_extrema(params);
  ASSERT_FALSE(extrema.empty());
  for (double q : extrema) EXPECT_NEAR(drift_derivative(q, params), 0.0, 1e-9);
  EXPECT_TRUE(drift_extrema({0.1, 0.55, 11}).empty());
}

TEST(FindEtaC, TransitionForFigureParameters) {
  const double tol = 1e-10;
  const double eta_c = find_eta_c(0.55, 11, tol);
  EXPECT_GT(eta_c, 0.3);
  EXPECT_LT(eta_c, 0.7);
  EXPECT_TRUE(find_fixed_points({eta_c + 2 * tol, 0.55, 11}).bistable());
  EXPECT_FALSE(find_fixed_points({eta_c - 2 * tol, 0.55, 11}).bistable());
}

TEST(FindEtaC, SinglePeerHasNoTransition) {
  EXPECT_THROW(find_eta_c(0.55, 1, 1e-8), NoTransitionError);
}

TEST(FindEtaC, RootCountChangesOnceAlongSweep) {
  const double eta_c = find_eta_c(0.55, 11);
  int transitions = 0;
  bool previous = false;
  for (int i = 0; i <= 200; ++i) {
    const double eta = i / 200.0;
    const bool bistable = find_fixed_points({eta, 0.55, 11}).bistable();
    EXPECT_EQ(bistable, eta > eta_c) << "eta=" << eta;
    if (i > 0 && bistable != previous) ++transitions;
    previous = bistable;
  }
  EXPECT_EQ(transitions, 1);
}
