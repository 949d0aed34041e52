#include "herding/kramers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "herding/errors.hpp"
#include "herding/quadrature.hpp"

namespace herding {

namespace {

// Per-cell order for the exponent table. Cells are short and b/a is analytic
// inside [q-, q+].
constexpr int kPsiCellOrder = 16;

// Number of eta samples scanned for <q> = p crossings above eta_c.
constexpr int kNashScanPoints = 160;

}  // namespace

void QuadratureSpec::validate() const {
  if (outer_nodes < 8 || inner_nodes < 8 || psi_grid < 8) {
    throw ParameterDomainError("quadrature orders must all be at least 8");
  }
}

double KramersParams::sigma2() const {
  return 1.0 / (mean_field.eta * static_cast<double>(n_agents));
}

void KramersParams::validate() const {
  mean_field.validate();
  quadrature.validate();
  if (!branch.bistable()) {
    throw DomainError("splitting probability needs a bistable branch; eta=" + std::to_string(mean_field.eta) +
                      " is monostable");
  }
  if (n_agents == 0 || !(mean_field.eta > 0.0)) throw DomainError("sigma^2 = 1/(eta N) must be finite and positive");
}

KramersParams make_kramers_params(const MeanFieldParams& mean_field, std::uint32_t n_agents,
                                  QuadratureSpec quadrature) {
  KramersParams params{mean_field, n_agents, find_fixed_points(mean_field), quadrature};
  params.validate();
  return params;
}

double diffusion(double q, const MeanFieldParams& params) {
  const double w = omega(pi_of_q(q, params), params.k_peers);
  return std::max(0.0, w * (1.0 - w) + q * (1.0 - q));
}

double initial_density(double q0, double eta, std::uint32_t n_agents) {
  const double scale = 2.0 * eta * static_cast<double>(n_agents);
  const double d = q0 - 0.5;
  return std::sqrt(scale / std::numbers::pi) * std::exp(-scale * d * d);
}

// --- SplittingProbability ---------------------------------------------------

SplittingProbability::SplittingProbability(const KramersParams& params)
    : mean_field_(params.mean_field),
      two_over_sigma2_(2.0 / params.sigma2()),
      inner_nodes_(params.quadrature.inner_nodes) {
  params.validate();
  const double lo = params.branch.q_minus();
  const double hi = params.branch.q_plus();
  const int cells = params.quadrature.psi_grid;

  nodes_.resize(cells + 1);
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  for (int j = 0; j <= cells; ++j) {
    nodes_[j] = mid - half * std::cos(std::numbers::pi * j / cells);
  }
  nodes_.front() = lo;
  nodes_.back() = hi;

  const GaussLegendreRule& cell_rule = gauss_legendre(kPsiCellOrder);
  auto ratio = [this](double q) { return drift(q, mean_field_) / diffusion(q, mean_field_); };
  psi_.assign(cells + 1, 0.0);
  slope_.resize(cells + 1);
  for (int j = 0; j < cells; ++j) {
    psi_[j + 1] = psi_[j] + two_over_sigma2_ * cell_rule.integrate(nodes_[j], nodes_[j + 1], ratio);
  }
  for (int j = 0; j <= cells; ++j) slope_[j] = log_phi_slope(nodes_[j]);

  shift_ = -std::numeric_limits<double>::infinity();
  psi_max_ = 0.0;
  for (double v : psi_) {
    shift_ = std::max(shift_, -v);
    psi_max_ = std::max(psi_max_, std::abs(v));
  }

  const GaussLegendreRule& inner = gauss_legendre(inner_nodes_);
  tail_.assign(cells + 1, 0.0);
  for (int j = cells - 1; j >= 0; --j) {
    tail_[j] = tail_[j + 1] + inner.integrate(nodes_[j], nodes_[j + 1], [this](double q) { return weight(q); });
  }
}

std::size_t SplittingProbability::cell_of(double q) const {
  const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), q);
  const auto idx = static_cast<std::ptrdiff_t>(it - nodes_.begin()) - 1;
  return static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(idx, 0, static_cast<std::ptrdiff_t>(nodes_.size()) - 2));
}

double SplittingProbability::log_phi_slope(double q) const {
  const double a = diffusion(q, mean_field_);
  if (a > 0.0) return two_over_sigma2_ * drift(q, mean_field_) / a;
  // a vanishes only at q = 0 or 1 when eta = 1; take the l'Hopital limit.
  const double w = omega(pi_of_q(q, mean_field_), mean_field_.k_peers);
  const double a_prime = mean_field_.eta * omega_derivative(pi_of_q(q, mean_field_), mean_field_.k_peers) *
                             (1.0 - 2.0 * w) +
                         (1.0 - 2.0 * q);
  return two_over_sigma2_ * drift_derivative(q, mean_field_) / a_prime;
}

double SplittingProbability::log_phi(double q) const {
  if (!(q >= nodes_.front() && q <= nodes_.back())) {
    throw DomainError("log_phi is defined on [q-, q+] only, got q=" + std::to_string(q));
  }
  const std::size_t j = cell_of(q);
  const double x0 = nodes_[j];
  const double h = nodes_[j + 1] - x0;
  const double t = (q - x0) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  // Cubic Hermite basis with exact end slopes.
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return h00 * psi_[j] + h10 * h * slope_[j] + h01 * psi_[j + 1] + h11 * h * slope_[j + 1];
}

double SplittingProbability::weight(double q) const {
  return std::exp(-log_phi(q) - shift_);
}

double SplittingProbability::ptilde_minus(double q0) const {
  if (q0 <= nodes_.front()) return 1.0;
  if (q0 >= nodes_.back()) return 0.0;
  const std::size_t j = cell_of(q0);
  const double partial =
      gauss_legendre(inner_nodes_).integrate(q0, nodes_[j + 1], [this](double q) { return weight(q); });
  return std::min(1.0, (partial + tail_[j + 1]) / tail_.front());
}

// --- p_minus and <q> ----------------------------------------------------------

namespace {

struct SinglePass {
  double p_minus;
  double psi_max;
};

SinglePass p_minus_once(const KramersParams& params) {
  const SplittingProbability splitting(params);
  const double eta = params.mean_field.eta;
  const std::uint32_t n = params.n_agents;
  const double width = 1.0 / std::sqrt(4.0 * eta * static_cast<double>(n));
  const double lo = std::max(0.0, 0.5 - 8.0 * width);
  const double hi = std::min(1.0, 0.5 + 8.0 * width);

  std::vector<double> breaks{lo, hi};
  for (double r : params.branch.roots) {
    if (r > lo && r < hi) breaks.push_back(r);
  }
  std::sort(breaks.begin(), breaks.end());

  const GaussLegendreRule& outer = gauss_legendre(params.quadrature.outer_nodes);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    total += outer.integrate(breaks[i], breaks[i + 1], [&](double q0) {
      return splitting.ptilde_minus(q0) * initial_density(q0, eta, n);
    });
  }
  return {std::clamp(total, 0.0, 1.0), splitting.psi_max()};
}

}  // namespace

KramersResult p_minus(const KramersParams& params, bool check_convergence) {
  params.validate();
  const SinglePass base = p_minus_once(params);
  KramersResult result;
  result.p_minus = base.p_minus;
  result.psi_max = base.psi_max;
  result.q_mean = result.p_minus * params.branch.q_minus() + (1.0 - result.p_minus) * params.branch.q_plus();
  if (!check_convergence) {
    result.converged = false;
    result.relative_change = std::numeric_limits<double>::quiet_NaN();
    return result;
  }
  KramersParams refined = params;
  refined.quadrature = params.quadrature.doubled();
  const SinglePass fine = p_minus_once(refined);
  const double scale = std::max(std::abs(base.p_minus), std::abs(fine.p_minus));
  result.relative_change = scale == 0.0 ? 0.0 : std::abs(fine.p_minus - base.p_minus) / scale;
  result.converged = result.relative_change < kQuadratureSelfConsistency;
  return result;
}

QMeanPoint q_mean_at(double p, std::uint32_t k, std::uint32_t n_agents, double eta, QuadratureSpec quadrature,
                     bool check_convergence) {
  const MeanFieldParams mf{eta, p, k};
  BranchSet branch = find_fixed_points(mf);
  QMeanPoint point;
  point.eta = eta;
  point.regime = branch.regime;
  if (!branch.bistable()) {
    point.q_mean = branch.q_plus();
    point.p_minus = std::numeric_limits<double>::quiet_NaN();
    return point;
  }
  const KramersParams params{mf, n_agents, std::move(branch), quadrature};
  const KramersResult r = p_minus(params, check_convergence);
  point.q_mean = r.q_mean;
  point.p_minus = r.p_minus;
  point.converged = !check_convergence || r.converged;
  return point;
}

std::vector<QMeanPoint> q_mean_curve(double p, std::uint32_t k, std::uint32_t n_agents,
                                     const std::vector<double>& etas, QuadratureSpec quadrature) {
  std::vector<QMeanPoint> out;
  out.reserve(etas.size());
  for (double eta : etas) {
    if (!(eta > 0.0 && eta <= 1.0)) throw ParameterDomainError("q_mean_curve needs eta in (0, 1]");
    out.push_back(q_mean_at(p, k, n_agents, eta, quadrature));
  }
  return out;
}

NashPoint find_nash_eta(double p, std::uint32_t k, std::uint32_t n_agents, double tol) {
  if (!(tol > 0.0)) throw ParameterDomainError("tolerance must be positive");
  NashPoint nash;
  nash.eta_c = find_eta_c(p, k);

  auto excess = [&](double eta) { return q_mean_at(p, k, n_agents, eta, {}, false).q_mean - p; };

  std::vector<double> etas;
  std::vector<double> values;
  for (int i = 1; i <= kNashScanPoints; ++i) {
    const double eta = nash.eta_c + (1.0 - nash.eta_c) * i / kNashScanPoints;
    try {
      values.push_back(excess(eta));
      etas.push_back(eta);
    } catch (const DegenerateRegimeError&) {
      // a sample landing on the fold; skip it
    }
  }

  // Walk down from eta = 1 to the first sign change.
  std::ptrdiff_t found = -1;
  for (auto i = static_cast<std::ptrdiff_t>(values.size()) - 2; i >= 0; --i) {
    if (values[i + 1] == 0.0 || (values[i] > 0.0) != (values[i + 1] > 0.0)) {
      found = i;
      break;
    }
  }
  if (found < 0) {
    throw NoEquilibriumError("<q>(eta) never crosses p=" + std::to_string(p) + " on (eta_c, 1) for K=" +
                             std::to_string(k) + ", N=" + std::to_string(n_agents));
  }
  double lo = etas[found], hi = etas[found + 1];
  const bool lo_positive = values[found] > 0.0;
  if (values[found + 1] == 0.0) {
    lo = hi;
  }
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double f = excess(mid);
    if (f == 0.0) {
      lo = hi = mid;
      break;
    }
    ((f > 0.0) == lo_positive ? lo : hi) = mid;
  }
  nash.eta_star = 0.5 * (lo + hi);
  nash.q_mean = q_mean_at(p, k, n_agents, nash.eta_star).q_mean;
  nash.residual = std::abs(nash.q_mean - p);
  return nash;
}

}  // namespace herding
