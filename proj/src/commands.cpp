#include "herding/commands.hpp"

#include <cmath>
#include <iomanip>
#include <optional>
#include <sstream>

#include "herding/csv.hpp"
#include "herding/ensemble.hpp"
#include "herding/errors.hpp"
#include "herding/kramers.hpp"
#include "herding/meanfield.hpp"
#include "herding/model.hpp"

namespace herding {

namespace {

std::optional<BranchSet> try_branches(double eta, const RunConfig& config) {
  try {
    return find_fixed_points({eta, config.p, config.k});
  } catch (const DegenerateRegimeError&) {
    return std::nullopt;
  }
}

ModelParams model_at(const RunConfig& config, double eta, std::size_t eta_index) {
  ModelParams params{config.n, eta, config.p, config.k, mix_seed(config.seed, eta_index)};
  params.validate();
  if (params.n_herders() == 0) {
    throw ParameterDomainError("eta=" + format_real(eta) + " leaves no herders at N=" + std::to_string(config.n));
  }
  return params;
}

std::uint64_t max_steps_for(const RunConfig& config) {
  return config.max_steps == 0 ? default_max_steps(config.n) : config.max_steps;
}

}  // namespace

void RunConfig::validate() const {
  if (eta_steps < 1) throw ParameterDomainError("eta-steps must be at least 1");
  if (eta_start > eta_end) throw ParameterDomainError("eta-start must not exceed eta-end");
  if (eta_start < 0.0 || eta_end > 1.0) throw ParameterDomainError("eta sweep must stay inside [0, 1]");
  MeanFieldParams{eta_start, p, k}.validate();
  if (n < 2 || k > n - 1) throw ParameterDomainError("need N >= 2 and K <= N-1");
  if (workers < 1) throw ParameterDomainError("workers must be at least 1");
  if (!(tol > 0.0)) throw ParameterDomainError("tol must be positive");
  if (!(dt > 0.0) || !(max_time > 0.0)) throw ParameterDomainError("dt and max-time must be positive");
}

std::vector<double> RunConfig::requested_etas() const {
  std::vector<double> etas;
  etas.reserve(eta_steps);
  for (int i = 0; i < eta_steps; ++i) {
    etas.push_back(eta_steps == 1 ? eta_start : eta_start + (eta_end - eta_start) * i / (eta_steps - 1));
  }
  return etas;
}

std::vector<double> RunConfig::effective_etas() const {
  std::vector<double> etas = requested_etas();
  for (double& eta : etas) eta = static_cast<double>(std::lround(eta * n)) / static_cast<double>(n);
  return etas;
}

CommandStatus cmd_scatter(const RunConfig& config, std::ostream& csv) {
  config.validate();
  if (config.realizations < 1) throw ParameterDomainError("scatter needs at least one realization");
  CommandStatus status;
  write_header(csv, {"eta", "realization", "q_final", "steps", "herder_updates", "converged", "basin", "q_minus",
                     "q_u", "q_plus"});
  const std::vector<double> etas = config.effective_etas();
  for (std::size_t e = 0; e < etas.size(); ++e) {
    const ModelParams params = model_at(config, etas[e], e);
    const std::optional<BranchSet> branch = try_branches(etas[e], config);
    if (!branch) ++status.errors;
    const std::optional<double> q_u = branch ? branch->q_unstable() : std::nullopt;
    const auto outcomes = run_ensemble(params, config.realizations, max_steps_for(config), q_u, config.workers);
    for (std::size_t r = 0; r < outcomes.size(); ++r) {
      const RealizationOutcome& o = outcomes[r];
      CsvRow row(csv);
      row.real(etas[e]).integer(r).real(o.q_final).integer(o.steps).integer(o.herder_updates).flag(o.converged);
      row.text(to_string(o.basin));
      if (branch && branch->bistable()) {
        row.real(branch->q_minus()).real(branch->roots[1]).real(branch->q_plus());
      } else if (branch) {
        row.empty().empty().real(branch->q_plus());
      } else {
        row.empty().empty().empty();
      }
      row.end_row();
      ++status.rows;
      if (!o.converged) ++status.nonconverged;
    }
  }
  status.summary = "scatter: rows=" + std::to_string(status.rows) +
                   " nonconverged=" + std::to_string(status.nonconverged) +
                   " degenerate_eta=" + std::to_string(status.errors);
  return status;
}

CommandStatus cmd_branches(const RunConfig& config, std::ostream& csv) {
  config.validate();
  CommandStatus status;
  write_header(csv, {"eta", "q_minus", "q_u", "q_plus", "regime"});
  for (double eta : config.effective_etas()) {
    CsvRow row(csv);
    row.real(eta);
    const std::optional<BranchSet> branch = try_branches(eta, config);
    if (!branch) {
      row.empty().empty().empty().text("Degenerate");
      ++status.errors;
    } else if (branch->bistable()) {
      row.real(branch->q_minus()).real(branch->roots[1]).real(branch->q_plus()).text(to_string(branch->regime));
    } else {
      row.empty().empty().real(branch->q_plus()).text(to_string(branch->regime));
    }
    row.end_row();
    ++status.rows;
  }
  status.summary = "branches: rows=" + std::to_string(status.rows) + " degenerate=" + std::to_string(status.errors);
  return status;
}

CommandStatus cmd_qmean(const RunConfig& config, std::ostream& csv) {
  config.validate();
  CommandStatus status;
  write_header(csv, {"eta", "regime", "q_mean_analytic", "p_minus", "quadrature_converged", "q_mean_empirical",
                     "q_mean_stderr", "lower_fraction", "realizations", "nonconverged"});
  const std::vector<double> etas = config.effective_etas();
  for (std::size_t e = 0; e < etas.size(); ++e) {
    const double eta = etas[e];
    CsvRow row(csv);
    row.real(eta);
    std::optional<double> q_u;
    try {
      const QMeanPoint point = q_mean_at(config.p, config.k, config.n, eta);
      row.text(to_string(point.regime)).real(point.q_mean).real(point.p_minus).flag(point.converged);
      if (!point.converged) ++status.nonconverged;
      if (point.regime == Regime::Bistable) q_u = find_fixed_points({eta, config.p, config.k}).q_unstable();
    } catch (const DegenerateRegimeError&) {
      row.text("Degenerate").empty().empty().empty();
      ++status.errors;
    }
    if (config.realizations > 0 && eta > 0.0) {
      const ModelParams params = model_at(config, eta, e);
      const auto outcomes = run_ensemble(params, config.realizations, max_steps_for(config), q_u, config.workers);
      double sum = 0.0, sum_sq = 0.0;
      std::size_t lower = 0, nonconverged = 0;
      for (const auto& o : outcomes) {
        sum += o.q_final;
        sum_sq += o.q_final * o.q_final;
        if (o.basin == Basin::Lower) ++lower;
        if (!o.converged) ++nonconverged;
      }
      const double count = static_cast<double>(outcomes.size());
      const double mean = sum / count;
      const double variance = count > 1 ? std::max(0.0, (sum_sq - count * mean * mean) / (count - 1)) : 0.0;
      row.real(mean).real(std::sqrt(variance / count));
      if (q_u) {
        row.real(static_cast<double>(lower) / count);
      } else {
        row.empty();
      }
      row.integer(outcomes.size()).integer(nonconverged);
      status.nonconverged += nonconverged;
    } else {
      row.empty().empty().empty().integer(0).integer(0);
    }
    row.end_row();
    ++status.rows;
  }
  status.summary = "qmean: rows=" + std::to_string(status.rows) + " nonconverged=" +
                   std::to_string(status.nonconverged) + " degenerate=" + std::to_string(status.errors);
  return status;
}

CommandStatus cmd_nash(const RunConfig& config, std::ostream& csv) {
  config.validate();
  CommandStatus status;
  const NashPoint nash = find_nash_eta(config.p, config.k, config.n, config.tol);
  write_header(csv, {"eta_star", "q_mean", "eta_c", "residual"});
  CsvRow(csv).real(nash.eta_star).real(nash.q_mean).real(nash.eta_c).real(nash.residual).end_row();
  status.rows = 1;
  status.summary = "nash: eta_star=" + format_real(nash.eta_star) + " residual=" + format_real(nash.residual);
  return status;
}

CommandStatus cmd_langevin(const RunConfig& config, std::ostream& csv) {
  config.validate();
  if (config.realizations < 1) throw ParameterDomainError("langevin needs at least one path");
  CommandStatus status;
  write_header(csv, {"eta", "regime", "p_minus_quadrature", "lower_fraction", "lower_stderr", "timeout_fraction",
                     "paths", "within_3se"});
  const LangevinOptions options{config.dt, config.max_time, 1.0, 2.0};
  const std::vector<double> etas = config.effective_etas();
  std::size_t total_timeouts = 0, total_paths = 0;
  for (std::size_t e = 0; e < etas.size(); ++e) {
    const double eta = etas[e];
    CsvRow row(csv);
    row.real(eta);
    const std::optional<BranchSet> branch = eta > 0.0 ? try_branches(eta, config) : std::nullopt;
    if (!branch || !branch->bistable()) {
      if (!branch && eta > 0.0) ++status.errors;
      row.text(branch ? "Monostable" : (eta > 0.0 ? "Degenerate" : "Monostable"));
      row.empty().empty().empty().empty().integer(0).empty().end_row();
      ++status.rows;
      continue;
    }
    const KramersParams params{{eta, config.p, config.k}, config.n, *branch, {}};
    const KramersResult quad = p_minus(params);
    if (!quad.converged) ++status.nonconverged;
    const LangevinTally tally =
        langevin_ensemble(params, config.realizations, mix_seed(config.seed, e), options, config.workers);
    const double paths = static_cast<double>(tally.total());
    const double fraction = tally.lower_fraction();
    const double stderr_binomial = std::sqrt(std::max(quad.p_minus * (1.0 - quad.p_minus), 1e-300) / paths);
    total_timeouts += tally.timeout;
    total_paths += tally.total();
    row.text("Bistable").real(quad.p_minus).real(fraction).real(stderr_binomial);
    row.real(static_cast<double>(tally.timeout) / paths).integer(tally.total());
    row.flag(std::abs(fraction - quad.p_minus) <= 3.0 * stderr_binomial).end_row();
    ++status.rows;
  }
  std::ostringstream summary;
  summary << "langevin: rows=" << status.rows << " timeouts=" << total_timeouts << '/' << total_paths;
  status.summary = summary.str();
  return status;
}

}  // namespace herding
