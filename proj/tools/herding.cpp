// herding: sweeps and analytics for the binary-forecast herding model.
//
//   herding scatter  --n 10000 --eta-start 0.05 --eta-end 1 --eta-steps 20 --realizations 10 --out fig1.csv
//   herding qmean    --n 200 --realizations 2000 --out fig2.csv
//   herding branches --eta-start 0 --eta-steps 101
//   herding nash     --n 10000
//   herding langevin --n 200 --eta-start 0.8 --eta-end 0.95 --eta-steps 4 --realizations 2000
//
// Options may also come from a `key = value` file given with --config; flags
// on the command line win. HERDING_WORKERS sets the default worker count.
#include <fstream>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "herding/commands.hpp"
#include "herding/ensemble.hpp"

int main(int argc, char** argv) {
  using namespace herding;

  RunConfig config;
  config.workers = default_worker_count();

  CLI::App app{"Monte Carlo and Kramers analytics for the herding forecast model"};
  app.set_config("--config", "", "key = value configuration file");
  app.add_option("--p", config.p, "signal accuracy, in (1/2, 1)")->capture_default_str();
  app.add_option("--k", config.k, "peers per herder (odd)")->capture_default_str();
  app.add_option("--n", config.n, "number of agents")->capture_default_str();
  app.add_option("--eta-start", config.eta_start, "first herder fraction of the sweep")->capture_default_str();
  app.add_option("--eta-end", config.eta_end, "last herder fraction of the sweep")->capture_default_str();
  app.add_option("--eta-steps", config.eta_steps, "number of sweep points")->capture_default_str();
  app.add_option("--realizations", config.realizations, "realizations (or Langevin paths) per eta")
      ->capture_default_str();
  app.add_option("--seed", config.seed, "base seed")->capture_default_str();
  app.add_option("--max-steps", config.max_steps, "update cap per realization (0: 200 N ceil(ln N))")
      ->capture_default_str();
  app.add_option("--workers", config.workers, "worker threads")->capture_default_str();
  app.add_option("--out", config.out, "output CSV path ('-' for stdout)")->capture_default_str();
  app.add_option("--tol", config.tol, "nash: bisection width in eta")->capture_default_str();
  app.add_option("--dt", config.dt, "langevin: time step")->capture_default_str();
  app.add_option("--max-time", config.max_time, "langevin: time cap")->capture_default_str();

  using Command = std::function<CommandStatus(const RunConfig&, std::ostream&)>;
  const std::map<std::string, std::pair<Command, std::string>> commands{
      {"scatter", {cmd_scatter, "per-realization q_final across an eta sweep"}},
      {"branches", {cmd_branches, "mean-field fixed points across an eta sweep"}},
      {"qmean", {cmd_qmean, "analytic <q> with optional Monte Carlo comparison"}},
      {"nash", {cmd_nash, "locate eta_star where <q> = p"}},
      {"langevin", {cmd_langevin, "Euler-Maruyama basin fractions against quadrature"}},
  };
  for (const auto& [name, entry] : commands) app.add_subcommand(name, entry.second)->fallthrough();
  app.require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  const std::string chosen = app.get_subcommands().front()->get_name();
  try {
    CommandStatus status;
    if (config.out.empty() || config.out == "-") {
      status = commands.at(chosen).first(config, std::cout);
    } else {
      std::ofstream file(config.out);
      if (!file) {
        std::cerr << "error: cannot open " << config.out << " for writing\n";
        return 2;
      }
      status = commands.at(chosen).first(config, file);
      file.flush();
      if (!file) {
        std::cerr << "error: failed writing " << config.out << '\n';
        return 2;
      }
    }
    std::cerr << status.summary << '\n';
    return status.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
