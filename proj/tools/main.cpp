#include "commands.hpp"

#include "levythin/errors.hpp"
#include "levythin/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

enum ExitCode { kOk = 0, kFormat = 2, kDomain = 3, kOptimization = 4 };

std::uint64_t default_seed() {
  if (const char* env = std::getenv("LEVYTHIN_SEED")) {
    try {
      std::size_t used = 0;
      const unsigned long long v = std::stoull(env, &used);
      if (used == std::string(env).size()) return v;
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring malformed LEVYTHIN_SEED '" << env << "'\n";
  }
  return 0;
}

std::string join_args(int argc, char** argv) {
  std::string out;
  for (int i = 0; i < argc; ++i) {
    if (i) out += ' ';
    out += argv[i];
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace levythin::cli;

  CLI::App app{"Levy thinning: pseudo-example generation, training and simulations"};
  app.set_version_flag("--version", std::string(levythin::version()));
  app.require_subcommand(1);

  std::uint64_t seed = default_seed();
  const std::vector<std::string> families{"poisson", "gauss", "gaussian", "gamma", "wishart"};

  ThinArgs thin;
  auto* thin_cmd = app.add_subcommand("thin", "Write B thinned pseudo-examples per input row");
  thin_cmd->add_option("-i,--input", thin.input, "Dataset file")->required();
  thin_cmd->add_option("-o,--output", thin.output, "Pseudo-example file")->required();
  thin_cmd->add_option("-f,--family", thin.family, "Process family")
      ->required()
      ->check(CLI::IsMember(families));
  thin_cmd->add_option("-a,--alpha", thin.alpha, "Thinning fraction in (0, 1]")->required();
  thin_cmd->add_option("-B,--copies", thin.B, "Pseudo-examples per row")->default_val(1);
  thin_cmd->add_option("-t,--t", thin.t, "Constant T overriding the t column");
  thin_cmd->add_option("--sigma", thin.sigma_path, "Covariance file for the gauss family");
  thin_cmd->add_option("-s,--seed", seed, "Seed (default: $LEVYTHIN_SEED or 0)");

  TrainArgs train;
  auto* train_cmd = app.add_subcommand("train", "Fit cross-validated ridge logistic regression");
  train_cmd->add_option("-p,--pseudo", train.pseudo, "Pseudo-example file")->required();
  train_cmd->add_option("--originals", train.originals, "Original examples for calibration")
      ->required();
  train_cmd->add_option("-o,--output", train.output, "Model file")->required();
  train_cmd->add_option("-f,--family", train.family, "Family recorded in the model")
      ->check(CLI::IsMember(families));
  train_cmd->add_option("-l,--lambda", train.lambdas, "Lambda value or grid (descending)")
      ->delimiter(',');
  train_cmd->add_option("--grid-size", train.grid_size, "Automatic grid size")->default_val(50);
  train_cmd->add_option("-k,--folds", train.folds, "Cross-validation folds")->default_val(5);
  train_cmd->add_option("--criterion", train.criterion, "log_loss or error")
      ->check(CLI::IsMember({"log_loss", "error"}));
  train_cmd->add_option("--cv-report", train.cv_report, "CV report path (default <output>.cv.json)");
  train_cmd->add_flag("--no-calibrate", train.no_calibrate, "Skip calibration on originals");
  train_cmd->add_option("-s,--seed", seed, "Fold seed (default: $LEVYTHIN_SEED or 0)");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run an alpha sweep on a simulated design");
  sim_cmd->add_option("--spec", sim.spec, "gauss or poisson")
      ->required()
      ->check(CLI::IsMember({"gauss", "gaussian", "poisson"}));
  sim_cmd->add_option("-o,--output", sim.output, "CSV output")->required();
  sim_cmd->add_option("-n,--n", sim.n_grid, "Training sizes")->delimiter(',');
  sim_cmd->add_option("-a,--alphas", sim.alphas, "Alpha grid in [0, 1]")->delimiter(',');
  sim_cmd->add_option("-B,--copies", sim.B, "Pseudo-examples per row")->default_val(32);
  sim_cmd->add_option("-r,--replicates", sim.replicates, "Replicates per n")->default_val(20);
  sim_cmd->add_option("-j,--threads", sim.threads, "Worker threads (0: hardware)")->default_val(0);
  sim_cmd->add_option("--grid-size", sim.grid_size, "Lambda grid size")->default_val(50);
  sim_cmd->add_option("-k,--folds", sim.folds, "Cross-validation folds")->default_val(5);
  sim_cmd->add_option("--svg", sim.svg, "Also write a line plot");
  sim_cmd->add_flag("--timing", sim.timing, "Record wall times (output is then not reproducible)");
  sim_cmd->add_option("-s,--seed", seed, "Seed (default: $LEVYTHIN_SEED or 0)");

  LimitArgs limit;
  auto* limit_cmd = app.add_subcommand("limit", "Fit the strong-thinning limit model");
  limit_cmd->add_option("--originals", limit.originals, "Dataset file")->required();
  limit_cmd->add_option("-o,--output", limit.output, "Model file")->required();
  limit_cmd->add_option("-f,--family", limit.family, "gauss or poisson")
      ->required()
      ->check(CLI::IsMember({"gauss", "gaussian", "poisson"}));
  limit_cmd->add_option("--ridge", limit.ridge, "Ridge penalty")->default_val(1e-6);
  limit_cmd->add_option("-t,--t", limit.t, "Constant T overriding the t column");
  limit_cmd->add_option("--sigma", limit.sigma_path, "Covariance file for the gauss family");
  limit_cmd->add_flag("--calibrate", limit.calibrate, "Calibrate on the same examples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kDomain;
  }

  const std::string command_line = join_args(argc, argv);
  try {
    if (*thin_cmd) {
      thin.seed = seed;
      return cmd_thin(thin, command_line);
    }
    if (*train_cmd) {
      train.seed = seed;
      return cmd_train(train, command_line);
    }
    if (*sim_cmd) {
      sim.seed = seed;
      return cmd_simulate(sim, command_line);
    }
    if (*limit_cmd) {
      limit.seed = seed;
      return cmd_limit(limit, command_line);
    }
  } catch (const levythin::FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kFormat;
  } catch (const levythin::OptimizationError& e) {
    std::cerr << "optimization error: " << e.what() << '\n';
    return kOptimization;
  } catch (const levythin::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDomain;
  }
  return kOk;
}
