#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace levythin::cli {

struct ThinArgs {
  std::string input;
  std::string output;
  std::string family;
  std::string sigma_path;
  double alpha = 0.5;
  int B = 1;
  std::optional<double> t;
  std::uint64_t seed = 0;
};

struct TrainArgs {
  std::string pseudo;
  std::string originals;
  std::string output;
  std::string family;
  std::string cv_report;
  std::vector<double> lambdas;
  int grid_size = 50;
  int folds = 5;
  std::string criterion = "log_loss";
  bool no_calibrate = false;
  std::uint64_t seed = 0;
};

struct SimulateArgs {
  std::string spec;
  std::string output;
  std::string svg;
  std::vector<std::size_t> n_grid{100};
  std::vector<double> alphas{0.0, 0.05, 0.1, 0.2, 0.35, 0.5, 0.75, 1.0};
  int B = 32;
  int replicates = 20;
  int threads = 0;
  int grid_size = 50;
  int folds = 5;
  bool timing = false;
  std::uint64_t seed = 0;
};

struct LimitArgs {
  std::string originals;
  std::string output;
  std::string family;
  std::string sigma_path;
  double ridge = 1e-6;
  bool calibrate = false;
  std::optional<double> t;
  std::uint64_t seed = 0;
};

int cmd_thin(const ThinArgs& args, const std::string& command_line);
int cmd_train(const TrainArgs& args, const std::string& command_line);
int cmd_simulate(const SimulateArgs& args, const std::string& command_line);
int cmd_limit(const LimitArgs& args, const std::string& command_line);

}  // namespace levythin::cli
