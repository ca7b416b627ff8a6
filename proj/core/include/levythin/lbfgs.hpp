#pragma once

#include <Eigen/Core>

#include <functional>

namespace levythin {

struct LbfgsOptions {
  double gradient_tolerance = 1e-7;  // on the max-norm
  int max_iterations = 5000;
  int history = 10;
};

struct LbfgsResult {
  Eigen::VectorXd x;
  double value = 0.0;
  double gradient_norm = 0.0;  // max-norm at x
  int iterations = 0;
  bool converged = false;
};

/// Fills grad and returns the objective value at x.
using Objective = std::function<double(const Eigen::VectorXd& x, Eigen::VectorXd& grad)>;

/// Deterministic limited-memory BFGS with Armijo backtracking.
LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options = {});

}  // namespace levythin
