#pragma once

#include "levythin/family.hpp"
#include "levythin/logistic.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <vector>

namespace levythin {

enum class JumpPart { none, unit_basis };

/// A_t = b t + W_t + N_t: drift, Wiener covariance, and the jump structure.
struct LevyItoDescriptor {
  Eigen::VectorXd drift;
  Eigen::MatrixXd diffusion;
  JumpPart jumps = JumpPart::none;

  static LevyItoDescriptor for_family(const LevyFamily& family);
};

/// One atom of the first-jump distribution nu_T(.; x).
struct JumpAtom {
  Eigen::SparseVector<double> z;
  double probability = 0.0;
};

/// Conditional drift-plus-diffusion mean mu_T(x), expected jump count
/// lambda_T(x), and first-jump law nu_T(.; x), all given A_T = x.
struct ConditionalJumpLaw {
  std::function<Eigen::VectorXd(const Example&)> mu;
  std::function<double(const Example&)> lambda;
  std::function<std::vector<JumpAtom>(const Example&)> nu;
};

/// Brownian motion: mu_T(x) = x, no jumps.
ConditionalJumpLaw gaussian_jump_law();

/// Poisson word model: mu_T = 0, lambda_T = ||x||_1, nu_T = x_j / ||x||_1 on e_j.
ConditionalJumpLaw poisson_jump_law();

ConditionalJumpLaw jump_law_for(const LevyFamily& family);

/// Strong-thinning loss for one example (beta is centered first):
///   -mu_T(x) . beta_y + (T / 2K) sum_k beta_k' Sigma beta_k
///     + lambda_T(x) sum_z nu(z) loss(beta; z, y).
/// The constant -log K is omitted.
double limit_loss(const Eigen::MatrixXd& beta, const Example& example,
                  const ConditionalJumpLaw& law, const Eigen::MatrixXd& sigma);

Eigen::MatrixXd limit_loss_gradient(const Eigen::MatrixXd& beta, const Example& example,
                                    const ConditionalJumpLaw& law, const Eigen::MatrixXd& sigma);

/// The limit objective with per-example terms pooled: jump atoms sharing the
/// same (z, y) are merged, and the linear and diffusion parts reduce to
/// class sums.
struct LimitProblem {
  struct Atom {
    Eigen::SparseVector<double> z;
    int y = 0;
    double weight = 0.0;  // sum over examples of lambda_T(x) nu_T(z; x)
  };
  Eigen::MatrixXd mu_sum;  // p x K, column k sums mu_T(x_i) over y_i = k
  std::vector<Atom> atoms;
  double t_sum = 0.0;
  std::size_t num_examples = 0;
  Eigen::MatrixXd sigma;  // p x p, empty for pure-jump families
  int num_classes = 0;
  int num_features = 0;

  static LimitProblem build(const std::vector<Example>& examples, const LevyFamily& family);
};

/// Mean limit loss plus (ridge / 2) ||beta||^2.
double limit_objective(const LimitProblem& problem, const Eigen::MatrixXd& beta, double ridge,
                       Eigen::MatrixXd* grad = nullptr);

struct LimitFitOptions {
  double tolerance = 1e-7;
  int max_iterations = 5000;
};

/// beta_{0+}: minimizer of the mean limit loss plus ridge, centered gauge.
/// Gaussian and Poisson families only.
LogisticModel fit_strong_thinning(const std::vector<Example>& examples, const LevyFamily& family,
                                  double ridge_lambda, const LimitFitOptions& options = {});

struct AlphaPathRow {
  double alpha = 0.0;
  double distance = 0.0;  // || beta_a / ||beta_a|| - beta_0 / ||beta_0|| ||_F
};

struct AlphaPathOptions {
  double ridge_lambda = 0.0;  // limit-scale ridge; thinned fits use alpha * ridge_lambda
  std::uint64_t seed = 0;
  double tolerance = 1e-7;
  int max_iterations = 5000;
};

/// Distance between the direction of the thinned fit at each alpha (with B
/// pseudo-examples per original) and the direction of beta_{0+}.
std::vector<AlphaPathRow> alpha_path_converges(const std::vector<Example>& examples,
                                               const LevyFamily& family,
                                               const std::vector<double>& alphas, int B,
                                               const AlphaPathOptions& options = {});

/// Per-class Poisson rates with additive smoothing a:
///   rate_jk = (sum_{y_i = k} x_ij + a) / (sum_{y_i = k} t_i + a d).
struct NaiveBayesPoisson {
  Eigen::MatrixXd rates;      // d x K
  Eigen::MatrixXd log_rates;  // induced linear scores
  Eigen::VectorXd class_counts;
};

NaiveBayesPoisson naive_bayes_poisson_fit(const std::vector<Example>& examples, double smoothing,
                                          int num_classes = 0);

}  // namespace levythin
