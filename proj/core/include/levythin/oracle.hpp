#pragma once

#include "levythin/family.hpp"
#include "levythin/rng.hpp"

#include <Eigen/Core>

#include <map>
#include <utility>
#include <vector>

namespace levythin {

struct WeightedTopic {
  double weight = 1.0;
  Topic topic;
};

/// Finite-support prior over (Y, theta): class priors and, per class, a
/// weighted list of topics.
class TopicMixture {
 public:
  TopicMixture(Eigen::VectorXd class_priors, std::vector<std::vector<WeightedTopic>> topics,
               LevyFamily family, bool equal_information = false);

  const Eigen::VectorXd& class_priors() const noexcept { return priors_; }
  const std::vector<std::vector<WeightedTopic>>& topics() const noexcept { return topics_; }
  const LevyFamily& family() const noexcept { return family_; }
  bool equal_information() const noexcept { return equal_information_; }
  int num_classes() const noexcept { return static_cast<int>(priors_.size()); }

 private:
  Eigen::VectorXd priors_;
  std::vector<std::vector<WeightedTopic>> topics_;
  LevyFamily family_;
  bool equal_information_;
};

/// P(Y = y | A_t = x) by direct summation over topics with exact Poisson pmfs.
Eigen::VectorXd exact_posterior(const TopicMixture& mix, const Eigen::VectorXd& x, double t);

/// P(Y = y | A_{alpha T} = x_tilde), computed from the time-T model by
/// summing the Poisson pmf at T against the binomial thinning kernel over
/// all x >= x_tilde (truncated once the tail is below double precision).
Eigen::VectorXd thinned_posterior(const TopicMixture& mix, const Eigen::VectorXd& x_tilde,
                                  double T, double alpha);

/// Exhaustive product-binomial table of the Poisson thinning kernel.
/// Requires ||x||_1 <= 12.
std::map<std::vector<int>, double> poisson_thinning_kernel_enumerate(const Eigen::VectorXd& x,
                                                                     double alpha);

/// All nonnegative integer vectors of length d with total <= max_total.
std::vector<Eigen::VectorXd> enumerate_count_vectors(int d, int max_total);

/// Joint draw of (A_T, A_{alpha T}) for the Wishart scatter embedding: the
/// sum of z z' over T Gaussian draws, and over the first alpha T of them.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> wishart_split_oracle(const Eigen::MatrixXd& sigma,
                                                                 int T, double alpha, Rng& rng);

/// Random Poisson mixture with K classes, d words and up to max_topics
/// topics per class. equal_information normalizes every topic to psi = 1;
/// otherwise topic scales are spread so that psi varies.
TopicMixture random_poisson_mixture(int K, int d, int max_topics, bool equal_information,
                                    Rng& rng);

}  // namespace levythin
