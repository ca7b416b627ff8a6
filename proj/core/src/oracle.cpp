#include "levythin/oracle.hpp"

#include "levythin/distributions.hpp"
#include "levythin/errors.hpp"
#include "levythin/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace levythin {

namespace {

constexpr double kSumTolerance = 1e-12;

void require_count_vector(const Eigen::VectorXd& x) {
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (!(x[j] >= 0.0) || x[j] != std::floor(x[j])) {
      throw SupportError("count vector entry " + std::to_string(j) +
                         " is not a nonnegative integer");
    }
  }
}

// log P(A_t = x | theta) for independent Poisson coordinates with rates t e^theta.
double log_poisson_pmf(const Eigen::VectorXd& theta, const Eigen::VectorXd& x, double t) {
  double out = 0.0;
  const double log_t = std::log(t);
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    const double rate_log = log_t + theta[j];
    out += x[j] * rate_log - std::exp(rate_log) - std::lgamma(x[j] + 1.0);
  }
  return out;
}

// log P(A_{alpha T, j} = m) obtained by summing over the unseen k = x_j - m.
double log_thinned_marginal(double theta_j, double m, double T, double alpha) {
  const double rate = T * std::exp(theta_j);
  const double log_rate = std::log(rate);
  const double log_alpha = std::log(alpha);
  const double log_rest = std::log1p(-alpha);
  const double rest_mean = (1.0 - alpha) * rate;
  double acc = -std::numeric_limits<double>::infinity();
  double peak = acc;
  for (long k = 0; k < 10'000'000; ++k) {
    const double n = m + static_cast<double>(k);
    // Pois(n; rate) * C(n, m): the n! factors cancel.
    const double term = n * log_rate - rate - std::lgamma(m + 1.0) -
                        std::lgamma(static_cast<double>(k) + 1.0) + m * log_alpha +
                        static_cast<double>(k) * log_rest;
    peak = std::max(peak, term);
    const double hi = std::max(acc, term);
    acc = hi + std::log(std::exp(acc - hi) + std::exp(term - hi));
    if (static_cast<double>(k) > rest_mean && term < peak - 60.0) break;
  }
  return acc;
}

Eigen::VectorXd posterior_from_log_likelihoods(const TopicMixture& mix,
                                               const std::vector<std::vector<double>>& loglik) {
  const int K = mix.num_classes();
  Eigen::VectorXd log_post(K);
  for (int k = 0; k < K; ++k) {
    const auto& topics = mix.topics()[static_cast<std::size_t>(k)];
    Eigen::VectorXd terms(static_cast<Eigen::Index>(topics.size()));
    for (std::size_t m = 0; m < topics.size(); ++m) {
      terms[static_cast<Eigen::Index>(m)] =
          std::log(topics[m].weight) + loglik[static_cast<std::size_t>(k)][m];
    }
    log_post[k] = std::log(mix.class_priors()[k]) + log_sum_exp(terms);
  }
  return (log_post.array() - log_sum_exp(log_post)).exp();
}

}  // namespace

TopicMixture::TopicMixture(Eigen::VectorXd class_priors,
                           std::vector<std::vector<WeightedTopic>> topics, LevyFamily family,
                           bool equal_information)
    : priors_(std::move(class_priors)),
      topics_(std::move(topics)),
      family_(std::move(family)),
      equal_information_(equal_information) {
  if (priors_.size() < 1) throw ParameterError("mixture needs at least one class");
  if (static_cast<std::size_t>(priors_.size()) != topics_.size()) {
    throw ShapeError("one topic list per class is required");
  }
  if ((priors_.array() < 0.0).any() || std::abs(priors_.sum() - 1.0) > kSumTolerance) {
    throw ParameterError("class priors must be a probability vector");
  }
  bool have_psi0 = false;
  double psi0 = 0.0;
  for (std::size_t k = 0; k < topics_.size(); ++k) {
    const auto& list = topics_[k];
    if (list.empty()) throw ParameterError("class " + std::to_string(k) + " has no topics");
    double total = 0.0;
    for (const auto& wt : list) {
      if (!(wt.weight > 0.0)) throw ParameterError("topic weights must be positive");
      if (wt.topic.family().kind() != family_.kind() ||
          wt.topic.family().dimension() != family_.dimension()) {
        throw ShapeError("topic family does not match the mixture family");
      }
      total += wt.weight;
      if (equal_information_) {
        const double psi = log_partition(wt.topic);
        if (!have_psi0) {
          psi0 = psi;
          have_psi0 = true;
        } else if (std::abs(psi - psi0) > kSumTolerance) {
          throw DomainError("equal-information mixture has topics with different psi");
        }
      }
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
      throw ParameterError("topic weights of class " + std::to_string(k) + " must sum to 1");
    }
  }
}

Eigen::VectorXd exact_posterior(const TopicMixture& mix, const Eigen::VectorXd& x, double t) {
  if (mix.family().kind() != FamilyKind::poisson) {
    throw ParameterError("exact posteriors are available for the poisson family only");
  }
  if (!(t > 0.0)) throw DomainError("t must be positive");
  if (x.size() != mix.family().dimension()) throw ShapeError("x has the wrong dimension");
  require_count_vector(x);
  std::vector<std::vector<double>> loglik;
  for (const auto& list : mix.topics()) {
    std::vector<double> row;
    for (const auto& wt : list) row.push_back(log_poisson_pmf(wt.topic.theta().vector(), x, t));
    loglik.push_back(std::move(row));
  }
  return posterior_from_log_likelihoods(mix, loglik);
}

Eigen::VectorXd thinned_posterior(const TopicMixture& mix, const Eigen::VectorXd& x_tilde,
                                  double T, double alpha) {
  if (mix.family().kind() != FamilyKind::poisson) {
    throw ParameterError("exact posteriors are available for the poisson family only");
  }
  if (!(T > 0.0)) throw DomainError("T must be positive");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (x_tilde.size() != mix.family().dimension()) throw ShapeError("x has the wrong dimension");
  require_count_vector(x_tilde);
  std::vector<std::vector<double>> loglik;
  for (const auto& list : mix.topics()) {
    std::vector<double> row;
    for (const auto& wt : list) {
      const Eigen::VectorXd& theta = wt.topic.theta().vector();
      double ll = 0.0;
      for (Eigen::Index j = 0; j < theta.size(); ++j) {
        ll += log_thinned_marginal(theta[j], x_tilde[j], T, alpha);
      }
      row.push_back(ll);
    }
    loglik.push_back(std::move(row));
  }
  return posterior_from_log_likelihoods(mix, loglik);
}

std::map<std::vector<int>, double> poisson_thinning_kernel_enumerate(const Eigen::VectorXd& x,
                                                                     double alpha) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
  require_count_vector(x);
  if (x.sum() > 12.0) throw ParameterError("enumeration bound exceeded: ||x||_1 > 12");
  const auto d = static_cast<std::size_t>(x.size());
  std::vector<int> counts(d);
  for (std::size_t j = 0; j < d; ++j) counts[j] = static_cast<int>(x[static_cast<Eigen::Index>(j)]);

  // Integer binomial coefficients up to 12 are exact in double.
  auto choose = [](int n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) c = c * (n - k + i) / i;
    return c;
  };

  std::map<std::vector<int>, double> table;
  std::vector<int> cur(d, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t j = 0; j < d; ++j) {
      p *= choose(counts[j], cur[j]) * std::pow(alpha, cur[j]) *
           std::pow(1.0 - alpha, counts[j] - cur[j]);
    }
    table[cur] = p;
    std::size_t j = 0;
    while (j < d && cur[j] == counts[j]) cur[j++] = 0;
    if (j == d) break;
    ++cur[j];
  }
  return table;
}

std::vector<Eigen::VectorXd> enumerate_count_vectors(int d, int max_total) {
  if (d < 1 || max_total < 0) throw ParameterError("need d >= 1 and max_total >= 0");
  std::vector<Eigen::VectorXd> out;
  Eigen::VectorXd cur = Eigen::VectorXd::Zero(d);
  while (true) {
    out.push_back(cur);
    Eigen::Index j = 0;
    while (j < d) {
      cur[j] += 1.0;
      if (cur.sum() <= max_total) break;
      cur[j] = 0.0;
      ++j;
    }
    if (j == d) break;
  }
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> wishart_split_oracle(const Eigen::MatrixXd& sigma,
                                                                 int T, double alpha, Rng& rng) {
  const auto d = static_cast<int>(sigma.rows());
  if (sigma.cols() != d || !is_symmetric(sigma) || !is_positive_definite(sigma)) {
    throw DomainError("sigma must be symmetric positive-definite");
  }
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
  const double scaled = alpha * T;
  const long head = std::lround(scaled);
  if (std::abs(scaled - static_cast<double>(head)) > 1e-9) {
    throw ParameterError("alpha T must be an integer");
  }
  if (T < d || head < d) throw ParameterError("need T >= d and alpha T >= d");
  const Eigen::MatrixXd L = cholesky(sigma);
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
  Eigen::MatrixXd x_tilde;
  for (int i = 0; i < T; ++i) {
    const Eigen::VectorXd z = L * sample_std_normal_vector(d, rng);
    x.noalias() += z * z.transpose();
    if (i + 1 == head) x_tilde = x;
  }
  return {x, x_tilde};
}

TopicMixture random_poisson_mixture(int K, int d, int max_topics, bool equal_information,
                                    Rng& rng) {
  if (K < 1 || d < 1 || max_topics < 1) throw ParameterError("need K, d, max_topics >= 1");
  auto simplex = [&rng](int n) {
    Eigen::VectorXd w(n);
    for (int i = 0; i < n; ++i) w[i] = sample_gamma(2.0, 1.0, rng);
    w /= w.sum();
    return w;
  };
  const LevyFamily family = LevyFamily::poisson(d);
  Eigen::VectorXd priors = simplex(K);
  std::vector<std::vector<WeightedTopic>> topics(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) {
    const int m = 1 + static_cast<int>(rng.uniform() * max_topics);
    const Eigen::VectorXd w = simplex(m);
    for (int i = 0; i < m; ++i) {
      Eigen::VectorXd theta = sample_std_normal_vector(d, rng);
      if (equal_information) {
        topics[static_cast<std::size_t>(k)].push_back({w[i], Topic::normalized_poisson(theta)});
      } else {
        theta.array() += std::log(0.25 + 3.0 * rng.uniform());
        topics[static_cast<std::size_t>(k)].push_back({w[i], Topic(theta, family)});
      }
    }
  }
  // Re-normalize after the fact so sums are exact to rounding.
  priors /= priors.sum();
  return TopicMixture(priors, std::move(topics), family, equal_information);
}

}  // namespace levythin
