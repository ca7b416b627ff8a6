#include "test_support.hpp"

#include "levythin/distributions.hpp"
#include "levythin/errors.hpp"
#include "levythin/limit_loss.hpp"
#include "levythin/linalg.hpp"
#include "levythin/oracle.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

using namespace levythin;
using levythin::testing::numeric_gradient;
using levythin::testing::relative_error;
using levythin::testing::vec_features;

namespace {

Eigen::MatrixXd random_matrix(int rows, int cols, Rng& rng) {
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = sample_std_normal(rng);
  return m;
}

Eigen::VectorXd random_counts(int d, double rate, Rng& rng) {
  Eigen::VectorXd x(d);
  for (int j = 0; j < d; ++j) x[j] = static_cast<double>(sample_poisson(rate, rng));
  return x;
}

std::vector<Example> gaussian_examples(int n, int d, int K, Rng& rng) {
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = sample_std_normal_vector(d, rng);
    x[i % K % d] += 1.5;
    out.push_back({Features(x), i % K, 1.0 + 0.5 * (i % 3)});
  }
  return out;
}

std::vector<Example> poisson_examples(int n, int d, Rng& rng) {
  std::vector<Example> out;
  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x = random_counts(d, 1.5, rng);
    x[i % 2] += 2.0;
    out.push_back({Features(x), i % 2, x.sum()});
  }
  return out;
}

}  // namespace

TEST(LevyIto, Descriptors) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2, 0.1, 0.1, 1;
  const auto g = LevyItoDescriptor::for_family(LevyFamily::gaussian(sigma));
  EXPECT_EQ(g.diffusion, sigma);
  EXPECT_EQ(g.jumps, JumpPart::none);
  EXPECT_EQ(g.drift.norm(), 0.0);
  const auto p = LevyItoDescriptor::for_family(LevyFamily::poisson(3));
  EXPECT_EQ(p.jumps, JumpPart::unit_basis);
  EXPECT_EQ(p.diffusion.norm(), 0.0);
  EXPECT_THROW(LevyItoDescriptor::for_family(LevyFamily::gamma(2)), ParameterError);
  EXPECT_THROW(jump_law_for(LevyFamily::wishart(2)), ParameterError);
}

TEST(JumpLaw, PoissonDecompositionIdentity) {
  const auto law = poisson_jump_law();
  for (int d = 1; d <= 4; ++d) {
    for (const auto& x : enumerate_count_vectors(d, 10)) {
      const Example ex{Features(x), 0, 1.0};
      Eigen::VectorXd mean_jump = Eigen::VectorXd::Zero(d);
      double mass = 0.0;
      for (const auto& atom : law.nu(ex)) {
        mean_jump += atom.probability * Eigen::VectorXd(atom.z);
        mass += atom.probability;
      }
      if (x.sum() > 0) EXPECT_NEAR(mass, 1.0, 1e-12);
      const Eigen::VectorXd rebuilt = law.mu(ex) + law.lambda(ex) * mean_jump;
      EXPECT_LT((rebuilt - x).cwiseAbs().maxCoeff(), 1e-9);
    }
  }
}

TEST(JumpLaw, PoissonFirstJumpByEnumeratingArrivalOrders) {
  // Given the counts, every ordering of the arrivals is equally likely; the
  // first jump lands on word j as often as j opens an ordering.
  const auto law = poisson_jump_law();
  for (const auto& x : enumerate_count_vectors(3, 6)) {
    if (x.sum() == 0) continue;
    std::vector<int> arrivals;
    for (int j = 0; j < 3; ++j) arrivals.insert(arrivals.end(), static_cast<std::size_t>(x[j]), j);
    std::sort(arrivals.begin(), arrivals.end());
    Eigen::Vector3d first = Eigen::Vector3d::Zero();
    double orders = 0;
    do {
      first[arrivals.front()] += 1;
      orders += 1;
    } while (std::next_permutation(arrivals.begin(), arrivals.end()));
    first /= orders;
    const Example ex{Features(x), 0, 1.0};
    EXPECT_DOUBLE_EQ(law.lambda(ex), static_cast<double>(arrivals.size()));
    Eigen::Vector3d nu = Eigen::Vector3d::Zero();
    for (const auto& atom : law.nu(ex)) nu += atom.probability * Eigen::VectorXd(atom.z);
    EXPECT_LT((nu - first).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(LimitLoss, GaussianExamples) {
  const auto law = gaussian_jump_law();
  const Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd beta(2, 2);
  beta << 1, -1, 0, 0;
  const Example ex{vec_features(Eigen::Vector2d(1, 0)), 0, 2.0};
  EXPECT_NEAR(limit_loss(beta, ex, law, sigma), 0.0, 1e-15);
  EXPECT_EQ(limit_loss(Eigen::MatrixXd::Zero(2, 2), ex, law, sigma), 0.0);
  // Centering happens first: a common shift does not matter.
  Eigen::MatrixXd shifted = beta;
  shifted.colwise() += Eigen::Vector2d(3, -2);
  EXPECT_NEAR(limit_loss(shifted, ex, law, sigma), 0.0, 1e-12);
}

TEST(LimitLoss, PoissonIsCountWeightedWordLoss) {
  Rng rng(1, 0);
  const auto law = poisson_jump_law();
  for (int trial = 0; trial < 50; ++trial) {
    const Eigen::VectorXd x = random_counts(5, 1.0, rng);
    Eigen::MatrixXd beta = random_matrix(5, 3, rng);
    center_classes(beta);
    const Example ex{Features(x), trial % 3, 1.0};
    double expected = 0.0;
    for (int j = 0; j < 5; ++j) {
      expected += x[j] * logistic_loss(beta, Eigen::VectorXd::Unit(5, j), ex.y);
    }
    EXPECT_NEAR(limit_loss(beta, ex, law, Eigen::MatrixXd()), expected, 1e-12);
  }
}

TEST(LimitLoss, GradientsMatchFiniteDifferences) {
  Rng rng(2, 0);
  Eigen::MatrixXd sigma(3, 3);
  sigma << 1.5, 0.2, 0.0, 0.2, 1.0, 0.3, 0.0, 0.3, 0.7;
  for (int trial = 0; trial < 100; ++trial) {
    const bool gaussian = trial % 2 == 0;
    const auto law = gaussian ? gaussian_jump_law() : poisson_jump_law();
    const Eigen::MatrixXd s = gaussian ? sigma : Eigen::MatrixXd();
    const Eigen::VectorXd x =
        gaussian ? Eigen::VectorXd(sample_std_normal_vector(3, rng)) : random_counts(3, 2.0, rng);
    const Example ex{Features(x), trial % 3, 0.5 + rng.uniform()};
    const Eigen::MatrixXd beta = random_matrix(3, 3, rng);
    const auto f = [&](const Eigen::MatrixXd& b) { return limit_loss(b, ex, law, s); };
    // The loss sees only the centered part, so compare projected gradients.
    Eigen::MatrixXd numeric = numeric_gradient(f, beta);
    center_classes(numeric);
    const Eigen::MatrixXd analytic = limit_loss_gradient(beta, ex, law, s);
    if (numeric.norm() < 1e-12) {
      EXPECT_LT(analytic.norm(), 1e-8);
    } else {
      EXPECT_LT(relative_error(analytic, numeric), 1e-5);
    }
  }
}

TEST(LimitLoss, ConvexAtMidpoints) {
  Rng rng(3, 0);
  const auto law = poisson_jump_law();
  for (int trial = 0; trial < 100; ++trial) {
    const Example ex{Features(random_counts(4, 2.0, rng)), trial % 2, 1.0};
    const Eigen::MatrixXd a = random_matrix(4, 2, rng), b = random_matrix(4, 2, rng);
    const auto f = [&](const Eigen::MatrixXd& m) { return limit_loss(m, ex, law, Eigen::MatrixXd()); };
    EXPECT_LE(f(0.5 * (a + b)), 0.5 * (f(a) + f(b)) + 1e-9);
  }
}

TEST(LimitObjective, PooledMatchesPerExampleMean) {
  Rng rng(4, 0);
  const auto examples = poisson_examples(30, 6, rng);
  const auto fam = LevyFamily::poisson(6);
  const auto problem = LimitProblem::build(examples, fam);
  const auto law = poisson_jump_law();
  for (int trial = 0; trial < 20; ++trial) {
    const Eigen::MatrixXd beta = random_matrix(6, 2, rng);
    double direct = 0.0;
    Eigen::MatrixXd direct_grad = Eigen::MatrixXd::Zero(6, 2);
    for (const auto& ex : examples) {
      direct += limit_loss(beta, ex, law, Eigen::MatrixXd());
      direct_grad += limit_loss_gradient(beta, ex, law, Eigen::MatrixXd());
    }
    direct /= 30.0;
    direct_grad /= 30.0;
    Eigen::MatrixXd grad;
    Eigen::MatrixXd centered = beta;
    center_classes(centered);
    const double pooled = limit_objective(problem, centered, 0.0, &grad);
    EXPECT_NEAR(pooled, direct, 1e-10);
    EXPECT_LT((grad - direct_grad).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(LimitObjective, GaussianGradientMatchesAggregatedDisplay) {
  // Balanced classes and a common T: the aggregated Gaussian-mixture form
  //   (1/2T) sum_i g_y^{-1} || g_y x_i - T Sigma beta_y ||^2_{Sigma^{-1}}
  // with g_y = K n_y / n has the same projected beta-gradient as the summed
  // limit loss.
  Rng rng(5, 0);
  const int n = 24, d = 3, K = 3;
  Eigen::MatrixXd sigma(d, d);
  sigma << 1.2, 0.3, 0.1, 0.3, 0.9, 0.0, 0.1, 0.0, 0.5;
  const double T = 2.5;
  auto examples = gaussian_examples(n, d, K, rng);
  for (auto& ex : examples) ex.t = T;
  const auto problem = LimitProblem::build(examples, LevyFamily::gaussian(sigma));
  const Eigen::MatrixXd sigma_inv = sigma.inverse();
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::MatrixXd beta = random_matrix(d, K, rng);
    center_classes(beta);
    Eigen::MatrixXd display = Eigen::MatrixXd::Zero(d, K);
    for (const auto& ex : examples) {
      const double gamma = 1.0;  // balanced: K n_y / n
      const Eigen::VectorXd r = gamma * ex.x.vector() - T * sigma * beta.col(ex.y);
      display.col(ex.y) += (1.0 / (2.0 * T)) / gamma * (-2.0 * T) * sigma * sigma_inv * r;
    }
    center_classes(display);
    Eigen::MatrixXd grad;
    limit_objective(problem, beta, 0.0, &grad);
    EXPECT_LT((n * grad - display).cwiseAbs().maxCoeff(), 1e-8);
  }
}

TEST(StrongThinning, GaussianMatchesNormalEquations) {
  Rng rng(6, 0);
  const int d = 4, K = 3;
  Eigen::MatrixXd sigma = Eigen::MatrixXd::Identity(d, d);
  sigma(0, 1) = sigma(1, 0) = 0.4;
  const auto examples = gaussian_examples(60, d, K, rng);
  const double ridge = 0.05;
  const auto model = fit_strong_thinning(examples, LevyFamily::gaussian(sigma), ridge);

  double t_bar = 0.0;
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, K);
  for (const auto& ex : examples) {
    t_bar += ex.t;
    m.col(ex.y) += ex.x.vector();
  }
  t_bar /= 60.0;
  m /= 60.0;
  center_classes(m);
  const Eigen::MatrixXd a = t_bar / K * sigma + ridge * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd expected = a.ldlt().solve(m);
  EXPECT_LT((model.beta - expected).cwiseAbs().maxCoeff(), 1e-8);
  EXPECT_LT(model.beta.rowwise().sum().cwiseAbs().maxCoeff(), 1e-12);
}

TEST(StrongThinning, PoissonMatchesNaiveBayesSingleWord) {
  // Balanced classes and equal t: both models reproduce the per-word class
  // distribution of the training counts.
  Rng rng(7, 0);
  const int d = 6;
  std::vector<Example> examples;
  for (int i = 0; i < 40; ++i) {
    Eigen::VectorXd x = random_counts(d, 2.0, rng) + Eigen::VectorXd::Ones(d);
    x[i % 2] += 3.0;
    examples.push_back({Features(x), i % 2, 10.0});
  }
  const auto model = fit_strong_thinning(examples, LevyFamily::poisson(d), 0.0);
  const auto nb = naive_bayes_poisson_fit(examples, 0.0);
  for (int j = 0; j < d; ++j) {
    const Eigen::VectorXd a = model.beta.row(j).transpose();
    const Eigen::VectorXd b = nb.log_rates.row(j).transpose();
    const Eigen::VectorXd pa = (a.array() - log_sum_exp(a)).exp();
    const Eigen::VectorXd pb = (b.array() - log_sum_exp(b)).exp();
    EXPECT_LT((pa - pb).cwiseAbs().maxCoeff(), 1e-3) << "word " << j;
  }
}

TEST(StrongThinning, Errors) {
  Rng rng(8, 0);
  auto examples = poisson_examples(10, 3, rng);
  for (auto& ex : examples) ex.y = 0;
  EXPECT_THROW(fit_strong_thinning(examples, LevyFamily::poisson(3), 0.0), DegenerateDataError);
  examples[0].y = 2;
  EXPECT_THROW(fit_strong_thinning(examples, LevyFamily::poisson(3), 0.0), DegenerateDataError);
  EXPECT_THROW(fit_strong_thinning(poisson_examples(10, 3, rng), LevyFamily::gamma(3), 0.0),
               ParameterError);
  EXPECT_THROW(fit_strong_thinning({}, LevyFamily::poisson(3), 0.0), DegenerateDataError);
}

TEST(NaiveBayes, Rates) {
  std::vector<Example> ex{{vec_features(Eigen::VectorXd::Constant(1, 2.0)), 0, 1.0},
                          {vec_features(Eigen::VectorXd::Constant(1, 4.0)), 0, 1.0}};
  EXPECT_DOUBLE_EQ(naive_bayes_poisson_fit(ex, 0.0).rates(0, 0), 3.0);

  std::vector<Example> zeros{{vec_features(Eigen::VectorXd::Zero(3)), 0, 2.0},
                             {vec_features(Eigen::VectorXd::Zero(3)), 1, 5.0}};
  const auto nb = naive_bayes_poisson_fit(zeros, 1.0);
  EXPECT_DOUBLE_EQ(nb.rates(0, 0), 1.0 / (2.0 + 3.0));
  EXPECT_DOUBLE_EQ(nb.rates(2, 1), 1.0 / (5.0 + 3.0));
  EXPECT_TRUE(nb.log_rates.allFinite());
}

TEST(AlphaPath, SingleAlphaAndValidation) {
  Rng rng(9, 0);
  const auto examples = gaussian_examples(40, 2, 2, rng);
  const auto fam = LevyFamily::gaussian(Eigen::MatrixXd::Identity(2, 2));
  const auto rows = alpha_path_converges(examples, fam, {0.3}, 200);
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].alpha, 0.3);
  EXPECT_GE(rows[0].distance, 0.0);
  EXPECT_LE(rows[0].distance, 2.0);
  EXPECT_THROW(alpha_path_converges(examples, fam, {0.3}, 50), ParameterError);
  EXPECT_THROW(alpha_path_converges(examples, fam, {1.0}, 200), ParameterError);
  EXPECT_THROW(alpha_path_converges(examples, fam, {}, 200), ParameterError);
}
