#include "test_support.hpp"

#include "levythin/distributions.hpp"
#include "levythin/errors.hpp"
#include "levythin/linalg.hpp"
#include "levythin/rng.hpp"
#include "levythin/thinning.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <set>

using namespace levythin;
using levythin::testing::moments;

namespace {

constexpr int kDraws = 100000;

// |mean - expected| within 4 standard errors.
void expect_mean(const std::vector<double>& v, double expected) {
  const auto m = moments(v);
  EXPECT_NEAR(m.mean, expected, 4.0 * m.se()) << "variance " << m.variance;
}

}  // namespace

TEST(Rng, SameStateSameSequence) {
  Rng a(42, 7), b(42, 7), c(42, 8);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    differs |= va != c.next_u64();
  }
  EXPECT_TRUE(differs);
}

TEST(Rng, UniformRanges) {
  Rng rng(3, 0);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const double v = rng.uniform_open();
    ASSERT_GT(v, 0.0);
    ASSERT_LT(v, 1.0);
  }
}

TEST(Rng, HashCombineSeparatesInputs) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t a = 0; a < 50; ++a) {
    for (std::uint64_t b = 0; b < 50; ++b) seen.insert(hash_combine(1, a, b));
  }
  EXPECT_EQ(seen.size(), 2500u);
}

TEST(Samplers, GammaMoments) {
  Rng rng(1, 0);
  for (double shape : {0.3, 1.0, 4.5}) {
    std::vector<double> v(kDraws);
    for (auto& x : v) x = sample_gamma(shape, 2.0, rng);
    expect_mean(v, 2.0 * shape);
    const auto m = moments(v);
    EXPECT_NEAR(m.variance / (4.0 * shape), 1.0, 0.05);
  }
  EXPECT_THROW(sample_gamma(0.0, 1.0, rng), ParameterError);
}

TEST(Samplers, LogGammaSmallShape) {
  Rng rng(2, 0);
  std::vector<double> v(kDraws);
  for (auto& x : v) x = std::exp(sample_log_gamma(0.05, rng));
  expect_mean(v, 0.05);
}

TEST(Samplers, BetaMoments) {
  Rng rng(3, 0);
  for (auto [a, b] : {std::pair{0.5, 0.5}, std::pair{0.05, 2.0}, std::pair{3.0, 7.0}}) {
    std::vector<double> v(kDraws);
    for (auto& x : v) {
      x = sample_beta(a, b, rng);
      ASSERT_GE(x, 0.0);
      ASSERT_LE(x, 1.0);
    }
    expect_mean(v, a / (a + b));
  }
}

TEST(Samplers, BinomialMoments) {
  Rng rng(4, 0);
  for (auto [n, p] : {std::pair<std::int64_t, double>{5, 0.3}, {200, 0.5}, {10000, 0.01}}) {
    std::vector<double> v(kDraws);
    for (auto& x : v) x = static_cast<double>(sample_binomial(n, p, rng));
    expect_mean(v, static_cast<double>(n) * p);
    EXPECT_NEAR(moments(v).variance / (static_cast<double>(n) * p * (1 - p)), 1.0, 0.05);
  }
  EXPECT_EQ(sample_binomial(7, 0.0, rng), 0);
  EXPECT_EQ(sample_binomial(7, 1.0, rng), 7);
}

TEST(Samplers, PoissonMoments) {
  Rng rng(5, 0);
  for (double rate : {0.2, 3.0, 40.0, 1000.0}) {
    std::vector<double> v(kDraws);
    for (auto& x : v) x = static_cast<double>(sample_poisson(rate, rng));
    expect_mean(v, rate);
    EXPECT_NEAR(moments(v).variance / rate, 1.0, 0.05);
  }
  EXPECT_EQ(sample_poisson(0.0, rng), 0);
  EXPECT_THROW(sample_poisson(-1.0, rng), ParameterError);
}

TEST(Samplers, StudentAndChiSquared) {
  Rng rng(6, 0);
  std::vector<double> t(kDraws), c(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    t[static_cast<std::size_t>(i)] = sample_student_t(6.0, rng);
    c[static_cast<std::size_t>(i)] = sample_chi_squared(3.0, rng);
  }
  expect_mean(t, 0.0);
  EXPECT_NEAR(moments(t).variance, 1.5, 0.08);
  expect_mean(c, 3.0);
}

TEST(Samplers, ExponentialRate) {
  Rng rng(7, 0);
  std::vector<double> v(kDraws);
  for (auto& x : v) x = sample_exponential(3.0, rng);
  expect_mean(v, 1.0 / 3.0);
}

TEST(Samplers, WishartMean) {
  Rng rng(8, 0);
  Eigen::MatrixXd scale(2, 2);
  scale << 2.0, 0.5, 0.5, 1.0;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd w = sample_wishart(scale, 5.5, rng);
    ASSERT_TRUE(is_positive_definite(w));
    sum += w;
  }
  EXPECT_LT(((sum / n) - 5.5 * scale).norm() / (5.5 * scale).norm(), 0.02);
  EXPECT_THROW(sample_wishart(scale, 0.5, rng), ParameterError);
}

TEST(Samplers, MultivariateNormalCovariance) {
  Rng rng(9, 0);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, 0.6, 0.6, 2.0;
  const Eigen::MatrixXd l = cholesky(sigma);
  Eigen::Vector2d mean(1.0, -1.0);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd r = sample_mvn(mean, l, rng) - mean;
    acc += r * r.transpose();
  }
  EXPECT_LT((acc / kDraws - sigma).norm(), 0.03);
}

TEST(Linalg, SquareRoots) {
  Eigen::MatrixXd m(3, 3);
  m << 4, 1, 0.5, 1, 3, 0.2, 0.5, 0.2, 2;
  const Eigen::MatrixXd r = matrix_sqrt_sym_pd(m);
  EXPECT_LT((r * r - m).norm(), 1e-12);
  EXPECT_LT((r - r.transpose()).norm(), 1e-14);
  const Eigen::MatrixXd ri = matrix_inv_sqrt_sym_pd(m);
  EXPECT_LT((ri * m * ri - Eigen::MatrixXd::Identity(3, 3)).norm(), 1e-12);
  const Eigen::MatrixXd l = cholesky(m);
  EXPECT_LT((l * l.transpose() - m).norm(), 1e-12);
  EXPECT_NEAR(log_det_pd(m), std::log(m.determinant()), 1e-12);
  EXPECT_THROW(cholesky(-m), DecompositionError);
  EXPECT_THROW(cholesky(Eigen::MatrixXd::Ones(2, 3)), ShapeError);
}

TEST(Linalg, SpecialFunctions) {
  EXPECT_NEAR(log_multivariate_gamma(1, 3.5), std::lgamma(3.5), 1e-14);
  // Gamma_2(a) = sqrt(pi) Gamma(a) Gamma(a - 1/2).
  EXPECT_NEAR(log_multivariate_gamma(2, 3.0),
              0.5 * std::log(M_PI) + std::lgamma(3.0) + std::lgamma(2.5), 1e-12);
  Eigen::Vector3d v(1000.0, 1000.0, -5.0);
  EXPECT_NEAR(log_sum_exp(v), 1000.0 + std::log(2.0 + std::exp(-1005.0)), 1e-12);
}

TEST(ThinPoisson, BinomialCountsBelowX) {
  Rng rng(10, 0);
  Eigen::VectorXd x(3);
  x << 0, 5, 40;
  std::vector<double> c2(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd xt = thin_poisson(x, 0.3, rng);
    ASSERT_EQ(xt[0], 0.0);
    ASSERT_LE(xt[1], 5.0);
    ASSERT_EQ(xt[2], std::floor(xt[2]));
    c2[static_cast<std::size_t>(i)] = xt[2];
  }
  expect_mean(c2, 12.0);
  EXPECT_NEAR(moments(c2).variance, 40 * 0.3 * 0.7, 0.3);
  EXPECT_EQ(thin_poisson(x, 1.0, rng), x);
  Eigen::VectorXd frac(1);
  frac << 1.5;
  EXPECT_THROW(thin_poisson(frac, 0.5, rng), SupportError);
  EXPECT_THROW(thin_poisson(x, 0.0, rng), ParameterError);
  EXPECT_THROW(thin_poisson(x, 1.5, rng), ParameterError);
}

TEST(ThinGaussian, ConditionalMoments) {
  Rng rng(11, 0);
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.0, 0.4, 0.4, 0.5;
  Eigen::Vector2d x(2.0, -1.0);
  const double alpha = 0.3, t = 4.0;
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(2);
  Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(2, 2);
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd r = thin_gaussian(x, alpha, t, sigma, rng) - alpha * x;
    sum += r;
    acc += r * r.transpose();
  }
  const Eigen::MatrixXd cov = alpha * (1 - alpha) * t * sigma;
  EXPECT_LT((sum / kDraws).norm(), 4.0 * std::sqrt(cov.trace() / kDraws));
  EXPECT_LT((acc / kDraws - cov).norm() / cov.norm(), 0.02);
  EXPECT_THROW(thin_gaussian(x, alpha, 0.0, sigma, rng), ParameterError);
  EXPECT_THROW(thin_gaussian(Eigen::Vector3d::Zero(), alpha, t, sigma, rng), ShapeError);
}

TEST(ThinGamma, FractionsAreBeta) {
  Rng rng(12, 0);
  Eigen::Vector2d x(2.0, 0.5);
  const double alpha = 0.25, t = 3.0;
  std::vector<double> f(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    const Eigen::VectorXd xt = thin_gamma(x, alpha, t, rng);
    ASSERT_GT(xt[0], 0.0);
    ASSERT_LT(xt[0], x[0]);
    ASSERT_GT(xt[1], 0.0);
    ASSERT_LT(xt[1], x[1]);
    f[static_cast<std::size_t>(i)] = xt[0] / x[0];
  }
  const double a = alpha * t / 2, b = (1 - alpha) * t / 2;
  expect_mean(f, alpha);
  EXPECT_NEAR(moments(f).variance, a * b / ((a + b) * (a + b) * (a + b + 1)), 0.002);
  EXPECT_THROW(thin_gamma(Eigen::Vector2d(1.0, 0.0), alpha, t, rng), SupportError);
}

TEST(ThinGamma, TinyShapesStayInsideSupport) {
  Rng rng(13, 0);
  Eigen::VectorXd x = Eigen::VectorXd::Constant(4, 1.0);
  for (int i = 0; i < 10000; ++i) {
    const Eigen::VectorXd xt = thin_gamma(x, 0.01, 0.5, rng);
    ASSERT_TRUE((xt.array() > 0.0).all());
    ASSERT_TRUE((xt.array() < 1.0).all());
  }
}

TEST(ThinWishart, MeanAndSupport) {
  Rng rng(14, 0);
  Eigen::MatrixXd x(2, 2);
  x << 3.0, 1.0, 1.0, 2.0;
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(2, 2);
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const Eigen::MatrixXd xt = thin_wishart(x, 0.4, 10.0, rng);
    ASSERT_TRUE(is_positive_definite(xt));
    ASSERT_TRUE(is_positive_definite(x - xt));
    ASSERT_LT((xt - xt.transpose()).norm(), 1e-12);
    sum += xt;
  }
  EXPECT_LT((sum / n - 0.4 * x).norm() / (0.4 * x).norm(), 0.02);
  EXPECT_THROW(thin_wishart(x, 0.1, 10.0, rng), ParameterError);
  EXPECT_THROW(thin_wishart(x, 0.5, 1.5, rng), ParameterError);
  EXPECT_THROW(thin_wishart(-x, 0.5, 10.0, rng), SupportError);
  EXPECT_EQ(thin_wishart(x, 1.0, 10.0, rng), x);
}

TEST(PseudoExamples, GroupedAndReproducible) {
  std::vector<Example> data;
  for (int i = 0; i < 5; ++i) {
    Eigen::VectorXd x(3);
    x << i, 2 * i + 1, 7;
    data.push_back({Features(x), i % 2, 10.0});
  }
  ThinningConfig cfg;
  cfg.alpha = 0.5;
  cfg.B = 4;
  cfg.seed = {99, 0};
  const auto fam = LevyFamily::poisson(3);
  const auto a = generate_pseudo_examples(data, cfg, fam);
  const auto b = generate_pseudo_examples(data, cfg, fam);
  ASSERT_EQ(a.size(), 20u);
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].origin_id, k / 4);
    EXPECT_EQ(a[k].y, data[k / 4].y);
    EXPECT_DOUBLE_EQ(a[k].t, 5.0);
    EXPECT_DOUBLE_EQ(a[k].alpha, 0.5);
    EXPECT_TRUE(a[k].x == b[k].x);
  }
  // Draws for an origin do not depend on the other rows.
  const std::vector<Example> prefix(data.begin(), data.begin() + 3);
  const auto d = generate_pseudo_examples(prefix, cfg, fam);
  for (std::size_t k = 0; k < d.size(); ++k) EXPECT_TRUE(d[k].x == a[k].x);

  cfg.seed = {100, 0};
  const auto e = generate_pseudo_examples(data, cfg, fam);
  bool differs = false;
  for (std::size_t k = 0; k < e.size(); ++k) differs |= !(e[k].x == a[k].x);
  EXPECT_TRUE(differs);
}

TEST(PseudoExamples, IdentityAtAlphaOne) {
  std::vector<Example> data{{Features(Eigen::VectorXd(Eigen::Vector2d(1.5, -2.0))), 1, 2.0}};
  ThinningConfig cfg;
  cfg.alpha = 1.0;
  cfg.B = 3;
  const auto out =
      generate_pseudo_examples(data, cfg, LevyFamily::gaussian(Eigen::MatrixXd::Identity(2, 2)));
  for (const auto& pe : out) EXPECT_TRUE(pe.x == data[0].x);
}

TEST(PseudoExamples, ErrorsNameTheRow) {
  std::vector<Example> data{{Features(Eigen::VectorXd(Eigen::Vector2d(1, 2))), 0, 1.0},
                            {Features(Eigen::VectorXd(Eigen::Vector2d(1.5, 2))), 1, 1.0}};
  ThinningConfig cfg;
  try {
    generate_pseudo_examples(data, cfg, LevyFamily::poisson(2));
    FAIL() << "expected SupportError";
  } catch (const SupportError& e) {
    EXPECT_NE(std::string(e.what()).find("example 1"), std::string::npos);
  }
  cfg.B = 0;
  EXPECT_THROW(generate_pseudo_examples(data, cfg, LevyFamily::poisson(2)), ParameterError);
  cfg.B = 1;
  cfg.alpha = 0.0;
  EXPECT_THROW(generate_pseudo_examples(data, cfg, LevyFamily::poisson(2)), ParameterError);
}

TEST(Marginals, PoissonThinnedMatchesShorterSlice) {
  // Generate at T then thin versus generate at alpha T: same Poisson law.
  Rng rng(15, 0);
  const double rate = 2.5, T = 4.0, alpha = 0.3;
  std::vector<double> thinned(kDraws), direct(kDraws);
  for (int i = 0; i < kDraws; ++i) {
    Eigen::VectorXd x(1);
    x << static_cast<double>(sample_poisson(rate * T, rng));
    thinned[static_cast<std::size_t>(i)] = thin_poisson(x, alpha, rng)[0];
    direct[static_cast<std::size_t>(i)] = static_cast<double>(sample_poisson(rate * alpha * T, rng));
  }
  const auto a = moments(thinned), b = moments(direct);
  EXPECT_NEAR(a.mean, b.mean, 4.0 * std::sqrt(a.se() * a.se() + b.se() * b.se()));
  EXPECT_NEAR(a.variance / b.variance, 1.0, 0.04);
}
