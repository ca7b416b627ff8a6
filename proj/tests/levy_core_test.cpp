#include "levythin/errors.hpp"
#include "levythin/family.hpp"
#include "levythin/linalg.hpp"
#include "levythin/oracle.hpp"
#include "levythin/rng.hpp"
#include "levythin/distributions.hpp"

#include <Eigen/Dense>
#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace levythin;

namespace {

Features vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double e : v) x[i++] = e;
  return Features(x);
}

double log_binom_pmf(double k, double n, double p) {
  return std::lgamma(n + 1) - std::lgamma(k + 1) - std::lgamma(n - k + 1) + k * std::log(p) +
         (n - k) * std::log1p(-p);
}

}  // namespace

TEST(LevyFamily, GaussianRequiresPositiveDefiniteSigma) {
  Eigen::MatrixXd bad(2, 2);
  bad << 1, 2, 2, 1;
  EXPECT_THROW(LevyFamily::gaussian(bad), DomainError);
  Eigen::MatrixXd asym(2, 2);
  asym << 2, 0.5, 0, 2;
  EXPECT_THROW(LevyFamily::gaussian(asym), DomainError);
  const auto fam = LevyFamily::gaussian(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_TRUE(fam.has_sigma());
  EXPECT_EQ(fam.dimension(), 3);
}

TEST(LevyFamily, SigmaOnlyForGaussian) {
  for (const auto& fam : {LevyFamily::poisson(2), LevyFamily::gamma(2), LevyFamily::wishart(2)}) {
    EXPECT_FALSE(fam.has_sigma());
    EXPECT_THROW(fam.sigma(), Error);
  }
}

TEST(LevyFamily, DimensionMustBePositive) {
  EXPECT_THROW(LevyFamily::poisson(0), ParameterError);
  EXPECT_THROW(LevyFamily::gamma(-1), ParameterError);
  EXPECT_THROW(LevyFamily::wishart(0), ParameterError);
}

TEST(LevyFamily, FeatureLength) {
  EXPECT_EQ(LevyFamily::poisson(5).feature_length(), 5);
  EXPECT_EQ(LevyFamily::wishart(3).feature_length(), 6);
}

TEST(LevyFamily, NamesRoundTrip) {
  for (auto k : {FamilyKind::poisson, FamilyKind::gaussian, FamilyKind::gamma, FamilyKind::wishart}) {
    EXPECT_EQ(family_kind_from_string(to_string(k)), k);
  }
  EXPECT_EQ(family_kind_from_string("gauss"), FamilyKind::gaussian);
  EXPECT_THROW(family_kind_from_string("cauchy"), ParameterError);
}

TEST(Features, SupportPerFamily) {
  EXPECT_NO_THROW(validate_features(LevyFamily::poisson(2), vec({0, 3})));
  EXPECT_THROW(validate_features(LevyFamily::poisson(2), vec({1.5, 3})), SupportError);
  EXPECT_THROW(validate_features(LevyFamily::poisson(2), vec({-1, 3})), SupportError);
  EXPECT_NO_THROW(validate_features(LevyFamily::gamma(2), vec({0.1, 3})));
  EXPECT_THROW(validate_features(LevyFamily::gamma(2), vec({0.0, 3})), SupportError);
  EXPECT_THROW(validate_features(LevyFamily::gaussian(Eigen::MatrixXd::Identity(2, 2)),
                                 vec({NAN, 0})),
               SupportError);
  EXPECT_THROW(validate_features(LevyFamily::poisson(3), vec({0, 3})), ShapeError);

  Eigen::MatrixXd notpd(2, 2);
  notpd << 1, 0, 0, -1;
  EXPECT_THROW(validate_features(LevyFamily::wishart(2), Features(notpd)), SupportError);
  EXPECT_NO_THROW(validate_features(LevyFamily::wishart(2), Features(Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2)))));
  EXPECT_THROW(validate_features(LevyFamily::wishart(2), vec({1, 0, 1})), SupportError);
}

TEST(Example, WishartNeedsTAtLeastD) {
  const auto fam = LevyFamily::wishart(3);
  Example ex{Features(Eigen::MatrixXd(Eigen::MatrixXd::Identity(3, 3))), 0, 2.5};
  EXPECT_THROW(validate_example(fam, ex), SupportError);
  ex.t = 3.0;
  EXPECT_NO_THROW(validate_example(fam, ex));
  Example neg{vec({1, 2}), 0, 0.0};
  EXPECT_THROW(validate_example(LevyFamily::poisson(2), neg), SupportError);
}

TEST(Features, FlattenRoundTrip) {
  Eigen::MatrixXd m(3, 3);
  m << 4, 1, 2, 1, 5, 3, 2, 3, 6;
  const Features f(m);
  const Eigen::VectorXd flat = f.flatten();
  ASSERT_EQ(flat.size(), 6);
  EXPECT_EQ(flat[0], 4);
  EXPECT_EQ(flat[1], 1);
  EXPECT_EQ(flat[2], 2);
  EXPECT_EQ(flat[3], 5);
  EXPECT_EQ(flat[5], 6);
  EXPECT_EQ(unflatten_symmetric(flat, 3), m);
  EXPECT_THROW(unflatten_symmetric(flat, 2), ShapeError);
}

TEST(LogPartition, Examples) {
  Topic poisson(Features(Eigen::VectorXd(Eigen::VectorXd::Zero(4))), LevyFamily::poisson(4));
  EXPECT_DOUBLE_EQ(log_partition(poisson), 4.0);

  const auto gauss = LevyFamily::gaussian(Eigen::MatrixXd::Identity(3, 3));
  EXPECT_DOUBLE_EQ(log_partition(Topic(Features(Eigen::VectorXd(Eigen::VectorXd::Zero(3))), gauss)), 0.0);

  const Topic gamma = Topic::from_gamma_variances(Eigen::VectorXd::Ones(1));
  EXPECT_DOUBLE_EQ(gamma.theta().vector()[0], -0.5);
  EXPECT_NEAR(log_partition(gamma), 0.0, 1e-15);
}

TEST(LogPartition, GaussianMeanConversion) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 2, 0.5, 0.5, 1;
  const auto fam = LevyFamily::gaussian(sigma);
  Eigen::VectorXd mu(2);
  mu << 1, -2;
  const Topic topic = Topic::from_gaussian_mean(mu, fam);
  EXPECT_LT((sigma * topic.theta().vector() - mu).norm(), 1e-12);
  // psi = mu' Sigma^{-1} mu / 2.
  EXPECT_NEAR(log_partition(topic), 0.5 * mu.dot(sigma.ldlt().solve(mu)), 1e-12);
}

TEST(Topic, DomainEnforcedOnConstruction) {
  Eigen::VectorXd pos(2);
  pos << -1, 0.5;
  EXPECT_THROW(Topic(Features(pos), LevyFamily::gamma(2)), DomainError);
  Eigen::MatrixXd notnd = Eigen::MatrixXd::Identity(2, 2);
  EXPECT_THROW(Topic(Features(notnd), LevyFamily::wishart(2)), DomainError);
  Eigen::MatrixXd nd = -Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NO_THROW(Topic(Features(nd), LevyFamily::wishart(2)));
  // log det(-2 Theta) with Theta = -I/2 is 0.
  EXPECT_NEAR(log_partition(Topic(Features(Eigen::MatrixXd(-0.5 * Eigen::MatrixXd::Identity(2, 2))),
                                  LevyFamily::wishart(2))),
              0.0, 1e-14);
}

TEST(Topic, EqualInformationPoisson) {
  Eigen::VectorXd theta(3);
  theta << 0.3, -1.0, 2.0;
  EXPECT_THROW(Topic(Features(theta), LevyFamily::poisson(3), true), DomainError);
  const Topic t = Topic::normalized_poisson(theta);
  EXPECT_TRUE(t.equal_information());
  EXPECT_NEAR(t.theta().vector().array().exp().sum(), 1.0, 1e-12);
}

TEST(LogPartition, ConvexAtMidpoints) {
  Rng rng(11, 0);
  Eigen::MatrixXd sigma(3, 3);
  sigma << 2, 0.3, 0.1, 0.3, 1, 0.2, 0.1, 0.2, 1.5;
  const auto gauss = LevyFamily::gaussian(sigma);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::VectorXd a = sample_std_normal_vector(3, rng);
    const Eigen::VectorXd b = sample_std_normal_vector(3, rng);
    const Eigen::VectorXd m = 0.5 * (a + b);
    auto poisson = [](const Eigen::VectorXd& th) {
      return log_partition(Topic(Features(th), LevyFamily::poisson(3)));
    };
    EXPECT_LE(poisson(m), 0.5 * (poisson(a) + poisson(b)) + 1e-9);
    auto g = [&](const Eigen::VectorXd& th) { return log_partition(Topic(Features(th), gauss)); };
    EXPECT_LE(g(m), 0.5 * (g(a) + g(b)) + 1e-9);
    const Eigen::VectorXd ga = -(a.array().exp() + 0.01);
    const Eigen::VectorXd gb = -(b.array().exp() + 0.01);
    auto gm = [](const Eigen::VectorXd& th) {
      return log_partition(Topic(Features(th), LevyFamily::gamma(3)));
    };
    EXPECT_LE(gm(0.5 * (ga + gb)), 0.5 * (gm(ga) + gm(gb)) + 1e-9);
    const Eigen::MatrixXd wa = -sample_wishart(Eigen::MatrixXd::Identity(2, 2), 4.0, rng);
    const Eigen::MatrixXd wb = -sample_wishart(Eigen::MatrixXd::Identity(2, 2), 4.0, rng);
    auto w = [](const Eigen::MatrixXd& th) {
      return log_partition(Topic(Features(th), LevyFamily::wishart(2)));
    };
    EXPECT_LE(w(0.5 * (wa + wb)), 0.5 * (w(wa) + w(wb)) + 1e-9);
  }
}

TEST(ThinningDensity, PoissonExamples) {
  const auto fam = LevyFamily::poisson(1);
  EXPECT_NEAR(thinning_log_density(fam, vec({2}), vec({1}), 1.0, 0.5).log_density, std::log(0.5),
              1e-12);
  EXPECT_NEAR(thinning_log_density(fam, vec({3}), vec({3}), 1.0, 0.5).log_density,
              std::log(0.125), 1e-12);
  EXPECT_TRUE(thinning_log_density(fam, vec({3}), vec({3}), 1.0, 0.5).normalized);
}

TEST(ThinningDensity, PoissonMatchesProductBinomialExhaustively) {
  for (int d = 1; d <= 3; ++d) {
    const auto fam = LevyFamily::poisson(d);
    for (const auto& x : enumerate_count_vectors(d, 6)) {
      for (double alpha : {0.25, 0.5, 0.75}) {
        double total = 0.0;
        for (const auto& [xt, p] : poisson_thinning_kernel_enumerate(x, alpha)) {
          Eigen::VectorXd xtv(d);
          double expected = 0.0;
          for (int j = 0; j < d; ++j) {
            xtv[j] = xt[static_cast<std::size_t>(j)];
            expected += log_binom_pmf(xtv[j], x[j], alpha);
          }
          // t is irrelevant for the Poisson kernel.
          for (double t : {0.7, 3.0}) {
            const double got = thinning_log_density(fam, Features(x), Features(xtv), t, alpha).log_density;
            EXPECT_NEAR(got, expected, 1e-12);
          }
          total += std::exp(expected);
        }
        EXPECT_NEAR(total, 1.0, 1e-10);
      }
    }
  }
}

TEST(ThinningDensity, GammaArcsineExample) {
  const auto fam = LevyFamily::gamma(1);
  const double got = thinning_log_density(fam, vec({1.0}), vec({0.5}), 2.0, 0.5).log_density;
  EXPECT_NEAR(got, std::log(1.0 / (std::numbers::pi * 0.5)), 1e-12);
  EXPECT_NEAR(got, -0.4516, 1e-4);
}

TEST(ThinningDensity, GammaIsBetaOfRatios) {
  const auto fam = LevyFamily::gamma(2);
  const double t = 5.0, alpha = 0.3;
  const double a = alpha * t / 2, b = (1 - alpha) * t / 2;
  auto log_beta_pdf = [&](double u) {
    return std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + (a - 1) * std::log(u) +
           (b - 1) * std::log1p(-u);
  };
  const double expected =
      log_beta_pdf(0.4 / 2.0) + log_beta_pdf(1.5 / 3.0) - std::log(2.0) - std::log(3.0);
  EXPECT_NEAR(thinning_log_density(fam, vec({2, 3}), vec({0.4, 1.5}), t, alpha).log_density,
              expected, 1e-12);
}

TEST(ThinningDensity, GaussianIsConditionalNormal) {
  Eigen::MatrixXd sigma(2, 2);
  sigma << 1.5, 0.4, 0.4, 0.8;
  const auto fam = LevyFamily::gaussian(sigma);
  const double t = 3.0, alpha = 0.4;
  Eigen::VectorXd x(2), xt(2);
  x << 1.0, -2.0;
  xt << 0.7, 0.1;
  const Eigen::MatrixXd cov = alpha * (1 - alpha) * t * sigma;
  const Eigen::VectorXd r = xt - alpha * x;
  const double expected = -std::log(2 * std::numbers::pi) - 0.5 * std::log(cov.determinant()) -
                          0.5 * r.dot(cov.inverse() * r);
  EXPECT_NEAR(thinning_log_density(fam, Features(x), Features(xt), t, alpha).log_density, expected,
              1e-12);
}

TEST(ThinningDensity, WishartIsUnnormalizedMatrixBeta) {
  const auto fam = LevyFamily::wishart(2);
  const Eigen::MatrixXd x = 4.0 * Eigen::MatrixXd::Identity(2, 2);
  Eigen::MatrixXd a(2, 2), b(2, 2);
  a << 1.0, 0.2, 0.2, 1.5;
  b << 2.0, -0.3, -0.3, 1.0;
  const double t = 10, alpha = 0.5;
  const auto da = thinning_log_density(fam, Features(x), Features(a), t, alpha);
  const auto db = thinning_log_density(fam, Features(x), Features(b), t, alpha);
  EXPECT_FALSE(da.normalized);
  const double expected = 1.0 * (std::log(a.determinant()) - std::log(b.determinant())) +
                          1.0 * (std::log((x - a).determinant()) - std::log((x - b).determinant()));
  EXPECT_NEAR(da.log_density - db.log_density, expected, 1e-12);
  EXPECT_THROW(thinning_log_density(fam, Features(x), Features(Eigen::MatrixXd(5.0 * Eigen::MatrixXd::Identity(2, 2))), t, alpha),
               SupportError);
}

TEST(ThinningDensity, RejectsBadAlphaAndSupport) {
  const auto fam = LevyFamily::poisson(1);
  EXPECT_THROW(thinning_log_density(fam, vec({2}), vec({1}), 1.0, 0.0), ParameterError);
  EXPECT_THROW(thinning_log_density(fam, vec({2}), vec({1}), 1.0, 1.0), ParameterError);
  EXPECT_THROW(thinning_log_density(fam, vec({2}), vec({3}), 1.0, 0.5), SupportError);
  EXPECT_THROW(thinning_log_density(LevyFamily::gamma(1), vec({2}), vec({2}), 1.0, 0.5),
               SupportError);
}
