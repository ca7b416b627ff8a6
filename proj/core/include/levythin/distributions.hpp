#pragma once

#include "levythin/rng.hpp"

#include <Eigen/Core>

#include <cstdint>

namespace levythin {

double sample_std_normal(Rng& rng);
Eigen::VectorXd sample_std_normal_vector(int d, Rng& rng);

/// mean + L z with z standard normal.
Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                           const Eigen::MatrixXd& cholesky_factor, Rng& rng);

double sample_exponential(double rate, Rng& rng);

/// Gamma with the given shape (> 0) and scale (> 0).
double sample_gamma(double shape, double scale, Rng& rng);

/// log of a Gamma(shape, 1) variate. Stays finite for tiny shapes where the
/// variate itself underflows.
double sample_log_gamma(double shape, Rng& rng);

double sample_beta(double a, double b, Rng& rng);
double sample_chi_squared(double dof, Rng& rng);
double sample_student_t(double dof, Rng& rng);

std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng);
std::int64_t sample_poisson(double rate, Rng& rng);

/// Wishart(scale, dof) via the Bartlett decomposition; dof may be
/// fractional but must exceed d - 1.
Eigen::MatrixXd sample_wishart(const Eigen::MatrixXd& scale, double dof, Rng& rng);

/// Same, given the lower Cholesky factor of the scale matrix.
Eigen::MatrixXd sample_wishart_factor(const Eigen::MatrixXd& scale_cholesky, double dof,
                                      Rng& rng);

}  // namespace levythin
