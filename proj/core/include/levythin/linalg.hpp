#pragma once

#include <Eigen/Core>

namespace levythin {

/// Lower Cholesky factor L with m = L L'. Throws DecompositionError if m is
/// not symmetric positive-definite.
Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m);

/// Symmetric square root via eigendecomposition; m must be symmetric PD.
Eigen::MatrixXd matrix_sqrt_sym_pd(const Eigen::MatrixXd& m);

/// Inverse of the symmetric square root.
Eigen::MatrixXd matrix_inv_sqrt_sym_pd(const Eigen::MatrixXd& m);

bool is_symmetric(const Eigen::MatrixXd& m, double tol = 1e-10);
bool is_positive_definite(const Eigen::MatrixXd& m);

/// log det of a symmetric PD matrix; throws DecompositionError otherwise.
double log_det_pd(const Eigen::MatrixXd& m);

/// log of the multivariate gamma function Gamma_d(a).
double log_multivariate_gamma(int d, double a);

/// Numerically stable log(sum(exp(v))).
double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v);

}  // namespace levythin
