#include "levythin/linalg.hpp"

#include "levythin/errors.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>

namespace levythin {

namespace {

void require_square_symmetric(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw ShapeError(std::string(what) + ": matrix must be square and non-empty");
  }
  if (!is_symmetric(m)) {
    throw DecompositionError(std::string(what) + ": matrix is not symmetric");
  }
}

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pd_eigen(const Eigen::MatrixXd& m,
                                                        const char* what) {
  require_square_symmetric(m, what);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m);
  if (es.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 0.0) {
    throw DecompositionError(std::string(what) + ": matrix is not positive-definite");
  }
  return es;
}

}  // namespace

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_positive_definite(const Eigen::MatrixXd& m) {
  if (m.rows() != m.cols() || m.rows() == 0 || !is_symmetric(m)) return false;
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

Eigen::MatrixXd cholesky(const Eigen::MatrixXd& m) {
  require_square_symmetric(m, "cholesky");
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    throw DecompositionError("cholesky: matrix is not positive-definite");
  }
  return llt.matrixL();
}

Eigen::MatrixXd matrix_sqrt_sym_pd(const Eigen::MatrixXd& m) {
  auto es = pd_eigen(m, "matrix_sqrt_sym_pd");
  return es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal() *
         es.eigenvectors().transpose();
}

Eigen::MatrixXd matrix_inv_sqrt_sym_pd(const Eigen::MatrixXd& m) {
  auto es = pd_eigen(m, "matrix_inv_sqrt_sym_pd");
  return es.eigenvectors() *
         es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
         es.eigenvectors().transpose();
}

double log_det_pd(const Eigen::MatrixXd& m) {
  const Eigen::MatrixXd l = cholesky(m);
  return 2.0 * l.diagonal().array().log().sum();
}

double log_multivariate_gamma(int d, double a) {
  double out = 0.25 * d * (d - 1) * std::log(std::numbers::pi);
  for (int j = 1; j <= d; ++j) out += std::lgamma(a + 0.5 * (1 - j));
  return out;
}

double log_sum_exp(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

}  // namespace levythin
