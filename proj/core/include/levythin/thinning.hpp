#pragma once

#include "levythin/family.hpp"
#include "levythin/rng.hpp"

#include <Eigen/Core>

#include <vector>

namespace levythin {

struct ThinningConfig {
  double alpha = 0.5;  // in (0, 1]; 1 means identity thinning
  int B = 1;           // pseudo-examples per original
  RngState seed{};
};

/// X_tilde_j ~ Binom(x_j, alpha). Does not need t.
Eigen::VectorXd thin_poisson(const Eigen::VectorXd& x, double alpha, Rng& rng);

/// X_tilde ~ N(alpha x, alpha (1 - alpha) t Sigma).
Eigen::VectorXd thin_gaussian(const Eigen::VectorXd& x, double alpha, double t,
                              const Eigen::MatrixXd& sigma, Rng& rng);

/// As thin_gaussian, given the lower Cholesky factor of Sigma.
Eigen::VectorXd thin_gaussian_factor(const Eigen::VectorXd& x, double alpha, double t,
                                     const Eigen::MatrixXd& sigma_cholesky, Rng& rng);

/// X_tilde_j = m_j x_j with m_j ~ Beta(alpha t / 2, (1 - alpha) t / 2).
Eigen::VectorXd thin_gamma(const Eigen::VectorXd& x, double alpha, double t, Rng& rng);

/// X_tilde = X^{1/2} M X^{1/2}, M = S^{-1/2} W1 S^{-1/2}, S = W1 + W2,
/// W1 ~ Wishart(I, alpha t), W2 ~ Wishart(I, (1 - alpha) t).
Eigen::MatrixXd thin_wishart(const Eigen::MatrixXd& x, double alpha, double t, Rng& rng);

/// Dispatches on the family. alpha == 1 returns x unchanged.
Features thin(const LevyFamily& family, const Features& x, double alpha, double t, Rng& rng);

/// Substream for (origin, replicate b) under a base state.
RngState substream(const RngState& base, std::size_t origin_id, std::size_t b);

/// B pseudo-examples per input, grouped by origin in input order. Draws for
/// a given origin depend only on (cfg.seed, origin_id, b).
std::vector<PseudoExample> generate_pseudo_examples(const std::vector<Example>& examples,
                                                    const ThinningConfig& cfg,
                                                    const LevyFamily& family);

}  // namespace levythin
