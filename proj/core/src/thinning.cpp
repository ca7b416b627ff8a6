#include "levythin/thinning.hpp"

#include "levythin/distributions.hpp"
#include "levythin/errors.hpp"
#include "levythin/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace levythin {

namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
}

void check_t(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw ParameterError("t must be positive and finite");
}

}  // namespace

Eigen::VectorXd thin_poisson(const Eigen::VectorXd& x, double alpha, Rng& rng) {
  check_alpha(alpha);
  if (alpha == 1.0) return x;
  Eigen::VectorXd out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    if (x[j] < 0.0 || x[j] != std::floor(x[j])) {
      throw SupportError("poisson features must be nonnegative integers");
    }
    out[j] = static_cast<double>(sample_binomial(static_cast<std::int64_t>(x[j]), alpha, rng));
  }
  return out;
}

Eigen::VectorXd thin_gaussian_factor(const Eigen::VectorXd& x, double alpha, double t,
                                     const Eigen::MatrixXd& sigma_cholesky, Rng& rng) {
  check_alpha(alpha);
  check_t(t);
  if (alpha == 1.0) return x;
  if (sigma_cholesky.rows() != x.size()) throw ShapeError("sigma and x dimensions differ");
  const double scale = std::sqrt(alpha * (1.0 - alpha) * t);
  const Eigen::VectorXd z = sample_std_normal_vector(static_cast<int>(x.size()), rng);
  const Eigen::VectorXd lz = sigma_cholesky.triangularView<Eigen::Lower>() * z;
  return alpha * x + scale * lz;
}

Eigen::VectorXd thin_gaussian(const Eigen::VectorXd& x, double alpha, double t,
                              const Eigen::MatrixXd& sigma, Rng& rng) {
  return thin_gaussian_factor(x, alpha, t, cholesky(sigma), rng);
}

Eigen::VectorXd thin_gamma(const Eigen::VectorXd& x, double alpha, double t, Rng& rng) {
  check_alpha(alpha);
  check_t(t);
  if ((x.array() <= 0.0).any()) throw SupportError("gamma features must be strictly positive");
  if (alpha == 1.0) return x;
  const double a = 0.5 * alpha * t;
  const double b = 0.5 * (1.0 - alpha) * t;
  Eigen::VectorXd out(x.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    double value = sample_beta(a, b, rng) * x[j];
    // Rounding guard: keep the draw strictly inside (0, x_j).
    if (value >= x[j]) value = std::nextafter(x[j], 0.0);
    if (value <= 0.0) value = std::numeric_limits<double>::denorm_min();
    out[j] = value;
  }
  return out;
}

Eigen::MatrixXd thin_wishart(const Eigen::MatrixXd& x, double alpha, double t, Rng& rng) {
  check_alpha(alpha);
  check_t(t);
  const auto d = static_cast<double>(x.rows());
  if (!is_positive_definite(x)) {
    throw SupportError("wishart features must be symmetric positive-definite");
  }
  if (t < d) throw ParameterError("wishart thinning requires t >= d");
  if (alpha == 1.0) return x;
  if (alpha * t < d || (1.0 - alpha) * t < d) {
    throw ParameterError("wishart thinning requires alpha t >= d and (1 - alpha) t >= d (alpha t = " +
                         std::to_string(alpha * t) + ", d = " + std::to_string(x.rows()) + ")");
  }
  const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(x.rows(), x.cols());
  const Eigen::MatrixXd w1 = sample_wishart_factor(identity, alpha * t, rng);
  const Eigen::MatrixXd w2 = sample_wishart_factor(identity, (1.0 - alpha) * t, rng);
  const Eigen::MatrixXd s_inv_half = matrix_inv_sqrt_sym_pd(w1 + w2);
  const Eigen::MatrixXd m = s_inv_half * w1 * s_inv_half;
  const Eigen::MatrixXd x_half = matrix_sqrt_sym_pd(x);
  Eigen::MatrixXd out = x_half * m * x_half;
  out = 0.5 * (out + out.transpose());
  if (!is_positive_definite(out) || !is_positive_definite(x - out)) {
    throw SupportError("wishart thinning produced a numerically singular draw");
  }
  return out;
}

Features thin(const LevyFamily& family, const Features& x, double alpha, double t, Rng& rng) {
  switch (family.kind()) {
    case FamilyKind::poisson: return Features(thin_poisson(x.vector(), alpha, rng));
    case FamilyKind::gaussian:
      return Features(thin_gaussian(x.vector(), alpha, t, family.sigma(), rng));
    case FamilyKind::gamma: return Features(thin_gamma(x.vector(), alpha, t, rng));
    case FamilyKind::wishart: return Features(thin_wishart(x.matrix(), alpha, t, rng));
  }
  return x;
}

RngState substream(const RngState& base, std::size_t origin_id, std::size_t b) {
  return {hash_combine(base.seed, origin_id, b), base.stream};
}

std::vector<PseudoExample> generate_pseudo_examples(const std::vector<Example>& examples,
                                                    const ThinningConfig& cfg,
                                                    const LevyFamily& family) {
  check_alpha(cfg.alpha);
  if (cfg.B < 1) throw ParameterError("B must be a positive integer");

  Eigen::MatrixXd sigma_factor;
  if (family.kind() == FamilyKind::gaussian) sigma_factor = cholesky(family.sigma());

  std::vector<PseudoExample> out;
  out.reserve(examples.size() * static_cast<std::size_t>(cfg.B));
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const Example& ex = examples[i];
    try {
      validate_example(family, ex);
    } catch (const Error& e) {
      throw SupportError("example " + std::to_string(i) + ": " + e.what());
    }
    for (int b = 0; b < cfg.B; ++b) {
      Rng rng(substream(cfg.seed, i, static_cast<std::size_t>(b)));
      PseudoExample pe;
      pe.y = ex.y;
      pe.origin_id = i;
      pe.alpha = cfg.alpha;
      pe.t = cfg.alpha * ex.t;
      try {
        if (family.kind() == FamilyKind::gaussian) {
          pe.x = Features(thin_gaussian_factor(ex.x.vector(), cfg.alpha, ex.t, sigma_factor, rng));
        } else {
          pe.x = thin(family, ex.x, cfg.alpha, ex.t, rng);
        }
      } catch (const ParameterError& e) {
        throw ParameterError("example " + std::to_string(i) + ": " + e.what());
      } catch (const SupportError& e) {
        throw SupportError("example " + std::to_string(i) + ": " + e.what());
      }
      out.push_back(std::move(pe));
    }
  }
  return out;
}

}  // namespace levythin
