#include "levythin/distributions.hpp"

#include "levythin/errors.hpp"
#include "levythin/linalg.hpp"

#include <cmath>

namespace levythin {

double sample_std_normal(Rng& rng) {
  // Marsaglia polar method; the second variate is discarded so that every
  // call consumes the engine independently of call history.
  for (;;) {
    const double u = 2.0 * rng.uniform() - 1.0;
    const double v = 2.0 * rng.uniform() - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
  }
}

Eigen::VectorXd sample_std_normal_vector(int d, Rng& rng) {
  Eigen::VectorXd z(d);
  for (int i = 0; i < d; ++i) z[i] = sample_std_normal(rng);
  return z;
}

Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean, const Eigen::MatrixXd& cholesky_factor,
                           Rng& rng) {
  if (cholesky_factor.rows() != mean.size() || cholesky_factor.cols() != mean.size()) {
    throw ShapeError("sample_mvn: factor and mean dimensions differ");
  }
  const Eigen::VectorXd z = sample_std_normal_vector(static_cast<int>(mean.size()), rng);
  return mean + cholesky_factor.triangularView<Eigen::Lower>() * z;
}

double sample_exponential(double rate, Rng& rng) {
  if (!(rate > 0.0)) throw ParameterError("exponential rate must be positive");
  return -std::log(rng.uniform_open()) / rate;
}

namespace {

// Marsaglia-Tsang for shape >= 1, returning a Gamma(shape, 1) variate.
double marsaglia_tsang(double shape, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_std_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform_open();
    if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace

double sample_log_gamma(double shape, Rng& rng) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
  if (shape >= 1.0) return std::log(marsaglia_tsang(shape, rng));
  // Gamma(a) = Gamma(a + 1) * U^(1/a)
  const double g = marsaglia_tsang(shape + 1.0, rng);
  return std::log(g) + std::log(rng.uniform_open()) / shape;
}

double sample_gamma(double shape, double scale, Rng& rng) {
  if (!(shape > 0.0)) throw ParameterError("gamma shape must be positive");
  if (!(scale > 0.0)) throw ParameterError("gamma scale must be positive");
  if (shape >= 1.0) return scale * marsaglia_tsang(shape, rng);
  return scale * std::exp(sample_log_gamma(shape, rng));
}

double sample_beta(double a, double b, Rng& rng) {
  if (!(a > 0.0) || !(b > 0.0)) throw ParameterError("beta parameters must be positive");
  const double la = sample_log_gamma(a, rng);
  const double lb = sample_log_gamma(b, rng);
  // X / (X + Y) = 1 / (1 + exp(log Y - log X))
  return 1.0 / (1.0 + std::exp(lb - la));
}

double sample_chi_squared(double dof, Rng& rng) {
  return sample_gamma(0.5 * dof, 2.0, rng);
}

double sample_student_t(double dof, Rng& rng) {
  const double z = sample_std_normal(rng);
  return z / std::sqrt(sample_chi_squared(dof, rng) / dof);
}

std::int64_t sample_binomial(std::int64_t n, double p, Rng& rng) {
  if (n < 0) throw ParameterError("binomial n must be nonnegative");
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("binomial p must lie in [0, 1]");
  std::int64_t acc = 0;
  // Order-statistic recursion: the a-th smallest of n uniforms is
  // Beta(a, n - a + 1); condition on which side of p it falls.
  while (n > 64) {
    if (p <= 0.0) return acc;
    if (p >= 1.0) return acc + n;
    const std::int64_t a = 1 + n / 2;
    const std::int64_t b = n + 1 - a;
    const double x = sample_beta(static_cast<double>(a), static_cast<double>(b), rng);
    if (x >= p) {
      n = a - 1;
      p = p / x;
    } else {
      acc += a;
      n = b - 1;
      p = (p - x) / (1.0 - x);
    }
  }
  if (p <= 0.0) return acc;
  if (p >= 1.0) return acc + n;
  for (std::int64_t i = 0; i < n; ++i) acc += rng.uniform() < p ? 1 : 0;
  return acc;
}

std::int64_t sample_poisson(double rate, Rng& rng) {
  if (!(rate >= 0.0) || !std::isfinite(rate)) {
    throw ParameterError("poisson rate must be finite and nonnegative");
  }
  std::int64_t acc = 0;
  // Arrival-time reduction: the m-th arrival of a unit-rate process is
  // Gamma(m, 1).
  while (rate > 16.0) {
    const auto m = static_cast<std::int64_t>(std::floor(0.875 * rate));
    const double x = sample_gamma(static_cast<double>(m), 1.0, rng);
    if (x < rate) {
      acc += m;
      rate -= x;
    } else {
      return acc + sample_binomial(m - 1, rate / x, rng);
    }
  }
  const double limit = std::exp(-rate);
  double prod = rng.uniform_open();
  while (prod > limit) {
    ++acc;
    prod *= rng.uniform_open();
  }
  return acc;
}

Eigen::MatrixXd sample_wishart_factor(const Eigen::MatrixXd& scale_cholesky, double dof,
                                      Rng& rng) {
  const Eigen::Index d = scale_cholesky.rows();
  if (scale_cholesky.cols() != d || d == 0) throw ShapeError("wishart scale must be square");
  if (!(dof > static_cast<double>(d) - 1.0)) {
    throw ParameterError("wishart dof must exceed d - 1");
  }
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    a(i, i) = std::sqrt(sample_chi_squared(dof - static_cast<double>(i), rng));
    for (Eigen::Index j = 0; j < i; ++j) a(i, j) = sample_std_normal(rng);
  }
  const Eigen::MatrixXd la = scale_cholesky.triangularView<Eigen::Lower>() * a;
  Eigen::MatrixXd w = la * la.transpose();
  return 0.5 * (w + w.transpose());
}

Eigen::MatrixXd sample_wishart(const Eigen::MatrixXd& scale, double dof, Rng& rng) {
  return sample_wishart_factor(cholesky(scale), dof, rng);
}

}  // namespace levythin
