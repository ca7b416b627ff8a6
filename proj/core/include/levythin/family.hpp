#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace levythin {

enum class FamilyKind { poisson, gaussian, gamma, wishart };

std::string_view to_string(FamilyKind kind);
FamilyKind family_kind_from_string(std::string_view name);

/// Generative process family. The Gaussian family owns its covariance; the
/// other three are described by their dimension alone.
class LevyFamily {
 public:
  static LevyFamily poisson(int d);
  static LevyFamily gaussian(Eigen::MatrixXd sigma);
  static LevyFamily gamma(int d);
  static LevyFamily wishart(int d);

  FamilyKind kind() const noexcept { return kind_; }
  int dimension() const noexcept { return d_; }
  bool has_sigma() const noexcept { return sigma_.has_value(); }
  const Eigen::MatrixXd& sigma() const;

  /// Number of scalar features after flattening (d, or d(d+1)/2 for Wishart).
  int feature_length() const noexcept;

 private:
  LevyFamily(FamilyKind kind, int d, std::optional<Eigen::MatrixXd> sigma);

  FamilyKind kind_;
  int d_;
  std::optional<Eigen::MatrixXd> sigma_;
};

/// Observed features: a vector for Poisson/Gaussian/Gamma, a symmetric
/// matrix for Wishart.
class Features {
 public:
  Features() = default;
  Features(Eigen::VectorXd values) : data_(std::move(values)) {}
  Features(Eigen::MatrixXd values) : data_(std::move(values)) {}

  bool is_vector() const noexcept { return data_.index() == 0; }
  bool is_matrix() const noexcept { return data_.index() == 1; }
  const Eigen::VectorXd& vector() const;
  const Eigen::MatrixXd& matrix() const;

  /// Vector features as-is; matrix features as their upper triangle, row-major.
  Eigen::VectorXd flatten() const;

  friend bool operator==(const Features& a, const Features& b);

 private:
  std::variant<Eigen::VectorXd, Eigen::MatrixXd> data_;
};

/// Rebuilds a symmetric d x d matrix from its row-major upper triangle.
Eigen::MatrixXd unflatten_symmetric(const Eigen::VectorXd& upper, int d);

struct Example {
  Features x;
  int y = 0;  // class label in 0..K-1
  double t = 1.0;
};

struct PseudoExample {
  Features x;
  int y = 0;
  std::size_t origin_id = 0;
  double alpha = 1.0;
  double t = 1.0;  // alpha * t of the origin
};

/// Throws SupportError if x is outside the family's sample space.
void validate_features(const LevyFamily& family, const Features& x);

/// Features check plus t > 0 (and t >= d for Wishart).
void validate_example(const LevyFamily& family, const Example& example);

/// Natural parameter of one process. Vector for Poisson/Gaussian/Gamma,
/// negative-definite matrix for Wishart. The domain is checked on
/// construction.
class Topic {
 public:
  Topic(Features theta, LevyFamily family, bool equal_information = false);

  /// Poisson topic rescaled so that sum_j exp(theta_j) = 1.
  static Topic normalized_poisson(const Eigen::VectorXd& theta);

  /// Gaussian mean mu mapped to theta = Sigma^{-1} mu.
  static Topic from_gaussian_mean(const Eigen::VectorXd& mu,
                                  const LevyFamily& family);

  /// Gamma variances sigma_j^2 mapped to theta_j = -1 / (2 sigma_j^2).
  static Topic from_gamma_variances(const Eigen::VectorXd& variances);

  const Features& theta() const noexcept { return theta_; }
  const LevyFamily& family() const noexcept { return family_; }
  bool equal_information() const noexcept { return equal_information_; }

 private:
  Features theta_;
  LevyFamily family_;
  bool equal_information_;
};

/// psi(theta): Poisson sum exp(theta_j); Gaussian theta' Sigma theta / 2;
/// Gamma -1/2 sum log(-2 theta_j); Wishart -1/2 log det(-2 Theta).
double log_partition(const Topic& topic);

/// log h^(t)(x), the theta-free carrier of the time-t marginal.
double log_carrier(const LevyFamily& family, const Features& x, double t);

struct ThinningDensity {
  double log_density = 0.0;
  /// False for Wishart, where the matrix-Beta normalizer is omitted.
  bool normalized = true;
};

/// Log-density of the thinned input x_tilde given x, for 0 < alpha < 1:
/// log h^(alpha t)(x_tilde) + log h^((1-alpha) t)(x - x_tilde) - log h^(t)(x).
ThinningDensity thinning_log_density(const LevyFamily& family, const Features& x,
                                     const Features& x_tilde, double t,
                                     double alpha);

}  // namespace levythin
