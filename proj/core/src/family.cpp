#include "levythin/family.hpp"

#include "levythin/errors.hpp"
#include "levythin/linalg.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

namespace levythin {

std::string_view to_string(FamilyKind kind) {
  switch (kind) {
    case FamilyKind::poisson: return "poisson";
    case FamilyKind::gaussian: return "gaussian";
    case FamilyKind::gamma: return "gamma";
    case FamilyKind::wishart: return "wishart";
  }
  return "unknown";
}

FamilyKind family_kind_from_string(std::string_view name) {
  if (name == "poisson") return FamilyKind::poisson;
  if (name == "gaussian" || name == "gauss") return FamilyKind::gaussian;
  if (name == "gamma") return FamilyKind::gamma;
  if (name == "wishart") return FamilyKind::wishart;
  throw ParameterError("unknown family '" + std::string(name) + "'");
}

// ---------------------------------------------------------------------------
// LevyFamily

LevyFamily::LevyFamily(FamilyKind kind, int d, std::optional<Eigen::MatrixXd> sigma)
    : kind_(kind), d_(d), sigma_(std::move(sigma)) {
  if (d_ < 1) throw ParameterError("family dimension must be >= 1");
}

LevyFamily LevyFamily::poisson(int d) { return {FamilyKind::poisson, d, std::nullopt}; }
LevyFamily LevyFamily::gamma(int d) { return {FamilyKind::gamma, d, std::nullopt}; }
LevyFamily LevyFamily::wishart(int d) { return {FamilyKind::wishart, d, std::nullopt}; }

LevyFamily LevyFamily::gaussian(Eigen::MatrixXd sigma) {
  if (sigma.rows() != sigma.cols() || sigma.rows() == 0) {
    throw ShapeError("gaussian family: sigma must be square");
  }
  if (!is_positive_definite(sigma)) {
    throw DomainError("gaussian family: sigma must be symmetric positive-definite");
  }
  const int d = static_cast<int>(sigma.rows());
  return {FamilyKind::gaussian, d, std::move(sigma)};
}

const Eigen::MatrixXd& LevyFamily::sigma() const {
  if (!sigma_) throw ParameterError("family has no covariance matrix");
  return *sigma_;
}

int LevyFamily::feature_length() const noexcept {
  return kind_ == FamilyKind::wishart ? d_ * (d_ + 1) / 2 : d_;
}

// ---------------------------------------------------------------------------
// Features

const Eigen::VectorXd& Features::vector() const {
  if (!is_vector()) throw ShapeError("features are a matrix, not a vector");
  return std::get<0>(data_);
}

const Eigen::MatrixXd& Features::matrix() const {
  if (!is_matrix()) throw ShapeError("features are a vector, not a matrix");
  return std::get<1>(data_);
}

Eigen::VectorXd Features::flatten() const {
  if (is_vector()) return vector();
  const auto& m = matrix();
  const Eigen::Index d = m.rows();
  Eigen::VectorXd out(d * (d + 1) / 2);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = i; j < d; ++j) out[k++] = m(i, j);
  return out;
}

bool operator==(const Features& a, const Features& b) {
  if (a.data_.index() != b.data_.index()) return false;
  if (a.is_vector()) {
    return a.vector().size() == b.vector().size() && a.vector() == b.vector();
  }
  return a.matrix().rows() == b.matrix().rows() &&
         a.matrix().cols() == b.matrix().cols() && a.matrix() == b.matrix();
}

Eigen::MatrixXd unflatten_symmetric(const Eigen::VectorXd& upper, int d) {
  if (upper.size() != static_cast<Eigen::Index>(d) * (d + 1) / 2) {
    throw ShapeError("upper triangle length does not match d(d+1)/2");
  }
  Eigen::MatrixXd m(d, d);
  Eigen::Index k = 0;
  for (int i = 0; i < d; ++i)
    for (int j = i; j < d; ++j) {
      m(i, j) = upper[k];
      m(j, i) = upper[k];
      ++k;
    }
  return m;
}

// ---------------------------------------------------------------------------
// Validation

void validate_features(const LevyFamily& family, const Features& x) {
  const int d = family.dimension();
  if (family.kind() == FamilyKind::wishart) {
    if (!x.is_matrix()) throw SupportError("wishart features must be a matrix");
    const auto& m = x.matrix();
    if (m.rows() != d || m.cols() != d) throw ShapeError("wishart features: wrong dimension");
    if (!is_positive_definite(m)) {
      throw SupportError("wishart features must be symmetric positive-definite");
    }
    return;
  }
  if (!x.is_vector()) throw SupportError("vector family given matrix features");
  const auto& v = x.vector();
  if (v.size() != d) throw ShapeError("features have length " + std::to_string(v.size()) +
                                      ", family dimension is " + std::to_string(d));
  for (Eigen::Index j = 0; j < v.size(); ++j) {
    const double value = v[j];
    if (!std::isfinite(value)) throw SupportError("features must be finite");
    switch (family.kind()) {
      case FamilyKind::poisson:
        if (value < 0.0 || value != std::floor(value)) {
          throw SupportError("poisson features must be nonnegative integers");
        }
        break;
      case FamilyKind::gamma:
        if (value <= 0.0) throw SupportError("gamma features must be strictly positive");
        break;
      default:
        break;
    }
  }
}

void validate_example(const LevyFamily& family, const Example& example) {
  if (!(example.t > 0.0) || !std::isfinite(example.t)) {
    throw SupportError("information content t must be positive");
  }
  if (family.kind() == FamilyKind::wishart && example.t < family.dimension()) {
    throw SupportError("wishart examples require t >= d");
  }
  if (example.y < 0) throw SupportError("class label must be nonnegative");
  validate_features(family, example.x);
}

// ---------------------------------------------------------------------------
// Topic

Topic::Topic(Features theta, LevyFamily family, bool equal_information)
    : theta_(std::move(theta)), family_(std::move(family)),
      equal_information_(equal_information) {
  const int d = family_.dimension();
  if (family_.kind() == FamilyKind::wishart) {
    if (!theta_.is_matrix() || theta_.matrix().rows() != d || theta_.matrix().cols() != d) {
      throw ShapeError("wishart topic must be a d x d matrix");
    }
    if (!is_positive_definite(-theta_.matrix())) {
      throw DomainError("wishart topic must be negative-definite");
    }
  } else {
    if (!theta_.is_vector() || theta_.vector().size() != d) {
      throw ShapeError("topic must be a length-d vector");
    }
    if (!theta_.vector().allFinite()) throw DomainError("topic must be finite");
    if (family_.kind() == FamilyKind::gamma && (theta_.vector().array() >= 0.0).any()) {
      throw DomainError("gamma topic entries must be negative");
    }
  }
  if (equal_information_ && family_.kind() == FamilyKind::poisson) {
    const double psi = theta_.vector().array().exp().sum();
    if (std::abs(psi - 1.0) > 1e-12) {
      throw DomainError("equal-information poisson topic must satisfy sum exp(theta) = 1");
    }
  }
}

Topic Topic::normalized_poisson(const Eigen::VectorXd& theta) {
  const double shift = log_sum_exp(theta);
  Eigen::VectorXd normalized = theta.array() - shift;
  return Topic(Features(std::move(normalized)),
               LevyFamily::poisson(static_cast<int>(theta.size())), true);
}

Topic Topic::from_gaussian_mean(const Eigen::VectorXd& mu, const LevyFamily& family) {
  if (family.kind() != FamilyKind::gaussian) throw ParameterError("family is not gaussian");
  if (mu.size() != family.dimension()) throw ShapeError("mean has wrong dimension");
  Eigen::VectorXd theta = family.sigma().llt().solve(mu);
  return Topic(Features(std::move(theta)), family);
}

Topic Topic::from_gamma_variances(const Eigen::VectorXd& variances) {
  if ((variances.array() <= 0.0).any()) throw DomainError("gamma variances must be positive");
  Eigen::VectorXd theta = -0.5 * variances.array().inverse();
  return Topic(Features(std::move(theta)),
               LevyFamily::gamma(static_cast<int>(variances.size())));
}

double log_partition(const Topic& topic) {
  const auto& family = topic.family();
  switch (family.kind()) {
    case FamilyKind::poisson:
      return topic.theta().vector().array().exp().sum();
    case FamilyKind::gaussian: {
      const auto& theta = topic.theta().vector();
      return 0.5 * theta.dot(family.sigma() * theta);
    }
    case FamilyKind::gamma:
      return -0.5 * (-2.0 * topic.theta().vector().array()).log().sum();
    case FamilyKind::wishart:
      return -0.5 * log_det_pd(-2.0 * topic.theta().matrix());
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// Carriers and the thinning kernel

double log_carrier(const LevyFamily& family, const Features& x, double t) {
  if (!(t > 0.0)) throw ParameterError("carrier time must be positive");
  const int d = family.dimension();
  switch (family.kind()) {
    case FamilyKind::poisson: {
      double out = 0.0;
      for (double xj : x.vector()) out += xj * std::log(t) - std::lgamma(xj + 1.0);
      return out;
    }
    case FamilyKind::gaussian: {
      const auto& v = x.vector();
      Eigen::LLT<Eigen::MatrixXd> llt(family.sigma());
      const double quad = v.dot(llt.solve(v));
      return -0.5 * d * std::log(2.0 * std::numbers::pi * t) -
             0.5 * log_det_pd(family.sigma()) - quad / (2.0 * t);
    }
    case FamilyKind::gamma: {
      const double shape = 0.5 * t;
      return (shape - 1.0) * x.vector().array().log().sum() - d * std::lgamma(shape) -
             d * shape * std::log(2.0);
    }
    case FamilyKind::wishart: {
      if (t <= d - 1) throw ParameterError("wishart carrier requires t > d - 1");
      return 0.5 * (t - d - 1) * log_det_pd(x.matrix()) - 0.5 * t * d * std::log(2.0) -
             log_multivariate_gamma(d, 0.5 * t);
    }
  }
  return 0.0;
}

ThinningDensity thinning_log_density(const LevyFamily& family, const Features& x,
                                     const Features& x_tilde, double t, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (!(t > 0.0)) throw ParameterError("t must be positive");
  validate_features(family, x);

  switch (family.kind()) {
    case FamilyKind::poisson: {
      if (!x_tilde.is_vector() || x_tilde.vector().size() != x.vector().size()) {
        throw ShapeError("thinned features have the wrong shape");
      }
      const auto& xv = x.vector();
      const auto& xt = x_tilde.vector();
      for (Eigen::Index j = 0; j < xv.size(); ++j) {
        if (xt[j] < 0.0 || xt[j] > xv[j] || xt[j] != std::floor(xt[j])) {
          throw SupportError("poisson thinning requires integer 0 <= x_tilde <= x");
        }
      }
      break;
    }
    case FamilyKind::gamma: {
      if (!x_tilde.is_vector() || x_tilde.vector().size() != x.vector().size()) {
        throw ShapeError("thinned features have the wrong shape");
      }
      const auto& xv = x.vector();
      const auto& xt = x_tilde.vector();
      if ((xt.array() <= 0.0).any() || (xt.array() >= xv.array()).any()) {
        throw SupportError("gamma thinning requires 0 < x_tilde < x");
      }
      break;
    }
    case FamilyKind::gaussian:
      if (!x_tilde.is_vector() || x_tilde.vector().size() != x.vector().size()) {
        throw ShapeError("thinned features have the wrong shape");
      }
      break;
    case FamilyKind::wishart: {
      const int d = family.dimension();
      if (alpha * t <= d - 1 || (1.0 - alpha) * t <= d - 1) {
        throw ParameterError("wishart thinning requires alpha t and (1 - alpha) t > d - 1");
      }
      if (!x_tilde.is_matrix() || x_tilde.matrix().rows() != d) {
        throw ShapeError("thinned features have the wrong shape");
      }
      const Eigen::MatrixXd rest = x.matrix() - x_tilde.matrix();
      if (!is_positive_definite(x_tilde.matrix()) || !is_positive_definite(rest)) {
        throw SupportError("wishart thinning requires x_tilde and x - x_tilde positive-definite");
      }
      // Matrix-Beta kernel without its Gamma_d normalizer.
      const double value = 0.5 * (alpha * t - d - 1) * log_det_pd(x_tilde.matrix()) +
                           0.5 * ((1.0 - alpha) * t - d - 1) * log_det_pd(rest);
      return {value, false};
    }
  }

  const Features rest(Eigen::VectorXd(x.vector() - x_tilde.vector()));
  const double value = log_carrier(family, x_tilde, alpha * t) +
                       log_carrier(family, rest, (1.0 - alpha) * t) -
                       log_carrier(family, x, t);
  return {value, true};
}

}  // namespace levythin
