#include "levythin/logistic.hpp"

#include "levythin/errors.hpp"
#include "levythin/lbfgs.hpp"
#include "levythin/linalg.hpp"
#include "levythin/rng.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>

namespace levythin {

std::string_view to_string(FeatureMap map) {
  return map == FeatureMap::identity ? "identity" : "flatten_symmetric";
}

FeatureMap feature_map_from_string(std::string_view name) {
  if (name == "identity") return FeatureMap::identity;
  if (name == "flatten_symmetric") return FeatureMap::flatten_symmetric;
  throw ParameterError("unknown feature map '" + std::string(name) + "'");
}

FeatureMap default_feature_map(FamilyKind kind) {
  return kind == FamilyKind::wishart ? FeatureMap::flatten_symmetric : FeatureMap::identity;
}

Eigen::VectorXd apply_feature_map(FeatureMap map, const Features& x) {
  if (map == FeatureMap::identity && !x.is_vector()) {
    throw ShapeError("identity feature map needs vector features");
  }
  return x.flatten();
}

void center_classes(Eigen::MatrixXd& beta) {
  if (beta.cols() == 0) return;
  const Eigen::VectorXd mean = beta.rowwise().mean();
  beta.colwise() -= mean;
}

int infer_num_classes(const std::vector<int>& labels) {
  if (labels.empty()) return 0;
  return *std::max_element(labels.begin(), labels.end()) + 1;
}

// ---------------------------------------------------------------------------
// Single-example loss

double logistic_loss(const Eigen::MatrixXd& beta, const Eigen::VectorXd& x, int y) {
  if (beta.rows() != x.size()) throw ShapeError("beta rows and x length differ");
  if (y < 0 || y >= beta.cols()) throw ShapeError("label out of range");
  const Eigen::VectorXd s = beta.transpose() * x;
  return log_sum_exp(s) - s[y];
}

Eigen::MatrixXd loss_gradient(const Eigen::MatrixXd& beta, const Eigen::VectorXd& x, int y) {
  if (beta.rows() != x.size()) throw ShapeError("beta rows and x length differ");
  if (y < 0 || y >= beta.cols()) throw ShapeError("label out of range");
  const Eigen::VectorXd s = beta.transpose() * x;
  Eigen::VectorXd p = (s.array() - log_sum_exp(s)).exp();
  p[y] -= 1.0;
  return x * p.transpose();
}

// ---------------------------------------------------------------------------
// Training sets

namespace {

template <typename Row>
TrainingSet build_training_set(const std::vector<Row>& rows, FeatureMap map, int num_classes,
                               auto&& group_of) {
  TrainingSet data;
  if (rows.empty()) throw DegenerateDataError("no training rows");
  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::Index p = -1;
  data.y.reserve(rows.size());
  data.groups.reserve(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Eigen::VectorXd phi = apply_feature_map(map, rows[i].x);
    if (p < 0) p = phi.size();
    if (phi.size() != p) throw ShapeError("row " + std::to_string(i) + " has a different length");
    for (Eigen::Index j = 0; j < p; ++j) {
      if (phi[j] != 0.0) triplets.emplace_back(static_cast<Eigen::Index>(i), j, phi[j]);
    }
    if (rows[i].y < 0) throw ShapeError("negative class label");
    data.y.push_back(rows[i].y);
    data.groups.push_back(group_of(rows[i], i));
  }
  data.x.resize(static_cast<Eigen::Index>(rows.size()), p);
  data.x.setFromTriplets(triplets.begin(), triplets.end());
  data.x.makeCompressed();
  data.num_classes = num_classes > 0 ? num_classes : infer_num_classes(data.y);
  if (infer_num_classes(data.y) > data.num_classes) throw ShapeError("label exceeds class count");
  return data;
}

}  // namespace

TrainingSet make_training_set(const std::vector<PseudoExample>& pseudo, FeatureMap map,
                              int num_classes) {
  return build_training_set(pseudo, map, num_classes,
                            [](const PseudoExample& pe, std::size_t) { return pe.origin_id; });
}

TrainingSet make_training_set(const std::vector<Example>& examples, FeatureMap map,
                              int num_classes) {
  return build_training_set(examples, map, num_classes,
                            [](const Example&, std::size_t i) { return i; });
}

TrainingSet select_rows(const TrainingSet& data, const std::vector<std::size_t>& rows) {
  TrainingSet out;
  out.num_classes = data.num_classes;
  out.x.resize(static_cast<Eigen::Index>(rows.size()), data.x.cols());
  Eigen::Index nnz = 0;
  for (auto r : rows) nnz += data.x.outerIndexPtr()[r + 1] - data.x.outerIndexPtr()[r];
  out.x.reserve(nnz);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.x.startVec(static_cast<Eigen::Index>(i));
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(
             data.x, static_cast<Eigen::Index>(rows[i]));
         it; ++it) {
      out.x.insertBack(static_cast<Eigen::Index>(i), it.col()) = it.value();
    }
    out.y.push_back(data.y[rows[i]]);
    out.groups.push_back(data.groups[rows[i]]);
  }
  out.x.finalize();
  return out;
}

// ---------------------------------------------------------------------------
// Batch objective

double penalized_loss(const TrainingSet& data, const Eigen::MatrixXd& beta, double lambda,
                      Eigen::MatrixXd* grad) {
  const auto n = static_cast<Eigen::Index>(data.size());
  if (n == 0) throw DegenerateDataError("empty training set");
  if (beta.rows() != data.x.cols() || beta.cols() != data.num_classes) {
    throw ShapeError("beta has the wrong shape for this training set");
  }
  Eigen::MatrixXd z = data.x * beta;  // N x K
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double m = z.row(i).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index k = 0; k < z.cols(); ++k) sum += std::exp(z(i, k) - m);
    const double lse = m + std::log(sum);
    total += lse - z(i, data.y[i]);
    if (grad) {
      for (Eigen::Index k = 0; k < z.cols(); ++k) z(i, k) = std::exp(z(i, k) - lse);
      z(i, data.y[i]) -= 1.0;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad) {
    *grad = (data.x.transpose() * z) * inv_n;
    if (lambda > 0.0) *grad += lambda * beta;
  }
  return total * inv_n + 0.5 * lambda * beta.squaredNorm();
}

HeldOutScore score_rows(const TrainingSet& data, const Eigen::MatrixXd& beta) {
  const Eigen::MatrixXd z = data.x * beta;
  HeldOutScore out;
  for (Eigen::Index i = 0; i < z.rows(); ++i) {
    const Eigen::VectorXd s = z.row(i).transpose();
    out.log_loss += log_sum_exp(s) - s[data.y[i]];
    Eigen::Index best = 0;
    s.maxCoeff(&best);
    if (best != data.y[i]) out.error += 1.0;
  }
  if (z.rows() > 0) {
    out.log_loss /= static_cast<double>(z.rows());
    out.error /= static_cast<double>(z.rows());
  }
  return out;
}

Eigen::MatrixXd fit_ridge(const TrainingSet& data, double lambda, const Eigen::MatrixXd& warm,
                          double tolerance, int max_iterations) {
  if (!(lambda >= 0.0)) throw ParameterError("ridge lambda must be nonnegative");
  const Eigen::Index p = data.x.cols();
  const Eigen::Index k = data.num_classes;
  Eigen::VectorXd x0 = Eigen::VectorXd::Zero(p * k);
  if (warm.rows() == p && warm.cols() == k) x0 = Eigen::Map<const Eigen::VectorXd>(warm.data(), p * k);

  Eigen::MatrixXd beta(p, k);
  Eigen::MatrixXd grad(p, k);
  const Objective objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    beta = Eigen::Map<const Eigen::MatrixXd>(v.data(), p, k);
    const double f = penalized_loss(data, beta, lambda, &grad);
    g = Eigen::Map<const Eigen::VectorXd>(grad.data(), p * k);
    return f;
  };
  LbfgsOptions options;
  options.gradient_tolerance = tolerance;
  options.max_iterations = max_iterations;
  const LbfgsResult result = minimize_lbfgs(objective, std::move(x0), options);
  if (!result.converged) {
    throw OptimizationError("logistic fit did not converge at lambda " + std::to_string(lambda),
                            result.gradient_norm);
  }
  Eigen::MatrixXd out = Eigen::Map<const Eigen::MatrixXd>(result.x.data(), p, k);
  center_classes(out);
  return out;
}

// ---------------------------------------------------------------------------
// Cross-validation

std::vector<int> grouped_folds(const std::vector<std::size_t>& groups, int n_folds,
                               std::uint64_t seed) {
  if (n_folds < 2) throw ParameterError("cross-validation needs at least 2 folds");
  std::vector<std::size_t> unique;
  std::unordered_map<std::size_t, std::size_t> index;
  for (auto g : groups) {
    if (index.emplace(g, unique.size()).second) unique.push_back(g);
  }
  if (static_cast<std::size_t>(n_folds) > unique.size()) {
    throw ParameterError("more folds than groups");
  }
  std::vector<std::size_t> order(unique.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed, 0xf01dULL);
  for (std::size_t i = order.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(order[i - 1], order[std::min(j, i - 1)]);
  }
  std::vector<int> fold_of_group(unique.size());
  for (std::size_t r = 0; r < order.size(); ++r) {
    fold_of_group[order[r]] = static_cast<int>(r % static_cast<std::size_t>(n_folds));
  }
  std::vector<int> folds(groups.size());
  for (std::size_t i = 0; i < groups.size(); ++i) folds[i] = fold_of_group[index.at(groups[i])];
  return folds;
}

std::vector<double> default_lambda_grid(const TrainingSet& data, int size, double ratio) {
  if (size < 1) throw ParameterError("grid size must be positive");
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ParameterError("grid ratio must lie in (0, 1]");
  Eigen::MatrixXd grad;
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(data.x.cols(), data.num_classes);
  penalized_loss(data, zero, 0.0, &grad);
  double g = grad.cwiseAbs().maxCoeff();
  if (!(g > 0.0)) g = 1.0;
  const double top = g;
  std::vector<double> grid(static_cast<std::size_t>(size));
  for (int i = 0; i < size; ++i) {
    const double frac = size == 1 ? 0.0 : static_cast<double>(i) / (size - 1);
    grid[static_cast<std::size_t>(i)] = top * std::pow(ratio, frac);
  }
  return grid;
}

namespace {

void require_all_classes(const std::vector<int>& labels, int num_classes) {
  if (num_classes < 2) throw DegenerateDataError("need at least two classes");
  std::vector<int> counts(static_cast<std::size_t>(num_classes), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  for (int k = 0; k < num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      throw DegenerateDataError("class " + std::to_string(k) + " has no training examples");
    }
  }
}

void check_grid(const std::vector<double>& grid) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0) || !std::isfinite(grid[i])) {
      throw ParameterError("lambda values must be finite and nonnegative");
    }
    if (i > 0 && grid[i] > grid[i - 1]) throw ParameterError("lambda grid must be descending");
  }
}

}  // namespace

FitResult fit_logistic(const TrainingSet& data, const TrainConfig& cfg) {
  if (!(cfg.tolerance > 0.0)) throw ParameterError("tolerance must be positive");
  if (cfg.max_iterations < 1) throw ParameterError("max_iterations must be positive");
  require_all_classes(data.y, data.num_classes);

  std::vector<double> grid = cfg.lambda_grid.empty()
                                 ? default_lambda_grid(data, cfg.grid_size, cfg.grid_ratio)
                                 : cfg.lambda_grid;
  check_grid(grid);

  FitResult result;
  result.model.feature_map = cfg.feature_map;
  result.model.calib_c = Eigen::VectorXd::Zero(data.num_classes);
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(data.x.cols(), data.num_classes);

  if (grid.size() == 1) {
    result.model.beta = fit_ridge(data, grid[0], zero, cfg.tolerance, cfg.max_iterations);
    result.model.ridge_lambda = grid[0];
    return result;
  }

  const std::vector<int> folds = grouped_folds(data.groups, cfg.n_folds, cfg.fold_seed);
  {
    std::unordered_map<std::size_t, int> seen;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      auto [it, inserted] = seen.emplace(data.groups[i], folds[i]);
      if (!inserted && it->second != folds[i]) {
        throw Error("grouped cross-validation split origin " + std::to_string(data.groups[i]));
      }
    }
  }

  CvReport report;
  report.points.resize(grid.size());
  std::vector<double> loss_sum(grid.size(), 0.0);
  std::vector<double> err_sum(grid.size(), 0.0);
  std::size_t held_total = 0;

  for (int f = 0; f < cfg.n_folds; ++f) {
    std::vector<std::size_t> train_rows;
    std::vector<std::size_t> test_rows;
    for (std::size_t i = 0; i < folds.size(); ++i) {
      (folds[i] == f ? test_rows : train_rows).push_back(i);
    }
    const TrainingSet train = select_rows(data, train_rows);
    const TrainingSet test = select_rows(data, test_rows);
    held_total += test_rows.size();
    Eigen::MatrixXd warm = zero;
    for (std::size_t g = 0; g < grid.size(); ++g) {
      try {
        warm = fit_ridge(train, grid[g], warm, cfg.tolerance, cfg.max_iterations);
        const HeldOutScore s = score_rows(test, warm);
        const auto w = static_cast<double>(test_rows.size());
        loss_sum[g] += s.log_loss * w;
        err_sum[g] += s.error * w;
      } catch (const OptimizationError&) {
        ++report.points[g].failed_folds;
      }
    }
  }

  bool any = false;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvPoint& point = report.points[g];
    point.lambda = grid[g];
    if (point.failed_folds > 0) {
      point.mean_log_loss = std::numeric_limits<double>::infinity();
      point.mean_error = std::numeric_limits<double>::infinity();
      continue;
    }
    point.mean_log_loss = loss_sum[g] / static_cast<double>(held_total);
    point.mean_error = err_sum[g] / static_cast<double>(held_total);
    const double value = cfg.criterion == CvCriterion::log_loss ? point.mean_log_loss
                                                                : point.mean_error;
    const CvPoint& best = report.points[report.chosen_index];
    const double best_value =
        cfg.criterion == CvCriterion::log_loss ? best.mean_log_loss : best.mean_error;
    if (!any || value < best_value) {
      report.chosen_index = g;
      any = true;
    }
  }
  if (!any) throw OptimizationError("every lambda failed in cross-validation", NAN);
  report.chosen_lambda = grid[report.chosen_index];

  Eigen::MatrixXd warm = zero;
  for (std::size_t g = 0; g <= report.chosen_index; ++g) {
    warm = fit_ridge(data, grid[g], warm, cfg.tolerance, cfg.max_iterations);
  }
  result.model.beta = std::move(warm);
  result.model.ridge_lambda = report.chosen_lambda;
  result.cv = std::move(report);
  return result;
}

FitResult fit_logistic(const std::vector<PseudoExample>& pseudo, const TrainConfig& cfg) {
  return fit_logistic(make_training_set(pseudo, cfg.feature_map, cfg.num_classes), cfg);
}

// ---------------------------------------------------------------------------
// Calibration

namespace {

constexpr double kMaxCalibrationScale = 1e3;

struct CalibrationProblem {
  Eigen::MatrixXd u;  // n x K raw scores
  std::vector<int> y;
};

// Mean NLL of eta = s * u + c with c_0 fixed at 0. params = (s, c_1..c_{K-1}).
// With fix_scale set, only the intercepts vary.
double calibration_objective(const CalibrationProblem& prob, const Eigen::VectorXd& params,
                             double fixed_scale, bool fix_scale, Eigen::VectorXd* grad,
                             Eigen::MatrixXd* hess) {
  const Eigen::Index n = prob.u.rows();
  const Eigen::Index k = prob.u.cols();
  const double s = fix_scale ? fixed_scale : params[0];
  const Eigen::Index offset = fix_scale ? 0 : 1;
  const Eigen::Index dim = params.size();
  if (grad) grad->setZero(dim);
  if (hess) hess->setZero(dim, dim);
  double total = 0.0;
  Eigen::VectorXd eta(k);
  Eigen::MatrixXd v(dim, k);  // d eta_k / d params
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      eta[c] = s * prob.u(i, c) + (c > 0 ? params[offset + c - 1] : 0.0);
    }
    const double lse = log_sum_exp(eta);
    total += lse - eta[prob.y[static_cast<std::size_t>(i)]];
    if (!grad && !hess) continue;
    const Eigen::VectorXd pr = (eta.array() - lse).exp();
    v.setZero();
    for (Eigen::Index c = 0; c < k; ++c) {
      if (!fix_scale) v(0, c) = prob.u(i, c);
      if (c > 0) v(offset + c - 1, c) = 1.0;
    }
    const Eigen::VectorXd vbar = v * pr;
    if (grad) *grad += vbar - v.col(prob.y[static_cast<std::size_t>(i)]);
    if (hess) {
      *hess += v * pr.asDiagonal() * v.transpose() - vbar * vbar.transpose();
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  if (grad) *grad *= inv_n;
  if (hess) *hess *= inv_n;
  return total * inv_n;
}

// Damped Newton with backtracking. Returns false if the scale escaped the
// cap (only possible when the scale is free).
bool newton_calibrate(const CalibrationProblem& prob, Eigen::VectorXd& params, double fixed_scale,
                      bool fix_scale) {
  Eigen::VectorXd grad;
  Eigen::MatrixXd hess;
  double f = calibration_objective(prob, params, fixed_scale, fix_scale, &grad, &hess);
  for (int iter = 0; iter < 200; ++iter) {
    if (grad.size() == 0 || grad.cwiseAbs().maxCoeff() < 1e-11) return true;
    const double damping = 1e-12 * std::max(1.0, hess.diagonal().cwiseAbs().maxCoeff());
    const Eigen::MatrixXd h = hess + damping * Eigen::MatrixXd::Identity(hess.rows(), hess.cols());
    Eigen::VectorXd step = -h.ldlt().solve(grad);
    if (!step.allFinite() || grad.dot(step) >= 0.0) step = -grad;
    double t = 1.0;
    bool accepted = false;
    for (int k = 0; k < 60; ++k) {
      const Eigen::VectorXd trial = params + t * step;
      const double ft = calibration_objective(prob, trial, fixed_scale, fix_scale, nullptr, nullptr);
      if (ft <= f + 1e-4 * t * grad.dot(step) + 4.0 * std::numeric_limits<double>::epsilon() * std::abs(f)) {
        params = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) return true;
    if (!fix_scale && std::abs(params[0]) > kMaxCalibrationScale) return false;
    f = calibration_objective(prob, params, fixed_scale, fix_scale, &grad, &hess);
  }
  return fix_scale || std::abs(params[0]) <= kMaxCalibrationScale;
}

// True when eta = s * u + c ranks the observed class strictly first for every
// row; the loss then keeps falling as (s, c) grows without bound.
bool separates(const CalibrationProblem& prob, const Eigen::VectorXd& params) {
  const Eigen::Index k = prob.u.cols();
  Eigen::VectorXd eta(k);
  for (Eigen::Index i = 0; i < prob.u.rows(); ++i) {
    for (Eigen::Index c = 0; c < k; ++c) {
      eta[c] = params[0] * prob.u(i, c) + (c > 0 ? params[c] : 0.0);
    }
    const int y = prob.y[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < k; ++c) {
      if (c != y && eta[c] >= eta[y]) return false;
    }
  }
  return true;
}

}  // namespace

LogisticModel calibrate(const LogisticModel& model, const std::vector<Example>& originals) {
  const int k = model.num_classes();
  if (originals.empty()) throw DegenerateDataError("calibration needs original examples");
  CalibrationProblem prob;
  prob.u.resize(static_cast<Eigen::Index>(originals.size()), k);
  prob.y.reserve(originals.size());
  for (std::size_t i = 0; i < originals.size(); ++i) {
    const Eigen::VectorXd phi = apply_feature_map(model.feature_map, originals[i].x);
    if (phi.size() != model.num_features()) throw ShapeError("original has the wrong dimension");
    if (originals[i].y < 0 || originals[i].y >= k) throw ShapeError("label out of range");
    prob.u.row(static_cast<Eigen::Index>(i)) = (model.beta.transpose() * phi).transpose();
    prob.y.push_back(originals[i].y);
  }
  require_all_classes(prob.y, k);

  LogisticModel out = model;
  out.calibration_capped = false;

  // Differences to class 0 carry all the information the scale can use.
  Eigen::MatrixXd diff = prob.u.colwise() - prob.u.col(0);
  const double spread = (diff.colwise().maxCoeff() - diff.colwise().minCoeff()).maxCoeff();
  const double magnitude = std::max(1.0, diff.cwiseAbs().maxCoeff());
  const bool constant_scores = spread <= 1e-12 * magnitude;

  double scale = 0.0;
  Eigen::VectorXd intercepts = Eigen::VectorXd::Zero(k - 1);
  if (!constant_scores) {
    Eigen::VectorXd params = Eigen::VectorXd::Zero(k);
    params[0] = 1.0;
    const bool ok = newton_calibrate(prob, params, 0.0, false) && !separates(prob, params);
    scale = params[0];
    intercepts = params.tail(k - 1);
    if (!ok) {
      scale = std::copysign(kMaxCalibrationScale, scale);
      out.calibration_capped = true;
      newton_calibrate(prob, intercepts, scale, true);
    } else if (k > 2 && scale < 0.0) {
      scale = 0.0;
      intercepts.setZero();
      newton_calibrate(prob, intercepts, 0.0, true);
    }
  } else {
    // Scores carry no information: intercepts reproduce class frequencies.
    newton_calibrate(prob, intercepts, 0.0, true);
  }

  out.calib_scale = scale;
  out.calib_c.resize(k);
  out.calib_c[0] = 0.0;
  out.calib_c.tail(k - 1) = intercepts;
  out.calib_c.array() -= out.calib_c.mean();
  return out;
}

// ---------------------------------------------------------------------------
// Prediction

Eigen::VectorXd model_scores(const LogisticModel& model, const Eigen::VectorXd& phi) {
  if (phi.size() != model.num_features()) {
    throw ShapeError("feature length " + std::to_string(phi.size()) + " does not match model (" +
                     std::to_string(model.num_features()) + ")");
  }
  Eigen::VectorXd s = model.calib_scale * (model.beta.transpose() * phi);
  if (model.calib_c.size() == s.size()) s += model.calib_c;
  return s;
}

Prediction predict(const LogisticModel& model, const Features& x) {
  const Eigen::VectorXd s = model_scores(model, apply_feature_map(model.feature_map, x));
  Prediction out;
  out.probabilities = (s.array() - log_sum_exp(s)).exp();
  out.probabilities /= out.probabilities.sum();
  Eigen::Index best = 0;
  for (Eigen::Index k = 1; k < s.size(); ++k) {
    if (s[k] > s[best]) best = k;
  }
  out.label = static_cast<int>(best);
  return out;
}

double mean_log_loss(const LogisticModel& model, const std::vector<Example>& examples) {
  if (examples.empty()) return 0.0;
  double total = 0.0;
  for (const auto& ex : examples) {
    const Eigen::VectorXd s = model_scores(model, apply_feature_map(model.feature_map, ex.x));
    total += log_sum_exp(s) - s[ex.y];
  }
  return total / static_cast<double>(examples.size());
}

double error_rate(const LogisticModel& model, const std::vector<Example>& examples) {
  if (examples.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const auto& ex : examples) {
    if (predict(model, ex.x).label != ex.y) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(examples.size());
}

}  // namespace levythin
