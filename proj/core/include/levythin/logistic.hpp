#pragma once

#include "levythin/family.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

namespace levythin {

/// phi: identity for vector features, upper-triangle flattening for matrices.
enum class FeatureMap { identity, flatten_symmetric };

std::string_view to_string(FeatureMap map);
FeatureMap feature_map_from_string(std::string_view name);
FeatureMap default_feature_map(FamilyKind kind);

Eigen::VectorXd apply_feature_map(FeatureMap map, const Features& x);

/// Multiclass linear model. Scores are calib_scale * beta.col(k) . phi(x) +
/// calib_c[k]; beta is kept in the centered gauge (rows sum to zero).
struct LogisticModel {
  Eigen::MatrixXd beta;     // p x K
  Eigen::VectorXd calib_c;  // K intercepts, default 0
  double calib_scale = 1.0;
  FeatureMap feature_map = FeatureMap::identity;
  FamilyKind family = FamilyKind::poisson;
  double ridge_lambda = 0.0;
  bool calibration_capped = false;

  int num_features() const noexcept { return static_cast<int>(beta.rows()); }
  int num_classes() const noexcept { return static_cast<int>(beta.cols()); }
};

/// Makes every row of beta sum to zero across classes.
void center_classes(Eigen::MatrixXd& beta);

/// log(sum_k exp(beta_k . x)) - beta_y . x, stabilized.
double logistic_loss(const Eigen::MatrixXd& beta, const Eigen::VectorXd& x, int y);

/// Gradient of logistic_loss with respect to beta (p x K).
Eigen::MatrixXd loss_gradient(const Eigen::MatrixXd& beta, const Eigen::VectorXd& x, int y);

/// Feature rows after phi, stored sparse (Poisson documents are mostly zero).
struct TrainingSet {
  Eigen::SparseMatrix<double, Eigen::RowMajor> x;  // N x p
  std::vector<int> y;
  std::vector<std::size_t> groups;  // origin id per row
  int num_classes = 0;

  std::size_t size() const noexcept { return y.size(); }
};

TrainingSet make_training_set(const std::vector<PseudoExample>& pseudo, FeatureMap map,
                              int num_classes = 0);
TrainingSet make_training_set(const std::vector<Example>& examples, FeatureMap map,
                              int num_classes = 0);
TrainingSet select_rows(const TrainingSet& data, const std::vector<std::size_t>& rows);

/// Mean logistic loss plus (lambda / 2) ||beta||_F^2; fills grad if given.
double penalized_loss(const TrainingSet& data, const Eigen::MatrixXd& beta, double lambda,
                      Eigen::MatrixXd* grad = nullptr);

/// Mean logistic loss and error rate of raw scores beta . phi(x).
struct HeldOutScore {
  double log_loss = 0.0;
  double error = 0.0;
};
HeldOutScore score_rows(const TrainingSet& data, const Eigen::MatrixXd& beta);

enum class CvCriterion { log_loss, error };

struct TrainConfig {
  /// Descending. One value: fit at that lambda. Empty: automatic grid.
  std::vector<double> lambda_grid;
  int grid_size = 50;
  double grid_ratio = 1e-4;
  int n_folds = 5;
  double tolerance = 1e-7;
  int max_iterations = 5000;
  CvCriterion criterion = CvCriterion::log_loss;
  std::uint64_t fold_seed = 0;
  FeatureMap feature_map = FeatureMap::identity;
  int num_classes = 0;  // 0 infers K = max label + 1
};

struct CvPoint {
  double lambda = 0.0;
  double mean_log_loss = 0.0;
  double mean_error = 0.0;
  int failed_folds = 0;
};

struct CvReport {
  std::vector<CvPoint> points;
  std::size_t chosen_index = 0;
  double chosen_lambda = 0.0;
};

struct FitResult {
  LogisticModel model;
  std::optional<CvReport> cv;
};

/// Fold index per row such that rows sharing a group share a fold. Groups
/// are shuffled with the seed, then dealt round-robin.
std::vector<int> grouped_folds(const std::vector<std::size_t>& groups, int n_folds,
                               std::uint64_t seed);

/// size log-spaced values from ||grad L(0)||_inf down by grid_ratio.
std::vector<double> default_lambda_grid(const TrainingSet& data, int size, double ratio);

/// Ridge fit at a single lambda, warm-started. Throws OptimizationError.
Eigen::MatrixXd fit_ridge(const TrainingSet& data, double lambda, const Eigen::MatrixXd& warm,
                          double tolerance, int max_iterations);

FitResult fit_logistic(const TrainingSet& data, const TrainConfig& cfg);
FitResult fit_logistic(const std::vector<PseudoExample>& pseudo, const TrainConfig& cfg);

/// Refits a common slope and per-class intercepts on the original examples.
LogisticModel calibrate(const LogisticModel& model, const std::vector<Example>& originals);

struct Prediction {
  int label = 0;
  Eigen::VectorXd probabilities;
};

Eigen::VectorXd model_scores(const LogisticModel& model, const Eigen::VectorXd& phi);
Prediction predict(const LogisticModel& model, const Features& x);

/// Mean -log P(y | x) under the model (calibration included).
double mean_log_loss(const LogisticModel& model, const std::vector<Example>& examples);
double error_rate(const LogisticModel& model, const std::vector<Example>& examples);

int infer_num_classes(const std::vector<int>& labels);

}  // namespace levythin
