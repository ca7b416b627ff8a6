#include "levythin/limit_loss.hpp"

#include "levythin/errors.hpp"
#include "levythin/lbfgs.hpp"
#include "levythin/linalg.hpp"
#include "levythin/thinning.hpp"

#include <cmath>
#include <map>
#include <string>

namespace levythin {

LevyItoDescriptor LevyItoDescriptor::for_family(const LevyFamily& family) {
  const int d = family.dimension();
  LevyItoDescriptor out;
  // The drift is topic-specific; conditioning on A_T = x absorbs it into mu_T.
  out.drift = Eigen::VectorXd::Zero(d);
  switch (family.kind()) {
    case FamilyKind::gaussian:
      out.diffusion = family.sigma();
      out.jumps = JumpPart::none;
      break;
    case FamilyKind::poisson:
      out.diffusion = Eigen::MatrixXd::Zero(d, d);
      out.jumps = JumpPart::unit_basis;
      break;
    default:
      throw ParameterError("no conditional jump law for the " +
                           std::string(to_string(family.kind())) + " family");
  }
  return out;
}

ConditionalJumpLaw gaussian_jump_law() {
  ConditionalJumpLaw law;
  law.mu = [](const Example& ex) { return ex.x.vector(); };
  law.lambda = [](const Example&) { return 0.0; };
  law.nu = [](const Example&) { return std::vector<JumpAtom>{}; };
  return law;
}

ConditionalJumpLaw poisson_jump_law() {
  ConditionalJumpLaw law;
  law.mu = [](const Example& ex) { return Eigen::VectorXd::Zero(ex.x.vector().size()).eval(); };
  law.lambda = [](const Example& ex) { return ex.x.vector().sum(); };
  law.nu = [](const Example& ex) {
    const auto& x = ex.x.vector();
    const double total = x.sum();
    std::vector<JumpAtom> atoms;
    if (total <= 0.0) return atoms;
    for (Eigen::Index j = 0; j < x.size(); ++j) {
      if (x[j] == 0.0) continue;
      JumpAtom atom;
      atom.z.resize(x.size());
      atom.z.insert(j) = 1.0;
      atom.probability = x[j] / total;
      atoms.push_back(std::move(atom));
    }
    return atoms;
  };
  return law;
}

ConditionalJumpLaw jump_law_for(const LevyFamily& family) {
  switch (family.kind()) {
    case FamilyKind::gaussian: return gaussian_jump_law();
    case FamilyKind::poisson: return poisson_jump_law();
    default:
      throw ParameterError("strong thinning is only available for gaussian and poisson families");
  }
}

namespace {

// Adds w * loss(beta; z, y) to value and its gradient (wrt centered beta)
// to grad. s is scratch of length K.
void add_atom(const Eigen::MatrixXd& beta, const Eigen::SparseVector<double>& z, double w, int y,
              Eigen::VectorXd& s, double& value, Eigen::MatrixXd* grad) {
  s.setZero();
  for (Eigen::SparseVector<double>::InnerIterator it(z); it; ++it) {
    s += it.value() * beta.row(it.index()).transpose();
  }
  const double lse = log_sum_exp(s);
  value += w * (lse - s[y]);
  if (grad) {
    s = (s.array() - lse).exp();
    s[y] -= 1.0;
    for (Eigen::SparseVector<double>::InnerIterator it(z); it; ++it) {
      grad->row(it.index()) += (w * it.value()) * s.transpose();
    }
  }
}

void add_jump_terms(const Eigen::MatrixXd& beta, const std::vector<JumpAtom>& atoms, double rate,
                    int y, double& value, Eigen::MatrixXd* grad) {
  Eigen::VectorXd s(beta.cols());
  for (const JumpAtom& atom : atoms) {
    add_atom(beta, atom.z, rate * atom.probability, y, s, value, grad);
  }
}

bool has_diffusion(const Eigen::MatrixXd& sigma) {
  return sigma.size() > 0 && sigma.cwiseAbs().maxCoeff() > 0.0;
}

void project_gradient(Eigen::MatrixXd& grad) { center_classes(grad); }

}  // namespace

double limit_loss(const Eigen::MatrixXd& beta, const Example& example,
                  const ConditionalJumpLaw& law, const Eigen::MatrixXd& sigma) {
  Eigen::MatrixXd centered = beta;
  center_classes(centered);
  const Eigen::Index k = beta.cols();
  if (example.y < 0 || example.y >= k) throw ShapeError("label out of range");
  const Eigen::VectorXd mu = law.mu(example);
  if (mu.size() != beta.rows()) throw ShapeError("mu_T and beta dimensions differ");
  double value = -mu.dot(centered.col(example.y));
  if (has_diffusion(sigma)) {
    value += 0.5 * example.t / static_cast<double>(k) *
             (centered.transpose() * sigma * centered).trace();
  }
  const double rate = law.lambda(example);
  if (rate > 0.0) add_jump_terms(centered, law.nu(example), rate, example.y, value, nullptr);
  return value;
}

Eigen::MatrixXd limit_loss_gradient(const Eigen::MatrixXd& beta, const Example& example,
                                    const ConditionalJumpLaw& law, const Eigen::MatrixXd& sigma) {
  Eigen::MatrixXd centered = beta;
  center_classes(centered);
  const Eigen::Index k = beta.cols();
  if (example.y < 0 || example.y >= k) throw ShapeError("label out of range");
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(beta.rows(), k);
  grad.col(example.y) -= law.mu(example);
  if (has_diffusion(sigma)) grad += example.t / static_cast<double>(k) * (sigma * centered);
  const double rate = law.lambda(example);
  double unused = 0.0;
  if (rate > 0.0) add_jump_terms(centered, law.nu(example), rate, example.y, unused, &grad);
  project_gradient(grad);
  return grad;
}

LimitProblem LimitProblem::build(const std::vector<Example>& examples, const LevyFamily& family) {
  if (examples.empty()) throw DegenerateDataError("no examples");
  const ConditionalJumpLaw law = jump_law_for(family);
  LimitProblem problem;
  problem.num_features = family.dimension();
  if (family.kind() == FamilyKind::gaussian) problem.sigma = family.sigma();
  std::vector<int> labels;
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      validate_example(family, examples[i]);
    } catch (const Error& e) {
      throw SupportError("example " + std::to_string(i) + ": " + e.what());
    }
    labels.push_back(examples[i].y);
  }
  problem.num_classes = infer_num_classes(labels);
  if (problem.num_classes < 2) throw DegenerateDataError("need at least two classes");
  std::vector<int> counts(static_cast<std::size_t>(problem.num_classes), 0);
  for (int y : labels) ++counts[static_cast<std::size_t>(y)];
  for (int k = 0; k < problem.num_classes; ++k) {
    if (counts[static_cast<std::size_t>(k)] == 0) {
      throw DegenerateDataError("class " + std::to_string(k) + " has no examples");
    }
  }

  problem.mu_sum = Eigen::MatrixXd::Zero(problem.num_features, problem.num_classes);
  problem.num_examples = examples.size();
  using Key = std::pair<int, std::vector<std::pair<Eigen::Index, double>>>;
  std::map<Key, std::size_t> slot;
  for (const Example& ex : examples) {
    problem.mu_sum.col(ex.y) += law.mu(ex);
    problem.t_sum += ex.t;
    const double rate = law.lambda(ex);
    if (!(rate > 0.0)) continue;
    for (JumpAtom& atom : law.nu(ex)) {
      Key key{ex.y, {}};
      for (Eigen::SparseVector<double>::InnerIterator it(atom.z); it; ++it) {
        key.second.emplace_back(it.index(), it.value());
      }
      const auto [pos, fresh] = slot.emplace(std::move(key), problem.atoms.size());
      if (fresh) problem.atoms.push_back(Atom{std::move(atom.z), ex.y, 0.0});
      problem.atoms[pos->second].weight += rate * atom.probability;
    }
  }
  return problem;
}

double limit_objective(const LimitProblem& problem, const Eigen::MatrixXd& beta, double ridge,
                       Eigen::MatrixXd* grad) {
  const Eigen::Index k = problem.num_classes;
  if (beta.rows() != problem.num_features || beta.cols() != k) {
    throw ShapeError("beta has the wrong shape for this problem");
  }
  Eigen::MatrixXd centered = beta;
  center_classes(centered);
  if (grad) *grad = -problem.mu_sum;

  double value = -centered.cwiseProduct(problem.mu_sum).sum();
  Eigen::VectorXd s(k);
  for (const auto& atom : problem.atoms) {
    add_atom(centered, atom.z, atom.weight, atom.y, s, value, grad);
  }
  if (has_diffusion(problem.sigma)) {
    const Eigen::MatrixXd sb = problem.sigma * centered;
    value += 0.5 * problem.t_sum / static_cast<double>(k) * centered.cwiseProduct(sb).sum();
    if (grad) *grad += problem.t_sum / static_cast<double>(k) * sb;
  }
  const double inv_n = 1.0 / static_cast<double>(problem.num_examples);
  value *= inv_n;
  if (grad) {
    *grad *= inv_n;
    project_gradient(*grad);
    if (ridge > 0.0) *grad += ridge * beta;
  }
  return value + 0.5 * ridge * beta.squaredNorm();
}

LogisticModel fit_strong_thinning(const std::vector<Example>& examples, const LevyFamily& family,
                                  double ridge_lambda, const LimitFitOptions& options) {
  if (!(ridge_lambda >= 0.0)) throw ParameterError("ridge lambda must be nonnegative");
  const LimitProblem problem = LimitProblem::build(examples, family);
  const Eigen::Index p = problem.num_features;
  const Eigen::Index k = problem.num_classes;

  Eigen::MatrixXd beta(p, k);
  Eigen::MatrixXd grad(p, k);
  const Objective objective = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) {
    beta = Eigen::Map<const Eigen::MatrixXd>(v.data(), p, k);
    const double f = limit_objective(problem, beta, ridge_lambda, &grad);
    g = Eigen::Map<const Eigen::VectorXd>(grad.data(), p * k);
    return f;
  };
  LbfgsOptions lbfgs;
  lbfgs.gradient_tolerance = options.tolerance;
  lbfgs.max_iterations = options.max_iterations;
  const LbfgsResult result = minimize_lbfgs(objective, Eigen::VectorXd::Zero(p * k), lbfgs);
  if (!result.converged) {
    throw OptimizationError("strong-thinning fit did not converge", result.gradient_norm);
  }

  LogisticModel model;
  model.beta = Eigen::Map<const Eigen::MatrixXd>(result.x.data(), p, k);
  center_classes(model.beta);
  model.calib_c = Eigen::VectorXd::Zero(k);
  model.feature_map = FeatureMap::identity;
  model.family = family.kind();
  model.ridge_lambda = ridge_lambda;
  return model;
}

std::vector<AlphaPathRow> alpha_path_converges(const std::vector<Example>& examples,
                                               const LevyFamily& family,
                                               const std::vector<double>& alphas, int B,
                                               const AlphaPathOptions& options) {
  if (alphas.empty()) throw ParameterError("alpha list is empty");
  if (B < 200) throw ParameterError("alpha path needs B >= 200");
  for (double a : alphas) {
    if (!(a > 0.0 && a < 1.0)) throw ParameterError("alphas must lie in (0, 1)");
  }
  LimitFitOptions limit_options{options.tolerance, options.max_iterations};
  const LogisticModel limit =
      fit_strong_thinning(examples, family, options.ridge_lambda, limit_options);
  const double limit_norm = limit.beta.norm();
  if (!(limit_norm > 0.0)) throw DegenerateDataError("strong-thinning fit is identically zero");
  const Eigen::MatrixXd limit_dir = limit.beta / limit_norm;
  const Eigen::MatrixXd zero = Eigen::MatrixXd::Zero(limit.beta.rows(), limit.beta.cols());

  std::vector<AlphaPathRow> rows;
  for (std::size_t a = 0; a < alphas.size(); ++a) {
    ThinningConfig cfg;
    cfg.alpha = alphas[a];
    cfg.B = B;
    cfg.seed = RngState{hash_combine(options.seed, a, 0xa1fa), 0};
    const auto pseudo = generate_pseudo_examples(examples, cfg, family);
    const TrainingSet data =
        make_training_set(pseudo, FeatureMap::identity, limit.num_classes());
    const Eigen::MatrixXd beta = fit_ridge(data, alphas[a] * options.ridge_lambda, zero,
                                           options.tolerance, options.max_iterations);
    const double norm = beta.norm();
    AlphaPathRow row;
    row.alpha = alphas[a];
    row.distance = norm > 0.0 ? (beta / norm - limit_dir).norm() : std::sqrt(2.0);
    rows.push_back(row);
  }
  return rows;
}

NaiveBayesPoisson naive_bayes_poisson_fit(const std::vector<Example>& examples, double smoothing,
                                          int num_classes) {
  if (examples.empty()) throw DegenerateDataError("no examples");
  if (!(smoothing >= 0.0)) throw ParameterError("smoothing must be nonnegative");
  std::vector<int> labels;
  for (const auto& ex : examples) labels.push_back(ex.y);
  const int k = num_classes > 0 ? num_classes : infer_num_classes(labels);
  const auto d = examples.front().x.vector().size();

  Eigen::MatrixXd counts = Eigen::MatrixXd::Zero(d, k);
  Eigen::VectorXd exposure = Eigen::VectorXd::Zero(k);
  NaiveBayesPoisson nb;
  nb.class_counts = Eigen::VectorXd::Zero(k);
  for (const auto& ex : examples) {
    if (ex.y < 0 || ex.y >= k) throw ShapeError("label out of range");
    if (ex.x.vector().size() != d) throw ShapeError("examples differ in dimension");
    counts.col(ex.y) += ex.x.vector();
    exposure[ex.y] += ex.t;
    nb.class_counts[ex.y] += 1.0;
  }
  nb.rates.resize(d, k);
  for (int c = 0; c < k; ++c) {
    const double denom = exposure[c] + smoothing * static_cast<double>(d);
    nb.rates.col(c) = (counts.col(c).array() + smoothing) / denom;
  }
  nb.log_rates = nb.rates.array().log();
  return nb;
}

}  // namespace levythin
