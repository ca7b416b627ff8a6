#include "levythin/lbfgs.hpp"

#include <cmath>
#include <deque>
#include <limits>
#include <vector>

namespace levythin {

namespace {

struct Pair {
  Eigen::VectorXd s;
  Eigen::VectorXd y;
  double rho;
};

Eigen::VectorXd two_loop(const std::deque<Pair>& memory, const Eigen::VectorXd& grad) {
  Eigen::VectorXd q = grad;
  std::vector<double> a(memory.size());
  for (std::size_t i = memory.size(); i-- > 0;) {
    a[i] = memory[i].rho * memory[i].s.dot(q);
    q -= a[i] * memory[i].y;
  }
  if (!memory.empty()) {
    const Pair& last = memory.back();
    q *= last.s.dot(last.y) / last.y.squaredNorm();
  }
  for (std::size_t i = 0; i < memory.size(); ++i) {
    const double b = memory[i].rho * memory[i].y.dot(q);
    q += (a[i] - b) * memory[i].s;
  }
  return -q;
}

}  // namespace

LbfgsResult minimize_lbfgs(const Objective& objective, Eigen::VectorXd x0,
                           const LbfgsOptions& options) {
  constexpr double c1 = 1e-4;
  const double eps = std::numeric_limits<double>::epsilon();

  LbfgsResult result;
  result.x = std::move(x0);
  Eigen::VectorXd grad(result.x.size());
  double f = objective(result.x, grad);
  std::deque<Pair> memory;

  Eigen::VectorXd x_new(result.x.size());
  Eigen::VectorXd grad_new(result.x.size());
  bool restarted = false;

  for (int iter = 0;; ++iter) {
    result.iterations = iter;
    result.gradient_norm = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    if (result.gradient_norm <= options.gradient_tolerance) {
      result.converged = true;
      break;
    }
    if (iter >= options.max_iterations || !std::isfinite(f)) break;

    Eigen::VectorXd direction = two_loop(memory, grad);
    double slope = grad.dot(direction);
    if (!(slope < 0.0)) {
      memory.clear();
      direction = -grad;
      slope = -grad.squaredNorm();
    }
    double step = memory.empty() ? std::min(1.0, 1.0 / grad.cwiseAbs().maxCoeff()) : 1.0;

    // Slack for round-off once decreases approach machine precision.
    const double slack = 4.0 * eps * std::abs(f);
    bool accepted = false;
    double f_new = f;
    for (int k = 0; k < 60; ++k) {
      x_new = result.x + step * direction;
      f_new = objective(x_new, grad_new);
      if (std::isfinite(f_new) && f_new <= f + c1 * step * slope + slack) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      if (memory.empty() || restarted) break;
      memory.clear();
      restarted = true;
      continue;
    }
    restarted = false;

    Eigen::VectorXd s = x_new - result.x;
    Eigen::VectorXd y = grad_new - grad;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm() && sy > 0.0) {
      memory.push_back({std::move(s), std::move(y), 1.0 / sy});
      if (static_cast<int>(memory.size()) > options.history) memory.pop_front();
    }
    result.x.swap(x_new);
    grad.swap(grad_new);
    f = f_new;
  }
  result.value = f;
  return result;
}

}  // namespace levythin
