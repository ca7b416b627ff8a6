#pragma once

#include "levythin/family.hpp"
#include "levythin/logistic.hpp"
#include "levythin/rng.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace levythin {

/// Gaussian mixture design: each class owns atoms whose first n_signal
/// coordinates are atom_scale * t(dof) draws and the rest zero; X ~ N(mu, I).
struct GaussianSimSpec {
  int d = 100;
  int n_signal = 20;
  int atoms_per_class = 10;
  double atom_scale = 1.1;
  double t_dof = 4.0;
};

/// Poisson word-count design: class 0 has theta = 1 on the first block of
/// block words, class 1 has theta = tau on the second block with
/// tau ~ Exp(tau_rate), all other coordinates zero; X_j ~ Pois(total_rate *
/// softmax(theta)_j).
struct PoissonSimSpec {
  int d = 500;
  double total_rate = 1000.0;
  int block = 7;
  double tau_rate = 3.0;
};

struct SimData {
  std::vector<Example> train;
  std::vector<Example> test;
};

/// 10 n test examples, capped at 10000.
std::size_t test_size_for(std::size_t n);

/// Per class, atoms_per_class mean vectors.
std::vector<std::vector<Eigen::VectorXd>> draw_gaussian_atoms(const GaussianSimSpec& spec,
                                                              Rng& rng);

/// Fresh atoms are drawn from rng on every call. T = 1 for every example.
SimData gen_gaussian_sim(const GaussianSimSpec& spec, std::size_t n, Rng& rng);

/// T = total_rate for every example.
SimData gen_poisson_sim(const PoissonSimSpec& spec, std::size_t n, Rng& rng);

/// Class-0 topic and the class-1 topic for a given tau, psi-normalized.
Topic poisson_sim_topic(const PoissonSimSpec& spec, int y, double tau);

enum class SimKind { gaussian, poisson };

std::string_view to_string(SimKind kind);
SimKind sim_kind_from_string(std::string_view name);

LevyFamily sim_family(SimKind kind, const GaussianSimSpec& g, const PoissonSimSpec& p);

struct SweepConfig {
  SimKind kind = SimKind::poisson;
  GaussianSimSpec gaussian;
  PoissonSimSpec poisson;
  std::vector<std::size_t> n_grid{100};
  std::vector<double> alphas{0.0, 0.1, 0.25, 0.5, 0.75, 1.0};
  int B = 32;
  int replicates = 20;
  std::uint64_t seed = 0;
  int grid_size = 50;
  double grid_ratio = 1e-4;
  int n_folds = 5;
  double limit_ridge = 1e-6;  // ridge of the alpha = 0 endpoint
  int threads = 1;
  bool timing = false;  // record wall time; otherwise wall_ms = 0
};

struct SweepRow {
  std::string spec;
  std::size_t n = 0;
  double alpha = 0.0;
  int replicate = 0;
  double test_error = 0.0;  // NaN when the cell failed
  double lambda = 0.0;
  double wall_ms = 0.0;
  std::string error;  // empty on success
  double train_loss_raw = 0.0;
  double train_loss_calibrated = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;
};

/// Runs every (n, replicate) cell; all alphas in a cell share the same data.
/// on_row (if given) receives rows in deterministic (n, replicate, alpha)
/// order as soon as they are available.
SweepResult run_alpha_sweep(const SweepConfig& cfg,
                            const std::function<void(const SweepRow&)>& on_row = {});

/// One cell: thins, fits, calibrates and evaluates every alpha on one data set.
std::vector<SweepRow> run_sweep_cell(const SweepConfig& cfg, const SimData& data, std::size_t n,
                                     int replicate);

SimData generate_cell_data(const SweepConfig& cfg, std::size_t n, int replicate);

inline constexpr const char* kSweepCsvHeader = "spec,n,alpha,replicate,test_error,lambda,wall_ms";

void write_sweep_csv_header(std::ostream& out);
void write_sweep_csv_row(std::ostream& out, const SweepRow& row);

/// Mean test error per (n, alpha), failed cells skipped.
struct SweepSummary {
  std::size_t n = 0;
  double alpha = 0.0;
  double mean_error = 0.0;
  int count = 0;
};
std::vector<SweepSummary> summarize(const SweepResult& result);

/// Line plot of mean error against alpha, one series per n.
void write_sweep_svg(std::ostream& out, const SweepResult& result, const std::string& title);

/// Fixed design constants, as (name, value) pairs for manifests.
std::vector<std::pair<std::string, std::string>> describe_spec(const SweepConfig& cfg);

}  // namespace levythin
