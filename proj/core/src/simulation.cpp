#include "levythin/simulation.hpp"

#include "levythin/distributions.hpp"
#include "levythin/errors.hpp"
#include "levythin/limit_loss.hpp"
#include "levythin/linalg.hpp"
#include "levythin/thinning.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <thread>

namespace levythin {

namespace {

constexpr std::uint64_t kDataTag = 0xda7a;
constexpr std::uint64_t kThinTag = 0x7417;
constexpr std::uint64_t kFoldTag = 0xf01d;

std::uint64_t cell_seed(std::uint64_t seed, std::size_t n, int replicate, std::uint64_t tag,
                        std::size_t index = 0) {
  return hash_combine(hash_combine(seed, n, static_cast<std::uint64_t>(replicate)), tag, index);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

int sample_label(Rng& rng) { return rng.uniform() < 0.5 ? 0 : 1; }

}  // namespace

std::size_t test_size_for(std::size_t n) { return std::min<std::size_t>(10 * n, 10000); }

std::vector<std::vector<Eigen::VectorXd>> draw_gaussian_atoms(const GaussianSimSpec& spec,
                                                              Rng& rng) {
  if (spec.n_signal > spec.d || spec.atoms_per_class < 1) {
    throw ParameterError("invalid gaussian simulation spec");
  }
  std::vector<std::vector<Eigen::VectorXd>> atoms(2);
  for (auto& list : atoms) {
    for (int a = 0; a < spec.atoms_per_class; ++a) {
      Eigen::VectorXd mu = Eigen::VectorXd::Zero(spec.d);
      for (int j = 0; j < spec.n_signal; ++j) {
        mu[j] = spec.atom_scale * sample_student_t(spec.t_dof, rng);
      }
      list.push_back(std::move(mu));
    }
  }
  return atoms;
}

SimData gen_gaussian_sim(const GaussianSimSpec& spec, std::size_t n, Rng& rng) {
  if (n < 2) throw ParameterError("simulation needs n >= 2");
  const auto atoms = draw_gaussian_atoms(spec, rng);
  auto draw = [&](std::size_t count) {
    std::vector<Example> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int y = sample_label(rng);
      const auto a = std::min<std::size_t>(
          static_cast<std::size_t>(rng.uniform() * spec.atoms_per_class),
          static_cast<std::size_t>(spec.atoms_per_class - 1));
      Eigen::VectorXd x = atoms[static_cast<std::size_t>(y)][a] + sample_std_normal_vector(spec.d, rng);
      out.push_back(Example{Features(std::move(x)), y, 1.0});
    }
    return out;
  };
  SimData data;
  data.train = draw(n);
  data.test = draw(test_size_for(n));
  return data;
}

Topic poisson_sim_topic(const PoissonSimSpec& spec, int y, double tau) {
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(spec.d);
  if (y == 0) {
    theta.head(spec.block).setOnes();
  } else {
    theta.segment(spec.block, spec.block).setConstant(tau);
  }
  return Topic::normalized_poisson(theta);
}

SimData gen_poisson_sim(const PoissonSimSpec& spec, std::size_t n, Rng& rng) {
  if (n < 2) throw ParameterError("simulation needs n >= 2");
  if (2 * spec.block > spec.d || !(spec.total_rate > 0.0) || !(spec.tau_rate > 0.0)) {
    throw ParameterError("invalid poisson simulation spec");
  }
  auto draw = [&](std::size_t count) {
    std::vector<Example> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const int y = sample_label(rng);
      const double tau = y == 1 ? sample_exponential(spec.tau_rate, rng) : 0.0;
      const Eigen::VectorXd probs = poisson_sim_topic(spec, y, tau).theta().vector().array().exp();
      Eigen::VectorXd x(spec.d);
      for (int j = 0; j < spec.d; ++j) {
        x[j] = static_cast<double>(sample_poisson(spec.total_rate * probs[j], rng));
      }
      out.push_back(Example{Features(std::move(x)), y, spec.total_rate});
    }
    return out;
  };
  SimData data;
  data.train = draw(n);
  data.test = draw(test_size_for(n));
  return data;
}

std::string_view to_string(SimKind kind) {
  return kind == SimKind::gaussian ? "gauss" : "poisson";
}

SimKind sim_kind_from_string(std::string_view name) {
  if (name == "gauss" || name == "gaussian") return SimKind::gaussian;
  if (name == "poisson") return SimKind::poisson;
  throw ParameterError("unknown simulation spec '" + std::string(name) + "'");
}

LevyFamily sim_family(SimKind kind, const GaussianSimSpec& g, const PoissonSimSpec& p) {
  if (kind == SimKind::gaussian) return LevyFamily::gaussian(Eigen::MatrixXd::Identity(g.d, g.d));
  return LevyFamily::poisson(p.d);
}

SimData generate_cell_data(const SweepConfig& cfg, std::size_t n, int replicate) {
  Rng rng(RngState{cell_seed(cfg.seed, n, replicate, kDataTag), 0});
  if (cfg.kind == SimKind::gaussian) return gen_gaussian_sim(cfg.gaussian, n, rng);
  return gen_poisson_sim(cfg.poisson, n, rng);
}

std::vector<SweepRow> run_sweep_cell(const SweepConfig& cfg, const SimData& data, std::size_t n,
                                     int replicate) {
  const LevyFamily family = sim_family(cfg.kind, cfg.gaussian, cfg.poisson);
  std::vector<SweepRow> rows;
  for (std::size_t a = 0; a < cfg.alphas.size(); ++a) {
    const double alpha = cfg.alphas[a];
    SweepRow row;
    row.spec = std::string(to_string(cfg.kind));
    row.n = n;
    row.alpha = alpha;
    row.replicate = replicate;
    const auto start = std::chrono::steady_clock::now();
    try {
      if (!(alpha >= 0.0 && alpha <= 1.0)) throw ParameterError("alpha must lie in [0, 1]");
      LogisticModel model;
      if (alpha == 0.0) {
        model = fit_strong_thinning(data.train, family, cfg.limit_ridge);
        row.lambda = cfg.limit_ridge;
      } else {
        TrainConfig tc;
        tc.grid_size = cfg.grid_size;
        tc.grid_ratio = cfg.grid_ratio;
        tc.n_folds = cfg.n_folds;
        tc.num_classes = 2;
        tc.fold_seed = cell_seed(cfg.seed, n, replicate, kFoldTag, a);
        FitResult fit;
        if (alpha == 1.0) {
          fit = fit_logistic(make_training_set(data.train, FeatureMap::identity, 2), tc);
        } else {
          ThinningConfig thin_cfg;
          thin_cfg.alpha = alpha;
          thin_cfg.B = cfg.B;
          thin_cfg.seed = RngState{cell_seed(cfg.seed, n, replicate, kThinTag, a), 0};
          fit = fit_logistic(generate_pseudo_examples(data.train, thin_cfg, family), tc);
        }
        model = std::move(fit.model);
        row.lambda = model.ridge_lambda;
      }
      row.train_loss_raw = mean_log_loss(model, data.train);
      const LogisticModel calibrated = calibrate(model, data.train);
      row.train_loss_calibrated = mean_log_loss(calibrated, data.train);
      row.test_error = error_rate(calibrated, data.test);
    } catch (const std::exception& e) {
      row.test_error = std::numeric_limits<double>::quiet_NaN();
      row.error = e.what();
    }
    if (cfg.timing) {
      row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                              start)
                        .count();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

SweepResult run_alpha_sweep(const SweepConfig& cfg,
                            const std::function<void(const SweepRow&)>& on_row) {
  if (cfg.n_grid.empty() || cfg.alphas.empty()) throw ParameterError("empty sweep grid");
  if (cfg.replicates < 1) throw ParameterError("replicates must be positive");
  if (cfg.B < 1) throw ParameterError("B must be positive");
  for (double a : cfg.alphas) {
    if (!(a >= 0.0 && a <= 1.0)) throw ParameterError("alphas must lie in [0, 1]");
  }

  struct Cell {
    std::size_t n;
    int replicate;
  };
  std::vector<Cell> cells;
  for (std::size_t n : cfg.n_grid) {
    if (n < 2) throw ParameterError("every n must be at least 2");
    for (int r = 0; r < cfg.replicates; ++r) cells.push_back({n, r});
  }

  std::vector<std::optional<std::vector<SweepRow>>> done(cells.size());
  std::size_t next_emit = 0;
  std::mutex mu;
  std::atomic<std::size_t> next_cell{0};

  auto worker = [&] {
    while (true) {
      const std::size_t i = next_cell.fetch_add(1);
      if (i >= cells.size()) return;
      std::vector<SweepRow> rows;
      try {
        const SimData data = generate_cell_data(cfg, cells[i].n, cells[i].replicate);
        rows = run_sweep_cell(cfg, data, cells[i].n, cells[i].replicate);
      } catch (const std::exception& e) {
        for (double alpha : cfg.alphas) {
          SweepRow row;
          row.spec = std::string(to_string(cfg.kind));
          row.n = cells[i].n;
          row.alpha = alpha;
          row.replicate = cells[i].replicate;
          row.test_error = std::numeric_limits<double>::quiet_NaN();
          row.error = e.what();
          rows.push_back(std::move(row));
        }
      }
      std::lock_guard<std::mutex> lock(mu);
      done[i] = std::move(rows);
      while (next_emit < done.size() && done[next_emit]) {
        if (on_row) {
          for (const auto& row : *done[next_emit]) on_row(row);
        }
        ++next_emit;
      }
    }
  };

  const int threads = std::max(1, std::min<int>(cfg.threads, static_cast<int>(cells.size())));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  SweepResult result;
  for (auto& cell : done) {
    for (auto& row : *cell) result.rows.push_back(std::move(row));
  }
  return result;
}

void write_sweep_csv_header(std::ostream& out) { out << kSweepCsvHeader << '\n'; }

void write_sweep_csv_row(std::ostream& out, const SweepRow& row) {
  out << row.spec << ',' << row.n << ',' << format_number(row.alpha) << ',' << row.replicate
      << ',' << (row.error.empty() ? format_number(row.test_error) : std::string("NA")) << ','
      << (row.error.empty() ? format_number(row.lambda) : std::string("NA")) << ',';
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", row.wall_ms);
  out << buf << '\n';
}

std::vector<SweepSummary> summarize(const SweepResult& result) {
  std::map<std::pair<std::size_t, double>, SweepSummary> acc;
  for (const auto& row : result.rows) {
    auto& s = acc[{row.n, row.alpha}];
    s.n = row.n;
    s.alpha = row.alpha;
    if (!row.error.empty() || std::isnan(row.test_error)) continue;
    s.mean_error += row.test_error;
    ++s.count;
  }
  std::vector<SweepSummary> out;
  for (auto& [key, s] : acc) {
    if (s.count > 0) s.mean_error /= s.count;
    else s.mean_error = std::numeric_limits<double>::quiet_NaN();
    out.push_back(s);
  }
  return out;
}

void write_sweep_svg(std::ostream& out, const SweepResult& result, const std::string& title) {
  const auto summary = summarize(result);
  constexpr double width = 640, height = 420, left = 60, right = 140, top = 40, bottom = 50;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  double max_err = 0.0;
  for (const auto& s : summary) {
    if (!std::isnan(s.mean_error)) max_err = std::max(max_err, s.mean_error);
  }
  if (max_err <= 0.0) max_err = 1.0;
  max_err *= 1.1;
  auto px = [&](double alpha) { return left + alpha * plot_w; };
  auto py = [&](double err) { return top + plot_h * (1.0 - err / max_err); };

  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  char buf[256];
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << left << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
      << title << "</text>\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n"
                "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
                left, top + plot_h, left + plot_w, top + plot_h, left, top, left, top + plot_h);
  out << buf;
  for (int i = 0; i <= 4; ++i) {
    const double a = i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"middle\">%g</text>\n",
                  px(a), top + plot_h + 16, a);
    out << buf;
    const double e = max_err * i / 4.0;
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "text-anchor=\"end\">%.3f</text>\n",
                  left - 6, py(e) + 4, e);
    out << buf;
  }
  std::snprintf(buf, sizeof buf,
                "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"12\" "
                "text-anchor=\"middle\">alpha</text>\n",
                left + plot_w / 2, height - 12);
  out << buf;

  std::map<std::size_t, std::vector<const SweepSummary*>> series;
  for (const auto& s : summary) series[s.n].push_back(&s);
  int color = 0;
  for (const auto& [n, points] : series) {
    const char* c = colors[color % 8];
    out << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    for (const auto* s : points) {
      if (std::isnan(s->mean_error)) continue;
      std::snprintf(buf, sizeof buf, "%.2f,%.2f ", px(s->alpha), py(s->mean_error));
      out << buf;
    }
    out << "\"/>\n";
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
                  "fill=\"%s\">n = %zu</text>\n",
                  left + plot_w + 12, top + 14.0 * (color + 1), c, n);
    out << buf;
    ++color;
  }
  out << "</svg>\n";
}

std::vector<std::pair<std::string, std::string>> describe_spec(const SweepConfig& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  if (cfg.kind == SimKind::gaussian) {
    const auto& g = cfg.gaussian;
    out = {{"d", std::to_string(g.d)},
           {"n_signal", std::to_string(g.n_signal)},
           {"atoms_per_class", std::to_string(g.atoms_per_class)},
           {"atom_scale", format_number(g.atom_scale)},
           {"t_dof", format_number(g.t_dof)}};
  } else {
    const auto& p = cfg.poisson;
    out = {{"d", std::to_string(p.d)},
           {"total_rate", format_number(p.total_rate)},
           {"block", std::to_string(p.block)},
           {"tau_rate", format_number(p.tau_rate)}};
  }
  out.emplace_back("B", std::to_string(cfg.B));
  out.emplace_back("replicates", std::to_string(cfg.replicates));
  out.emplace_back("grid_size", std::to_string(cfg.grid_size));
  out.emplace_back("grid_ratio", format_number(cfg.grid_ratio));
  out.emplace_back("n_folds", std::to_string(cfg.n_folds));
  out.emplace_back("limit_ridge", format_number(cfg.limit_ridge));
  return out;
}

}  // namespace levythin
