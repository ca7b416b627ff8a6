#include "commands.hpp"

#include "manifest.hpp"

#include "levythin/dataset_io.hpp"
#include "levythin/errors.hpp"
#include "levythin/limit_loss.hpp"
#include "levythin/logistic.hpp"
#include "levythin/model_io.hpp"
#include "levythin/simulation.hpp"
#include "levythin/thinning.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace levythin::cli {

namespace {

using nlohmann::json;

// Data rows start on line 3, after the version line and the column header.
std::string row_label(std::size_t index) {
  return "row " + std::to_string(index + 1) + " (line " + std::to_string(index + 3) + ")";
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open '" + path + "'");
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  return out;
}

Dataset load_dataset(const std::string& path, std::optional<double> t) {
  std::ifstream in = open_input(path);
  try {
    Dataset ds = read_dataset(in, t);
    if (t) {
      for (auto& ex : ds.examples) ex.t = *t;
    }
    if (ds.examples.empty()) throw FormatError("no data rows");
    return ds;
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

Eigen::MatrixXd load_matrix(const std::string& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    for (char& c : line) {
      if (c == ',') c = ' ';
    }
    std::istringstream fields(line);
    std::vector<double> row;
    std::string token;
    while (fields >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != token.size()) {
        throw FormatError(path + ": line " + std::to_string(line_no) + ": bad number '" + token +
                          "'");
      }
      row.push_back(v);
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  const auto d = static_cast<Eigen::Index>(rows.size());
  if (d == 0) throw FormatError(path + ": empty matrix");
  Eigen::MatrixXd m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (static_cast<Eigen::Index>(rows[static_cast<std::size_t>(i)].size()) != d) {
      throw FormatError(path + ": matrix must be square");
    }
    for (Eigen::Index j = 0; j < d; ++j) m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  }
  return m;
}

int feature_dimension(const Dataset& ds) {
  if (ds.wishart_d) return *ds.wishart_d;
  return static_cast<int>(ds.examples.front().x.vector().size());
}

LevyFamily make_family(const std::string& name, const Dataset& ds, const std::string& sigma_path) {
  const FamilyKind kind = family_kind_from_string(name);
  if ((kind == FamilyKind::wishart) != ds.wishart_d.has_value()) {
    throw ParameterError("family '" + name + "' does not match the dataset layout");
  }
  const int d = feature_dimension(ds);
  switch (kind) {
    case FamilyKind::poisson: return LevyFamily::poisson(d);
    case FamilyKind::gamma: return LevyFamily::gamma(d);
    case FamilyKind::wishart: return LevyFamily::wishart(d);
    case FamilyKind::gaussian: {
      Eigen::MatrixXd sigma = sigma_path.empty() ? Eigen::MatrixXd::Identity(d, d)
                                                 : load_matrix(sigma_path);
      if (sigma.rows() != d) throw ParameterError("sigma dimension does not match the data");
      return LevyFamily::gaussian(std::move(sigma));
    }
  }
  throw ParameterError("unknown family");
}

void validate_rows(const LevyFamily& family, const std::vector<Example>& examples) {
  for (std::size_t i = 0; i < examples.size(); ++i) {
    try {
      validate_example(family, examples[i]);
    } catch (const Error& e) {
      throw SupportError(row_label(i) + ": " + e.what());
    }
  }
}

void save_model(const std::string& path, const LogisticModel& model) {
  std::ofstream out = open_output(path);
  write_model(out, model);
}

}  // namespace

int cmd_thin(const ThinArgs& args, const std::string& command_line) {
  const Dataset ds = load_dataset(args.input, args.t);
  const LevyFamily family = make_family(args.family, ds, args.sigma_path);
  validate_rows(family, ds.examples);

  ThinningConfig cfg;
  cfg.alpha = args.alpha;
  cfg.B = args.B;
  cfg.seed = RngState{args.seed, 0};
  const auto pseudo = generate_pseudo_examples(ds.examples, cfg, family);
  {
    std::ofstream out = open_output(args.output);
    write_pseudo(out, pseudo);
  }
  json config = {{"command", "thin"},   {"input", args.input}, {"family", args.family},
                 {"alpha", args.alpha}, {"B", args.B},         {"sigma", args.sigma_path}};
  if (args.t) config["t"] = *args.t;
  write_manifest(args.output, command_line, args.seed, config,
                 {{"rows_in", ds.examples.size()}, {"rows_out", pseudo.size()}});
  return 0;
}

int cmd_train(const TrainArgs& args, const std::string& command_line) {
  std::optional<int> wishart_d;
  std::vector<PseudoExample> pseudo;
  {
    std::ifstream in = open_input(args.pseudo);
    try {
      pseudo = read_pseudo(in, &wishart_d);
    } catch (const FormatError& e) {
      throw FormatError(args.pseudo + ": " + e.what());
    }
  }
  if (pseudo.empty()) throw FormatError(args.pseudo + ": no data rows");
  const Dataset originals = load_dataset(args.originals, std::nullopt);
  if (originals.wishart_d != wishart_d) {
    throw FormatError("pseudo-examples and originals have different layouts");
  }
  const std::string family_name =
      args.family.empty() ? (wishart_d ? "wishart" : "poisson") : args.family;
  const FamilyKind kind = family_kind_from_string(family_name);

  int K = 0;
  for (const auto& p : pseudo) K = std::max(K, p.y + 1);
  for (const auto& ex : originals.examples) K = std::max(K, ex.y + 1);

  TrainConfig cfg;
  cfg.lambda_grid = args.lambdas;
  cfg.grid_size = args.grid_size;
  cfg.n_folds = args.folds;
  cfg.criterion = args.criterion == "error" ? CvCriterion::error : CvCriterion::log_loss;
  if (args.criterion != "error" && args.criterion != "log_loss") {
    throw ParameterError("criterion must be 'log_loss' or 'error'");
  }
  cfg.fold_seed = args.seed;
  cfg.feature_map = default_feature_map(kind);
  cfg.num_classes = K;

  FitResult fit = fit_logistic(pseudo, cfg);
  fit.model.family = kind;
  const LogisticModel model =
      args.no_calibrate ? fit.model : calibrate(fit.model, originals.examples);
  save_model(args.output, model);

  json report = json::object();
  report["format"] = "levythin-cv-report 1";
  if (fit.cv) {
    json points = json::array();
    for (const auto& p : fit.cv->points) {
      points.push_back({{"lambda", p.lambda},
                        {"held_out_log_loss", p.mean_log_loss},
                        {"held_out_error", p.mean_error},
                        {"failed_folds", p.failed_folds}});
    }
    report["points"] = points;
    report["chosen_lambda"] = fit.cv->chosen_lambda;
    report["chosen_index"] = fit.cv->chosen_index;
  } else {
    report["points"] = json::array();
    report["chosen_lambda"] = model.ridge_lambda;
  }
  report["criterion"] = args.criterion;
  report["folds"] = args.folds;
  report["calibrated"] = !args.no_calibrate;
  report["calibration_capped"] = model.calibration_capped;
  const std::string report_path = args.cv_report.empty() ? args.output + ".cv.json" : args.cv_report;
  {
    std::ofstream out = open_output(report_path);
    out << report.dump(2) << '\n';
  }
  json config = {{"command", "train"},      {"pseudo", args.pseudo},
                 {"originals", args.originals}, {"family", family_name},
                 {"lambdas", args.lambdas},  {"grid_size", args.grid_size},
                 {"folds", args.folds},      {"criterion", args.criterion},
                 {"calibrate", !args.no_calibrate}};
  write_manifest(args.output, command_line, args.seed, config, {{"cv_report", report_path}});
  return 0;
}

int cmd_simulate(const SimulateArgs& args, const std::string& command_line) {
  SweepConfig cfg;
  cfg.kind = sim_kind_from_string(args.spec);
  cfg.n_grid = args.n_grid;
  cfg.alphas = args.alphas;
  cfg.B = args.B;
  cfg.replicates = args.replicates;
  cfg.seed = args.seed;
  cfg.grid_size = args.grid_size;
  cfg.n_folds = args.folds;
  cfg.timing = args.timing;
  cfg.threads = args.threads > 0 ? args.threads
                                 : std::max(1, static_cast<int>(std::thread::hardware_concurrency()));

  std::ofstream out = open_output(args.output);
  write_sweep_csv_header(out);
  json failures = json::array();
  const SweepResult result = run_alpha_sweep(cfg, [&](const SweepRow& row) {
    write_sweep_csv_row(out, row);
    out.flush();
    if (!row.error.empty()) {
      failures.push_back({{"n", row.n},
                          {"alpha", row.alpha},
                          {"replicate", row.replicate},
                          {"error", row.error}});
    }
  });
  out.close();

  if (!args.svg.empty()) {
    std::ofstream svg = open_output(args.svg);
    write_sweep_svg(svg, result,
                    std::string(to_string(cfg.kind)) + " design: test error against alpha");
  }

  json constants = json::object();
  for (const auto& [k, v] : describe_spec(cfg)) constants[k] = v;
  json config = {{"command", "simulate"}, {"spec", args.spec},   {"n", args.n_grid},
                 {"alphas", args.alphas}, {"B", args.B},         {"replicates", args.replicates},
                 {"grid_size", args.grid_size}, {"folds", args.folds}};
  write_manifest(args.output, command_line, args.seed, config,
                 {{"spec_constants", constants},
                  {"rows", result.rows.size()},
                  {"failed_cells", failures}});
  return 0;
}

int cmd_limit(const LimitArgs& args, const std::string& command_line) {
  const Dataset ds = load_dataset(args.originals, args.t);
  const LevyFamily family = make_family(args.family, ds, args.sigma_path);
  if (family.kind() != FamilyKind::gaussian && family.kind() != FamilyKind::poisson) {
    throw ParameterError("limit fits support the gauss and poisson families only");
  }
  validate_rows(family, ds.examples);
  LogisticModel model = fit_strong_thinning(ds.examples, family, args.ridge);
  if (args.calibrate) model = calibrate(model, ds.examples);
  save_model(args.output, model);
  json config = {{"command", "limit"}, {"originals", args.originals}, {"family", args.family},
                 {"ridge", args.ridge}, {"calibrate", args.calibrate},
                 {"sigma", args.sigma_path}};
  write_manifest(args.output, command_line, args.seed, config);
  return 0;
}

}  // namespace levythin::cli
