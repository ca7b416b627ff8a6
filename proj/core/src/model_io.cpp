#include "levythin/model_io.hpp"

#include "levythin/errors.hpp"

#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace levythin {

namespace {

constexpr const char* kMagic = "levythin-model";
constexpr int kVersion = 1;

double parse_real(const std::string& token) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != token.size()) {
    if (token == "nan") return std::numeric_limits<double>::quiet_NaN();
    throw FormatError("model: cannot parse number '" + token + "'");
  }
  return value;
}

std::istringstream expect_line(std::istream& in, const std::string& key) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string head;
    fields >> head;
    if (head != key) throw FormatError("model: expected '" + key + "', found '" + head + "'");
    return fields;
  }
  throw FormatError("model: missing '" + key + "' record");
}

std::vector<double> read_reals(std::istringstream& fields, std::size_t count,
                               const std::string& key) {
  std::vector<double> values;
  std::string token;
  while (fields >> token) values.push_back(parse_real(token));
  if (values.size() != count) {
    throw FormatError("model: '" + key + "' expects " + std::to_string(count) + " values, got " +
                      std::to_string(values.size()));
  }
  return values;
}

}  // namespace

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_model(std::ostream& out, const LogisticModel& model) {
  const int p = model.num_features();
  const int k = model.num_classes();
  out << kMagic << ' ' << kVersion << '\n';
  out << "family " << to_string(model.family) << '\n';
  out << "feature_map " << to_string(model.feature_map) << '\n';
  out << "dims " << p << ' ' << k << '\n';
  out << "ridge_lambda " << format_real(model.ridge_lambda) << '\n';
  out << "calib_scale " << format_real(model.calib_scale) << '\n';
  out << "calib_capped " << (model.calibration_capped ? 1 : 0) << '\n';
  out << "calib_c";
  for (int c = 0; c < k; ++c) {
    out << ' ' << format_real(model.calib_c.size() == k ? model.calib_c[c] : 0.0);
  }
  out << '\n';
  for (int j = 0; j < p; ++j) {
    out << "beta";
    for (int c = 0; c < k; ++c) out << ' ' << format_real(model.beta(j, c));
    out << '\n';
  }
}

LogisticModel read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("model: empty document");
  {
    std::istringstream head(line);
    std::string magic;
    int version = 0;
    head >> magic >> version;
    if (magic != kMagic) throw FormatError("model: not a levythin model document");
    if (version != kVersion) {
      throw FormatError("model: unsupported version " + std::to_string(version));
    }
  }
  LogisticModel model;
  {
    auto f = expect_line(in, "family");
    std::string name;
    f >> name;
    try {
      model.family = family_kind_from_string(name);
    } catch (const ParameterError& e) {
      throw FormatError(std::string("model: ") + e.what());
    }
  }
  {
    auto f = expect_line(in, "feature_map");
    std::string name;
    f >> name;
    try {
      model.feature_map = feature_map_from_string(name);
    } catch (const ParameterError& e) {
      throw FormatError(std::string("model: ") + e.what());
    }
  }
  int p = 0;
  int k = 0;
  {
    auto f = expect_line(in, "dims");
    if (!(f >> p >> k) || p < 1 || k < 2) throw FormatError("model: bad dims record");
  }
  {
    auto f = expect_line(in, "ridge_lambda");
    model.ridge_lambda = read_reals(f, 1, "ridge_lambda")[0];
  }
  {
    auto f = expect_line(in, "calib_scale");
    model.calib_scale = read_reals(f, 1, "calib_scale")[0];
  }
  {
    auto f = expect_line(in, "calib_capped");
    int flag = 0;
    if (!(f >> flag)) throw FormatError("model: bad calib_capped record");
    model.calibration_capped = flag != 0;
  }
  {
    auto f = expect_line(in, "calib_c");
    const auto c = read_reals(f, static_cast<std::size_t>(k), "calib_c");
    model.calib_c = Eigen::Map<const Eigen::VectorXd>(c.data(), k);
  }
  model.beta.resize(p, k);
  for (int j = 0; j < p; ++j) {
    auto f = expect_line(in, "beta");
    const auto row = read_reals(f, static_cast<std::size_t>(k), "beta");
    for (int c = 0; c < k; ++c) model.beta(j, c) = row[static_cast<std::size_t>(c)];
  }
  return model;
}

std::string model_to_string(const LogisticModel& model) {
  std::ostringstream out;
  write_model(out, model);
  return out.str();
}

LogisticModel model_from_string(const std::string& text) {
  std::istringstream in(text);
  return read_model(in);
}

}  // namespace levythin
