#include "levythin/dataset_io.hpp"

#include "levythin/errors.hpp"
#include "levythin/model_io.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

namespace levythin {

namespace {

constexpr std::string_view kDatasetMagic = "# levythin dataset v1";
constexpr std::string_view kPseudoMagic = "# levythin pseudo v1";

std::string where(std::size_t line) { return "line " + std::to_string(line) + ": "; }

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    std::string_view field = line.substr(start, comma == std::string_view::npos ? line.npos
                                                                                : comma - start);
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
      field.remove_suffix(1);
    }
    out.push_back(field);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_double(std::string_view s, std::size_t line, std::string_view column) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (!s.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (s.empty() || ec != std::errc() || ptr != last) {
    throw FormatError(where(line) + "column '" + std::string(column) + "': cannot parse '" +
                      std::string(s) + "' as a number");
  }
  return v;
}

long long parse_integer(std::string_view s, std::size_t line, std::string_view column) {
  const double v = parse_double(s, line, column);
  if (v != static_cast<double>(static_cast<long long>(v))) {
    throw FormatError(where(line) + "column '" + std::string(column) + "': '" + std::string(s) +
                      "' is not an integer");
  }
  return static_cast<long long>(v);
}

struct Header {
  std::optional<int> wishart_d;
  std::vector<std::string> columns;
};

// Reads the version line and column header; returns the line count consumed.
Header read_header(std::istream& in, std::string_view magic, std::size_t& line_no) {
  std::string line;
  if (!std::getline(in, line)) throw FormatError("empty input");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::string_view view(line);
  if (view.substr(0, magic.size()) != magic) {
    throw FormatError(where(line_no) + "expected version line '" + std::string(magic) + "'");
  }
  Header h;
  std::string_view rest = view.substr(magic.size());
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (!rest.empty()) {
    if (rest.substr(0, 2) != "d=") {
      throw FormatError(where(line_no) + "unrecognised header attribute '" + std::string(rest) +
                        "'");
    }
    const auto d = parse_integer(rest.substr(2), line_no, "d");
    if (d < 1) throw FormatError(where(line_no) + "d must be positive");
    h.wishart_d = static_cast<int>(d);
  }
  if (!std::getline(in, line)) throw FormatError(where(line_no + 1) + "missing column header");
  ++line_no;
  for (auto f : split(line)) h.columns.emplace_back(f);
  return h;
}

Features make_features(std::vector<double> values, const std::optional<int>& wishart_d,
                       std::size_t line) {
  Eigen::VectorXd v = Eigen::Map<Eigen::VectorXd>(values.data(),
                                                  static_cast<Eigen::Index>(values.size()));
  if (!wishart_d) return Features(std::move(v));
  const int d = *wishart_d;
  if (v.size() != d * (d + 1) / 2) {
    throw FormatError(where(line) + "expected " + std::to_string(d * (d + 1) / 2) +
                      " upper-triangle entries");
  }
  return Features(unflatten_symmetric(v, d));
}

void write_version(std::ostream& out, std::string_view magic, const Features& first) {
  out << magic;
  if (first.is_matrix()) out << " d=" << first.matrix().rows();
  out << '\n';
}

void write_feature_columns(std::ostream& out, Eigen::Index p) {
  for (Eigen::Index j = 0; j < p; ++j) out << ",x" << (j + 1);
  out << '\n';
}

void write_values(std::ostream& out, const Features& x) {
  const Eigen::VectorXd flat = x.flatten();
  for (Eigen::Index j = 0; j < flat.size(); ++j) out << ',' << format_real(flat[j]);
  out << '\n';
}

}  // namespace

Dataset read_dataset(std::istream& in, std::optional<double> default_t) {
  std::size_t line_no = 0;
  const Header h = read_header(in, kDatasetMagic, line_no);
  Dataset ds;
  ds.wishart_d = h.wishart_d;
  if (h.columns.empty() || h.columns[0] != "y") {
    throw FormatError(where(line_no) + "first column must be 'y'");
  }
  ds.has_t = h.columns.size() > 1 && h.columns[1] == "t";
  const std::size_t first_x = ds.has_t ? 2 : 1;
  if (h.columns.size() <= first_x) throw FormatError(where(line_no) + "no feature columns");
  if (!ds.has_t && !default_t) {
    throw FormatError(where(line_no) + "no 't' column and no default t given");
  }
  const std::size_t width = h.columns.size();

  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = split(line);
    if (fields.size() != width) {
      throw FormatError(where(line_no) + "expected " + std::to_string(width) + " fields, got " +
                        std::to_string(fields.size()));
    }
    Example ex;
    const long long y = parse_integer(fields[0], line_no, "y");
    if (y < 0) throw FormatError(where(line_no) + "labels must be nonnegative");
    ex.y = static_cast<int>(y);
    ex.t = ds.has_t ? parse_double(fields[1], line_no, "t") : *default_t;
    std::vector<double> values;
    values.reserve(width - first_x);
    for (std::size_t j = first_x; j < width; ++j) {
      values.push_back(parse_double(fields[j], line_no, h.columns[j]));
    }
    ex.x = make_features(std::move(values), ds.wishart_d, line_no);
    ds.examples.push_back(std::move(ex));
  }
  return ds;
}

void write_dataset(std::ostream& out, const std::vector<Example>& examples) {
  if (examples.empty()) throw ParameterError("no examples to write");
  write_version(out, kDatasetMagic, examples.front().x);
  out << "y,t";
  write_feature_columns(out, examples.front().x.flatten().size());
  for (const auto& ex : examples) {
    out << ex.y << ',' << format_real(ex.t);
    write_values(out, ex.x);
  }
}

std::vector<PseudoExample> read_pseudo(std::istream& in, std::optional<int>* wishart_d) {
  std::size_t line_no = 0;
  const Header h = read_header(in, kPseudoMagic, line_no);
  if (wishart_d) *wishart_d = h.wishart_d;
  static const char* required[] = {"origin_id", "alpha", "y", "t"};
  for (std::size_t j = 0; j < 4; ++j) {
    if (h.columns.size() <= j || h.columns[j] != required[j]) {
      throw FormatError(where(line_no) + "column " + std::to_string(j + 1) + " must be '" +
                        required[j] + "'");
    }
  }
  if (h.columns.size() <= 4) throw FormatError(where(line_no) + "no feature columns");
  const std::size_t width = h.columns.size();
  std::vector<PseudoExample> out;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line[0] == '#') continue;
    const auto fields = split(line);
    if (fields.size() != width) {
      throw FormatError(where(line_no) + "expected " + std::to_string(width) + " fields, got " +
                        std::to_string(fields.size()));
    }
    PseudoExample p;
    const long long origin = parse_integer(fields[0], line_no, "origin_id");
    if (origin < 0) throw FormatError(where(line_no) + "origin_id must be nonnegative");
    p.origin_id = static_cast<std::size_t>(origin);
    p.alpha = parse_double(fields[1], line_no, "alpha");
    const long long y = parse_integer(fields[2], line_no, "y");
    if (y < 0) throw FormatError(where(line_no) + "labels must be nonnegative");
    p.y = static_cast<int>(y);
    p.t = parse_double(fields[3], line_no, "t");
    std::vector<double> values;
    for (std::size_t j = 4; j < width; ++j) {
      values.push_back(parse_double(fields[j], line_no, h.columns[j]));
    }
    p.x = make_features(std::move(values), h.wishart_d, line_no);
    out.push_back(std::move(p));
  }
  return out;
}

void write_pseudo(std::ostream& out, const std::vector<PseudoExample>& pseudo) {
  if (pseudo.empty()) throw ParameterError("no pseudo-examples to write");
  write_version(out, kPseudoMagic, pseudo.front().x);
  out << "origin_id,alpha,y,t";
  write_feature_columns(out, pseudo.front().x.flatten().size());
  for (const auto& p : pseudo) {
    out << p.origin_id << ',' << format_real(p.alpha) << ',' << p.y << ',' << format_real(p.t);
    write_values(out, p.x);
  }
}

}  // namespace levythin
