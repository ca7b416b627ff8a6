#pragma once

#include "levythin/logistic.hpp"

#include <iosfwd>
#include <string>

namespace levythin {

/// Versioned text format, one "key value..." record per line, every real
/// printed with 17 significant digits so write(read(write(m))) is
/// byte-identical. The stored beta minimizes the *mean* pseudo-example loss
/// plus (lambda / 2) ||beta||^2.
void write_model(std::ostream& out, const LogisticModel& model);
LogisticModel read_model(std::istream& in);

std::string model_to_string(const LogisticModel& model);
LogisticModel model_from_string(const std::string& text);

/// printf("%.17g").
std::string format_real(double value);

}  // namespace levythin
