#pragma once

#include "levythin/family.hpp"

#include <iosfwd>
#include <optional>
#include <vector>

namespace levythin {

// Comma-separated text with a version line and a header row:
//
//   # levythin dataset v1            (Wishart adds " d=<d>")
//   y,t,x1,...,xp
//
// Wishart rows carry the upper triangle of x, row-major. The t column may be
// omitted, in which case every row gets the caller's default t.

struct Dataset {
  std::vector<Example> examples;
  std::optional<int> wishart_d;
  bool has_t = true;
};

Dataset read_dataset(std::istream& in, std::optional<double> default_t = std::nullopt);
void write_dataset(std::ostream& out, const std::vector<Example>& examples);

// Pseudo-example files use "# levythin pseudo v1" and the columns
// origin_id,alpha,y,t,x1,...
std::vector<PseudoExample> read_pseudo(std::istream& in, std::optional<int>* wishart_d = nullptr);
void write_pseudo(std::ostream& out, const std::vector<PseudoExample>& pseudo);

}  // namespace levythin
