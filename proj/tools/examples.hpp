#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "emgkz/numeric.hpp"

namespace emgkz::cli {

struct ExampleOptions {
  double tol = 1e-8;
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::size_t resolution = 512;
  CVector c;  // --c override, example specific
};

struct CheckRow {
  std::string name;
  double error = 0.0;      // the quantity compared against the threshold
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

const std::vector<std::string>& example_names();
// Throws SchemaError for an unknown name.
std::vector<CheckRow> run_example(const std::string& name, const ExampleOptions& opt);
void print_table(std::ostream& os, const std::string& name, const std::vector<CheckRow>& rows);

}  // namespace emgkz::cli
