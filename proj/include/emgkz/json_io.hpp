#pragma once

#include <iosfwd>
#include <optional>
#include <string>

#include "emgkz/coamoeba.hpp"
#include "emgkz/emquad.hpp"
#include "emgkz/laurent.hpp"
#include "emgkz/polytope.hpp"
#include "json.hpp"

namespace emgkz {

using Json = nlohmann::ordered_json;

// Complex numbers travel as [re, im]; a bare number is read as real.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j, const char* what);
Json cvector_to_json(const CVector& v);
CVector cvector_from_json(const Json& j, const char* what);
Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j, const char* what);

// {"n_vars": n, "terms": [{"exp": [..], "coeff": [re, im]}, ...]}
Json poly_to_json(const LaurentPoly& p);
LaurentPoly poly_from_json(const Json& j);

struct ProblemOptions {
  double tol = 1e-8;
  std::size_t resolution = 512;
  std::optional<std::size_t> term_budget;
  std::uint64_t seed = 0;
};

struct ProblemFile {
  std::size_t n_vars = 0;
  FactorList factors;
  CVector s;
  CVector t;
  std::optional<std::vector<double>> theta;
  ProblemOptions options;

  Json extra;  // every other top-level key, for subcommand specific input
};

// Throws SchemaError (missing or mistyped keys) or DimensionMismatch.
ProblemFile problem_from_json(const Json& j);
ProblemFile load_problem(const std::string& path);
Json problem_to_json(const ProblemFile& p);

Json newton_to_json(const NewtonData& nd);
Json report_to_json(const QuadratureReport& r);
Json atlas_to_json(const ComponentAtlas& at);

// P2 greyscale: coamoeba pixels 0, complement 255. Row k holds theta_2 at the
// pixel center of index resolution - 1 - k (so theta_2 grows upward), column
// index is theta_1.
void write_pgm(std::ostream& os, const ComponentAtlas& at);
// n = 1: lo,hi,representative per arc. n = 2: i1,i2,theta1,theta2,marked,label.
void write_csv(std::ostream& os, const ComponentAtlas& at);

}  // namespace emgkz
