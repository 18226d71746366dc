#include <sstream>

#include "doctest.h"
#include "emgkz/error.hpp"
#include "emgkz/json_io.hpp"

using namespace emgkz;

namespace {

const char* kGauss = R"({
  "n_vars": 2,
  "factors": [{"n_vars": 2, "terms": [
    {"exp": [0, 0], "coeff": [1, 0]}, {"exp": [1, 0], "coeff": [0, 1]},
    {"exp": [0, 1], "coeff": [0, 1]}, {"exp": [1, 1], "coeff": 0.9}]}],
  "s": [0.4, [0.5, 0.1]],
  "t": [1.2],
  "theta": [0, 0],
  "options": {"tol": 1e-9, "resolution": 64, "term_budget": 5000, "seed": 4},
  "points": [{"s": [1, 1], "t": [2]}]
})";

ErrorCode code_of(const char* text) {
  try {
    problem_from_json(Json::parse(text));
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error raised");
  return ErrorCode::SchemaError;
}

}  // namespace

TEST_CASE("problem files parse and round trip") {
  const ProblemFile p = problem_from_json(Json::parse(kGauss));
  CHECK(p.n_vars == 2);
  CHECK(p.factors.size() == 1);
  CHECK(p.factors[0].coefficient({1, 0}) == Complex(0, 1));
  CHECK(p.factors[0].coefficient({1, 1}) == Complex(0.9));
  CHECK(p.s[1] == Complex(0.5, 0.1));
  CHECK(p.options.tol == 1e-9);
  CHECK(p.options.resolution == 64);
  CHECK(*p.options.term_budget == 5000);
  CHECK(p.options.seed == 4);
  CHECK(p.extra.contains("points"));
  const Json back = problem_to_json(p);
  const ProblemFile q = problem_from_json(back);
  CHECK(problem_to_json(q).dump() == back.dump());
}

TEST_CASE("schema and dimension errors") {
  CHECK(code_of(R"({"factors": []})") == ErrorCode::SchemaError);
  CHECK(code_of(R"({"n_vars": 1, "factors": "x"})") == ErrorCode::SchemaError);
  CHECK(code_of(R"({"n_vars": 1, "factors": [{"n_vars": 1, "terms": [{"exp": [0], "coeff": "one"}]}]})") ==
        ErrorCode::SchemaError);
  CHECK(code_of(R"({"n_vars": 2, "factors": [{"n_vars": 2, "terms": [{"exp": [0], "coeff": 1}]}]})") ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of(R"({"n_vars": 1, "factors": [{"n_vars": 1, "terms": [{"exp": [0], "coeff": 1}]}], "s": [1, 2]})") ==
        ErrorCode::DimensionMismatch);
  CHECK(code_of(R"({"n_vars": 1, "factors": [{"n_vars": 1, "terms": [{"exp": [0], "coeff": 1}]}], "options": {"tol": -1}})") ==
        ErrorCode::SchemaError);
  CHECK_THROWS_AS(load_problem("/nonexistent/problem.json"), Error);
}

TEST_CASE("complex numbers and matrices") {
  CHECK(complex_to_json(Complex(1.5, -2)).dump() == "[1.5,-2.0]");
  CHECK(complex_from_json(Json::parse("3"), "x") == Complex(3.0));
  CHECK(matrix_to_json(IntMatrix{{1, 2}, {3, 4}}).dump() == "[[1,2],[3,4]]");
  CHECK(matrix_from_json(Json::parse("[[1,2],[3,4]]"), "m") == IntMatrix{{1, 2}, {3, 4}});
  CHECK_THROWS_AS(matrix_from_json(Json::parse("[[1,2],[3]]"), "m"), Error);
}

TEST_CASE("PGM and CSV artifacts") {
  const ProblemFile p = problem_from_json(Json::parse(kGauss));
  RasterOptions ro;
  ro.resolution = 16;
  const auto at = raster_coamoeba_2d(p.factors[0], ro);
  std::ostringstream pgm, csv;
  write_pgm(pgm, at);
  std::istringstream in(pgm.str());
  std::string magic;
  std::size_t w = 0, h = 0, maxv = 0;
  in >> magic >> w >> h >> maxv;
  CHECK(magic == "P2");
  CHECK(w == 16);
  CHECK(h == 16);
  CHECK(maxv == 255);
  std::size_t count = 0;
  for (int v; in >> v; ++count) CHECK((v == 0 || v == 255));
  CHECK(count == 256);
  write_csv(csv, at);
  CHECK(csv.str().rfind("i1,i2,theta1,theta2,marked,label\n", 0) == 0);
  const Json j = atlas_to_json(at);
  CHECK(j["components"].size() == at.components.size());

  const auto arcs = univariate_components(LaurentPoly(1, {{{0}, 1.0}, {{2}, 1.0}}));
  std::ostringstream c1;
  write_csv(c1, arcs);
  CHECK(c1.str().rfind("lo,hi,representative\n", 0) == 0);
  CHECK_THROWS_AS(write_pgm(c1, arcs), Error);
}
