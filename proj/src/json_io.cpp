#include "emgkz/json_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace emgkz {

namespace {

[[noreturn]] void schema(const std::string& what) { fail(ErrorCode::SchemaError, what); }

const Json& need(const Json& j, const char* key, const char* where) {
  if (!j.is_object()) schema(std::string(where) + " must be an object");
  auto it = j.find(key);
  if (it == j.end()) schema(std::string(where) + ": missing key \"" + key + "\"");
  return *it;
}

double number(const Json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema(std::string(what) + " must be finite");
  return v;
}

std::int64_t integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) schema(std::string(what) + " must be an integer");
  return j.get<std::int64_t>();
}

std::vector<double> reals(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array");
  std::vector<double> out;
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

}  // namespace

Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const char* what) {
  if (j.is_number()) return number(j, what);
  if (!j.is_array() || j.size() != 2) schema(std::string(what) + " must be [re, im]");
  return {number(j[0], what), number(j[1], what)};
}

Json cvector_to_json(const CVector& v) {
  Json out = Json::array();
  for (auto z : v) out.push_back(complex_to_json(z));
  return out;
}

CVector cvector_from_json(const Json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array");
  CVector out;
  for (const auto& x : j) out.push_back(complex_from_json(x, what));
  return out;
}

Json matrix_to_json(const IntMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(m.row(r));
  return out;
}

IntMatrix matrix_from_json(const Json& j, const char* what) {
  if (!j.is_array() || j.empty()) schema(std::string(what) + " must be a nonempty array of rows");
  std::vector<IVector> rows;
  for (const auto& row : j) {
    if (!row.is_array()) schema(std::string(what) + " rows must be arrays");
    IVector r;
    for (const auto& x : row) r.push_back(integer(x, what));
    if (!rows.empty() && r.size() != rows.front().size()) schema(std::string(what) + " rows differ in length");
    rows.push_back(std::move(r));
  }
  return IntMatrix::from_rows(rows, rows.front().size());
}

Json poly_to_json(const LaurentPoly& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back(Json{{"exp", e}, {"coeff", complex_to_json(c)}});
  return Json{{"n_vars", p.n_vars()}, {"terms", terms}};
}

LaurentPoly poly_from_json(const Json& j) {
  const std::int64_t n = integer(need(j, "n_vars", "polynomial"), "n_vars");
  if (n < 1) schema("n_vars must be positive");
  const Json& terms = need(j, "terms", "polynomial");
  if (!terms.is_array() || terms.empty()) schema("terms must be a nonempty array");
  LaurentPoly p(static_cast<std::size_t>(n));
  for (const auto& t : terms) {
    const Json& e = need(t, "exp", "term");
    if (!e.is_array()) schema("exp must be an array");
    Exponent a;
    for (const auto& x : e) a.push_back(integer(x, "exp"));
    if (a.size() != static_cast<std::size_t>(n)) fail(ErrorCode::DimensionMismatch, "exponent length differs from n_vars");
    p.add_term(a, complex_from_json(need(t, "coeff", "term"), "coeff"));
  }
  if (p.is_zero()) fail(ErrorCode::EmptySupport, "polynomial has no nonzero terms");
  return p;
}

ProblemFile problem_from_json(const Json& j) {
  if (!j.is_object()) schema("problem must be a JSON object");
  ProblemFile p;
  const std::int64_t n = integer(need(j, "n_vars", "problem"), "n_vars");
  if (n < 1) schema("n_vars must be positive");
  p.n_vars = static_cast<std::size_t>(n);
  const Json& fs = need(j, "factors", "problem");
  if (!fs.is_array() || fs.empty()) schema("factors must be a nonempty array");
  std::vector<LaurentPoly> polys;
  for (const auto& f : fs) {
    polys.push_back(poly_from_json(f));
    if (polys.back().n_vars() != p.n_vars) fail(ErrorCode::DimensionMismatch, "factor n_vars differs from the problem");
  }
  p.factors = FactorList(std::move(polys));
  if (j.contains("s")) p.s = cvector_from_json(j["s"], "s");
  if (j.contains("t")) p.t = cvector_from_json(j["t"], "t");
  if (!p.s.empty() && p.s.size() != p.n_vars) fail(ErrorCode::DimensionMismatch, "s needs n_vars entries");
  if (!p.t.empty() && p.t.size() != p.factors.size()) fail(ErrorCode::DimensionMismatch, "t needs one entry per factor");
  if (j.contains("theta") && !j["theta"].is_null()) {
    p.theta = reals(j["theta"], "theta");
    if (p.theta->size() != p.n_vars) fail(ErrorCode::DimensionMismatch, "theta needs n_vars entries");
  }
  if (j.contains("options")) {
    const Json& o = j["options"];
    if (!o.is_object()) schema("options must be an object");
    if (o.contains("tol")) {
      p.options.tol = number(o["tol"], "tol");
      if (!(p.options.tol > 0.0)) schema("tol must be positive");
    }
    if (o.contains("resolution")) {
      const std::int64_t r = integer(o["resolution"], "resolution");
      if (r < 1) schema("resolution must be positive");
      p.options.resolution = static_cast<std::size_t>(r);
    }
    if (o.contains("term_budget")) {
      const std::int64_t b = integer(o["term_budget"], "term_budget");
      if (b < 1) schema("term_budget must be positive");
      p.options.term_budget = static_cast<std::size_t>(b);
    }
    if (o.contains("seed")) {
      if (!o["seed"].is_number_unsigned()) schema("seed must be a nonnegative integer");
      p.options.seed = o["seed"].get<std::uint64_t>();
    }
  }
  p.extra = Json::object();
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& k = it.key();
    if (k != "n_vars" && k != "factors" && k != "s" && k != "t" && k != "theta" && k != "options") p.extra[k] = *it;
  }
  return p;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) schema("cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    schema(std::string("invalid JSON: ") + e.what());
  }
  return problem_from_json(j);
}

Json problem_to_json(const ProblemFile& p) {
  Json j;
  j["n_vars"] = p.n_vars;
  Json fs = Json::array();
  for (const auto& f : p.factors) fs.push_back(poly_to_json(f));
  j["factors"] = fs;
  if (!p.s.empty()) j["s"] = cvector_to_json(p.s);
  if (!p.t.empty()) j["t"] = cvector_to_json(p.t);
  if (p.theta) j["theta"] = *p.theta;
  Json o{{"tol", p.options.tol}, {"resolution", p.options.resolution}, {"seed", p.options.seed}};
  if (p.options.term_budget) o["term_budget"] = *p.options.term_budget;
  j["options"] = o;
  for (auto it = p.extra.begin(); it != p.extra.end(); ++it) j[it.key()] = *it;
  return j;
}

Json newton_to_json(const NewtonData& nd) {
  Json facets = Json::array();
  for (const auto& f : nd.facets) facets.push_back(Json{{"mu", f.mu}, {"nu", f.nu}, {"nu_sum", f.nu_sum}});
  Json verts = Json::array();
  for (const auto& v : nd.vertices) verts.push_back(v);
  return Json{{"n_vars", nd.n_vars}, {"full_dimensional", nd.full_dimensional}, {"facets", facets}, {"vertices", verts}};
}

Json report_to_json(const QuadratureReport& r) {
  return Json{{"value", complex_to_json(r.value)},
              {"error_estimate", r.abs_error_estimate},
              {"truncation_radius", r.truncation_radius},
              {"cells", r.cells_evaluated}};
}

Json atlas_to_json(const ComponentAtlas& at) {
  Json j;
  j["n_vars"] = at.n_vars;
  Json comps = Json::array();
  if (at.n_vars == 1) {
    j["excluded"] = at.excluded;
    j["merged_arguments"] = at.merged;
    int label = 0;
    for (const auto& a : at.arcs)
      comps.push_back(Json{{"label", label++}, {"lo", a.lo}, {"hi", a.hi}, {"representative", Json::array({a.representative})}});
  } else {
    j["resolution"] = at.resolution;
    for (const auto& c : at.components)
      comps.push_back(Json{{"label", c.label},
                           {"representative", c.representative.theta},
                           {"pixel_count", c.pixel_count},
                           {"clearance", c.clearance},
                           {"unreliable", c.unreliable}});
  }
  j["components"] = comps;
  return j;
}

void write_pgm(std::ostream& os, const ComponentAtlas& at) {
  if (at.n_vars != 2 || at.resolution == 0) fail(ErrorCode::DimensionMismatch, "PGM output needs a bivariate raster");
  const std::size_t res = at.resolution;
  os << "P2\n" << res << ' ' << res << "\n255\n";
  for (std::size_t k = 0; k < res; ++k) {
    const std::size_t i2 = res - 1 - k;
    for (std::size_t i1 = 0; i1 < res; ++i1) {
      if (i1) os << ' ';
      os << (at.marked[i1 * res + i2] ? 0 : 255);
    }
    os << '\n';
  }
}

void write_csv(std::ostream& os, const ComponentAtlas& at) {
  std::ostringstream buf;
  buf.precision(17);
  if (at.n_vars == 1) {
    buf << "lo,hi,representative\n";
    for (const auto& a : at.arcs) buf << a.lo << ',' << a.hi << ',' << a.representative << '\n';
  } else {
    const std::size_t res = at.resolution;
    const double px = 2.0 * kPi / static_cast<double>(res);
    buf << "i1,i2,theta1,theta2,marked,label\n";
    for (std::size_t i1 = 0; i1 < res; ++i1)
      for (std::size_t i2 = 0; i2 < res; ++i2)
        buf << i1 << ',' << i2 << ',' << -kPi + (i1 + 0.5) * px << ',' << -kPi + (i2 + 0.5) * px << ','
            << int(at.marked[i1 * res + i2]) << ',' << at.labels[i1 * res + i2] << '\n';
  }
  os << buf.str();
}

}  // namespace emgkz
