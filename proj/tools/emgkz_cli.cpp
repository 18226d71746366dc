#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "emgkz/coamoeba.hpp"
#include "emgkz/continuation.hpp"
#include "emgkz/emquad.hpp"
#include "emgkz/gkz.hpp"
#include "emgkz/json_io.hpp"
#include "emgkz/polytope.hpp"
#include "examples.hpp"

using namespace emgkz;

namespace {

struct Flags {
  double tol = 1e-8;
  bool tol_set = false;
  std::size_t resolution = 512;
  bool resolution_set = false;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string out;
  bool csv = false;
};

int exit_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::SchemaError:
    case ErrorCode::DimensionMismatch:
      return 1;
    case ErrorCode::ToleranceNotReached:
    case ErrorCode::LimitUnstable:
    case ErrorCode::DerivativeUnstable:
      return 3;
    default:
      return 2;
  }
}

double tol_of(const Flags& f, const ProblemFile& p) { return f.tol_set ? f.tol : p.options.tol; }
std::uint64_t seed_of(const Flags& f, const ProblemFile& p) { return f.seed_set ? f.seed : p.options.seed; }

void apply_budget(const ProblemFile& p) {
  // the environment wins over the problem file
  if (p.options.term_budget) setenv("EMGKZ_TERM_BUDGET", std::to_string(*p.options.term_budget).c_str(), 0);
}

std::vector<double> theta_of(const ProblemFile& p) {
  return p.theta ? *p.theta : std::vector<double>(p.n_vars, 0.0);
}

void need_st(const ProblemFile& p) {
  if (p.s.empty() || p.t.empty()) fail(ErrorCode::SchemaError, "this subcommand needs \"s\" and \"t\"");
}

EMProblem em_base(const ProblemFile& p) {
  EMProblem e;
  e.factors = p.factors;
  e.theta = theta_of(p);
  e.s = p.s;
  e.t = p.t;
  return e;
}

void emit(const Flags& f, const std::string& command, std::uint64_t seed, double tol, Json result) {
  Json doc;
  doc["command"] = command;
  doc["seed"] = seed;
  doc["jobs"] = f.jobs;
  doc["tol"] = tol;
  doc["result"] = std::move(result);
  const std::string text = doc.dump(2) + "\n";
  if (f.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(f.out);
    if (!os) fail(ErrorCode::SchemaError, "cannot write " + f.out);
    os << text;
  }
}

std::string sibling(const std::string& path, const std::string& ext) {
  const auto dot = path.find_last_of('.');
  const auto slash = path.find_last_of('/');
  if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + ext;
  return path.substr(0, dot) + ext;
}

Json poles_json(const std::vector<Pole>& ps) {
  Json out = Json::array();
  for (const auto& p : ps) out.push_back(Json{{"facet", p.facet}, {"d", p.d}});
  return out;
}

void cmd_newton(const Flags& f, const ProblemFile& p) {
  emit(f, "newton", seed_of(f, p), tol_of(f, p), newton_to_json(newton_facets(p.factors)));
}

void cmd_coamoeba(const Flags& f, const ProblemFile& p) {
  const LaurentPoly poly = product(p.factors);
  ComponentAtlas at;
  if (p.n_vars == 1) {
    at = univariate_components(poly);
  } else if (p.n_vars == 2) {
    RasterOptions ro;
    ro.resolution = f.resolution_set ? f.resolution : p.options.resolution;
    ro.jobs = f.jobs;
    at = raster_coamoeba_2d(poly, ro);
    if (!f.out.empty()) {
      std::ofstream os(sibling(f.out, ".pgm"));
      write_pgm(os, at);
    }
  } else {
    fail(ErrorCode::DimensionMismatch, "coamoeba needs one or two variables");
  }
  if (f.csv) {
    write_csv(std::cout, at);
    if (f.out.empty()) return;
  }
  emit(f, "coamoeba", seed_of(f, p), tol_of(f, p), atlas_to_json(at));
}

void cmd_em_eval(const Flags& f, const ProblemFile& p) {
  need_st(p);
  const QuadratureReport r = em_integral(em_base(p), tol_of(f, p));
  Json j = report_to_json(r);
  j["theta"] = theta_of(p);
  emit(f, "em-eval", seed_of(f, p), tol_of(f, p), j);
}

void cmd_mb_eval(const Flags& f, const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::SchemaError, "cannot open " + path);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorCode::SchemaError, std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("b") || !j.contains("gamma") || !j.contains("c"))
    fail(ErrorCode::SchemaError, "mb-eval needs \"b\", \"gamma\" and \"c\"");
  MBProblem mb;
  mb.b = matrix_from_json(j["b"], "b");
  mb.gamma = cvector_from_json(j["gamma"], "gamma");
  for (auto c : cvector_from_json(j["c"], "c")) {
    if (c == 0.0) fail(ErrorCode::SchemaError, "c must be nonzero");
    mb.log_c.push_back(Complex(std::log(std::abs(c)), std::arg(c)));
  }
  double tol = f.tol;
  if (!f.tol_set && j.contains("options") && j["options"].contains("tol")) tol = j["options"]["tol"].get<double>();
  emit(f, "mb-eval", f.seed, tol, report_to_json(mb_integral(mb, tol)));
}

void cmd_continue_plan(const Flags& f, const ProblemFile& p) {
  need_st(p);
  apply_budget(p);
  EMProblem base = em_base(p);
  const ContinuationExpr e0 = make_expression(base);
  const auto steps = plan(e0, p.s, p.t);
  const ContinuationExpr e = apply_plan(e0, steps);
  std::set<Pole> poles;
  std::size_t max_degree = 0;
  for (const auto& t : e.terms) {
    poles.insert(t.poles.begin(), t.poles.end());
    max_degree = std::max<std::size_t>(max_degree, static_cast<std::size_t>(std::max(0, t.numerator.degree())));
  }
  Json j;
  j["steps"] = steps;
  j["facets"] = newton_to_json(e.newton)["facets"];
  j["terms"] = e.terms.size();
  j["max_numerator_degree"] = max_degree;
  j["poles"] = poles_json(std::vector<Pole>(poles.begin(), poles.end()));
  j["poles_before_merge"] = poles_json(std::vector<Pole>(e.realized_before_merge.begin(), e.realized_before_merge.end()));
  emit(f, "continue-plan", seed_of(f, p), tol_of(f, p), j);
}

void cmd_phi_eval(const Flags& f, const ProblemFile& p) {
  apply_budget(p);
  std::vector<std::pair<CVector, CVector>> points;
  if (p.extra.contains("points")) {
    for (const auto& q : p.extra["points"]) {
      if (!q.is_object() || !q.contains("s") || !q.contains("t")) fail(ErrorCode::SchemaError, "points need s and t");
      points.emplace_back(cvector_from_json(q["s"], "s"), cvector_from_json(q["t"], "t"));
    }
  } else {
    need_st(p);
    points.emplace_back(p.s, p.t);
  }
  const double tol = tol_of(f, p);
  const std::uint64_t seed = seed_of(f, p);
  EMProblem base = em_base(p);
  base.s.clear();
  base.t.clear();
  Json out = Json::array();
  for (const auto& [s, t] : points) {
    const ContinuationExpr e = continue_to(base, s, t);
    Json j{{"s", cvector_to_json(s)}, {"t", cvector_to_json(t)}};
    try {
      j["value"] = complex_to_json(eval_phi(e, s, t, tol));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::PoleHit) throw;
      const auto dir = random_direction(seed, s.size() + t.size());
      const CVector ds(dir.begin(), dir.begin() + static_cast<std::ptrdiff_t>(s.size()));
      const CVector dt(dir.begin() + static_cast<std::ptrdiff_t>(s.size()), dir.end());
      const LimitResult lim = phi_limit(e, s, t, ds, dt, 0, tol);
      j["value"] = complex_to_json(lim.value);
      j["limit_direction"] = dir;
      j["error_estimate"] = lim.error_estimate;
    }
    j["terms"] = e.terms.size();
    out.push_back(j);
  }
  emit(f, "phi-eval", seed, tol, Json{{"points", out}});
}

void cmd_gkz_verify(const Flags& f, const ProblemFile& p) {
  need_st(p);
  apply_budget(p);
  const CayleySystem sys = cayley_matrix(p.factors, p.s, p.t);
  const CVector c0 = sys.coefficients(p.factors);
  const Germ germ = phi_germ(sys, theta_of(p), p.s, p.t, c0, std::min(tol_of(f, p), 1e-9));
  CauchyOptions co;
  co.jobs = f.jobs;
  Json j;
  j["A"] = matrix_to_json(sys.a);
  j["beta"] = cvector_to_json(sys.beta);
  j["euler"] = euler_residuals(sys, germ, c0, co);
  std::vector<IVector> us;
  if (p.extra.contains("kernel")) {
    for (const auto& u : p.extra["kernel"]) us.push_back(u.get<IVector>());
  } else {
    us = integer_kernel(sys.a);
  }
  Json box = Json::array();
  for (const auto& u : us) box.push_back(Json{{"u", u}, {"residual", box_residual(sys, germ, c0, u, co)}});
  j["box"] = box;
  j["evidence"] = "residual-based: c is not certified to avoid the principal A-determinant";
  emit(f, "gkz-verify", seed_of(f, p), tol_of(f, p), j);
}

Json gale_json(const GaleData& g) {
  std::int64_t det_d = 1;
  for (auto x : g.d) det_d *= x;
  return Json{{"B", matrix_to_json(g.b)},
              {"D", g.d},
              {"block_columns", g.block},
              {"other_columns", g.rest},
              {"a0", g.a0},
              {"A_I", matrix_to_json(g.a_one)},
              {"A_II", matrix_to_json(g.a_two)},
              {"det_A_I", g.block_det},
              {"det_D", det_d},
              {"g_A", g.g_a},
              {"g_B", g.g_b}};
}

void cmd_gale(const Flags& f, const ProblemFile& p) {
  const CayleySystem sys = cayley_matrix(p.factors);
  Json j = gale_json(gale_dual(sys));
  j["A"] = matrix_to_json(sys.a);
  emit(f, "gale", seed_of(f, p), tol_of(f, p), j);
}

void cmd_em_mb_check(const Flags& f, const ProblemFile& p) {
  need_st(p);
  const CayleySystem sys = cayley_matrix(p.factors, p.s, p.t);
  const GaleData g = gale_dual(sys);
  const double tol = std::min(tol_of(f, p), 1e-10);
  const EMMBReport r = em_mb_check(sys, g, sys.coefficients(p.factors), theta_of(p), p.s, p.t, tol);
  Json j{{"gB_L", complex_to_json(r.mb)}, {"rhs", complex_to_json(r.em)}, {"gamma", cvector_to_json(r.gamma)},
         {"residual", r.residual}, {"gale", gale_json(g)}};
  emit(f, "em-mb-check", seed_of(f, p), tol_of(f, p), j);
}

void cmd_rank(const Flags& f, const ProblemFile& p) {
  need_st(p);
  apply_budget(p);
  const CayleySystem sys = cayley_matrix(p.factors, p.s, p.t);
  const CVector c0 = sys.coefficients(p.factors);
  const LaurentPoly poly = product(p.factors);
  std::vector<std::vector<double>> reps;
  if (p.n_vars == 1) {
    for (const auto& a : univariate_components(poly).arcs) reps.push_back({a.representative});
  } else if (p.n_vars == 2) {
    RasterOptions ro;
    ro.resolution = f.resolution_set ? f.resolution : p.options.resolution;
    ro.jobs = f.jobs;
    for (const auto& c : raster_coamoeba_2d(poly, ro).components) reps.push_back(c.representative.theta);
  } else {
    fail(ErrorCode::DimensionMismatch, "rank needs one or two variables");
  }
  const double tol = std::min(tol_of(f, p), 1e-10);
  std::vector<Germ> germs;
  for (const auto& th : reps) germs.push_back(phi_germ(sys, th, p.s, p.t, c0, tol));
  std::vector<double> sv;
  const std::size_t rank = independence_rank(germs, c0, 8, f.jobs, &sv);
  const ResonanceReport res = total_nonresonance(sys, sys.beta, 10);
  Json j{{"components", reps.size()},
         {"representatives", reps},
         {"rank", rank},
         {"singular_values", sv},
         {"normalized_volume", normalized_volume(sys.a)},
         {"totally_nonresonant", res.totally_nonresonant},
         {"resonance_search_bound", res.bound}};
  if (!res.totally_nonresonant) {
    j["resonant_normal"] = res.normal;
    j["resonant_shift"] = res.shift;
  }
  emit(f, "rank", seed_of(f, p), tol_of(f, p), j);
}

CVector parse_c(const std::string& text) {
  CVector out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    try {
      if (colon == std::string::npos)
        out.push_back(std::stod(item));
      else
        out.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
    } catch (const std::exception&) {
      fail(ErrorCode::SchemaError, "--c expects comma separated numbers (re or re:im)");
    }
  }
  return out;
}

int cmd_examples(const Flags& f, const std::string& name, const std::string& c) {
  cli::ExampleOptions o;
  o.tol = f.tol;
  o.seed = f.seed;
  o.jobs = f.jobs;
  o.resolution = f.resolution;
  if (!c.empty()) o.c = parse_c(c);
  std::vector<std::string> names;
  if (name == "all")
    names = cli::example_names();
  else
    names.push_back(name);
  bool ok = true;
  std::cout << "seed " << f.seed << '\n';
  for (const auto& n : names) {
    const auto rows = cli::run_example(n, o);
    cli::print_table(std::cout, n, rows);
    for (const auto& r : rows) ok = ok && r.pass;
  }
  return ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-Mellin integrals, coamoebas and A-hypergeometric checks"};
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--tol", f.tol, "target tolerance (default 1e-8)")->each([&](const std::string&) { f.tol_set = true; });
  app.add_option("--resolution", f.resolution, "raster resolution (default 512)")->each([&](const std::string&) {
    f.resolution_set = true;
  });
  app.add_option("--jobs", f.jobs, "worker threads");
  app.add_option("--seed", f.seed, "seed for random directions and samples")->each([&](const std::string&) {
    f.seed_set = true;
  });
  app.add_option("--out", f.out, "write JSON here (coamoeba also writes a sibling .pgm)");
  app.add_flag("--csv", f.csv, "dump arcs or pixels as CSV on stdout");

  std::string problem;
  const std::vector<std::pair<const char*, const char*>> cmds{
      {"newton", "facets of the Newton polytope"},
      {"coamoeba", "coamoeba complement components"},
      {"em-eval", "Euler-Mellin integral by quadrature"},
      {"mb-eval", "Mellin-Barnes integral by quadrature"},
      {"continue-plan", "meromorphic continuation plan and term statistics"},
      {"phi-eval", "entire function Phi at (s,t) points"},
      {"gkz-verify", "Euler and box operator residuals"},
      {"gale", "dual matrix of the Cayley matrix"},
      {"em-mb-check", "Mellin-Barnes versus Euler-Mellin identity"},
      {"rank", "rank of the Euler-Mellin germs from the complement components"}};
  for (const auto& [name, help] : cmds) app.add_subcommand(name, help)->add_option("problem", problem, "problem JSON")->required();

  auto* ex = app.add_subcommand("examples", "named reproductions with pass/fail tables");
  ex->require_subcommand(1);
  std::string example, cvals;
  auto* run = ex->add_subcommand("run", "run one example (or all)");
  run->add_option("name", example, "example name or all")->required();
  run->add_option("--c", cvals, "coefficients, comma separated (re or re:im)");
  ex->add_subcommand("list", "list example names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  }
  f.jobs = std::max(1u, f.jobs);

  try {
    for (auto* sub : app.get_subcommands()) {
      const std::string name = sub->get_name();
      if (name == "examples") {
        if (ex->got_subcommand("list")) {
          for (const auto& n : cli::example_names()) std::cout << n << '\n';
          return 0;
        }
        return cmd_examples(f, example, cvals);
      }
      if (name == "mb-eval") {
        cmd_mb_eval(f, problem);
        return 0;
      }
      const ProblemFile p = load_problem(problem);
      if (name == "newton") cmd_newton(f, p);
      else if (name == "coamoeba") cmd_coamoeba(f, p);
      else if (name == "em-eval") cmd_em_eval(f, p);
      else if (name == "continue-plan") cmd_continue_plan(f, p);
      else if (name == "phi-eval") cmd_phi_eval(f, p);
      else if (name == "gkz-verify") cmd_gkz_verify(f, p);
      else if (name == "gale") cmd_gale(f, p);
      else if (name == "em-mb-check") cmd_em_mb_check(f, p);
      else if (name == "rank") cmd_rank(f, p);
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.code());
  } catch (const Json::exception& e) {
    std::cerr << "error: SchemaError: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
