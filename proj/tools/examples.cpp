#include "examples.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "emgkz/coamoeba.hpp"
#include "emgkz/continuation.hpp"
#include "emgkz/emquad.hpp"
#include "emgkz/gkz.hpp"

namespace emgkz::cli {

namespace {

const Complex I(0.0, 1.0);

CheckRow rel_row(std::string name, Complex got, Complex want, double thr) {
  CheckRow r;
  r.name = std::move(name);
  r.error = std::abs(got - want) / std::max(std::abs(want), 1e-300);
  r.threshold = thr;
  r.pass = r.error <= thr;
  std::ostringstream os;
  os.precision(12);
  os << "got " << got << " want " << want;
  r.detail = os.str();
  return r;
}

CheckRow bool_row(std::string name, bool ok, std::string detail) {
  CheckRow r;
  r.name = std::move(name);
  r.error = ok ? 0.0 : 1.0;
  r.threshold = 0.0;
  r.pass = ok;
  r.detail = std::move(detail);
  return r;
}

EMProblem em_problem(std::vector<LaurentPoly> fs, std::vector<double> theta, CVector s, CVector t) {
  EMProblem p;
  p.factors = FactorList(std::move(fs));
  p.theta = std::move(theta);
  p.s = std::move(s);
  p.t = std::move(t);
  return p;
}

Complex gamma_ratio(const CVector& num, const CVector& den) {
  Complex lg = 0.0;
  for (auto z : num) lg += log_gamma(z);
  for (auto z : den) lg -= log_gamma(z);
  return std::exp(lg);
}

double qtol(const ExampleOptions& o) { return std::min(o.tol, 1e-10); }

std::vector<CheckRow> beta(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const LaurentPoly f(1, {{{0}, 1.0}, {{1}, 1.0}});
  const Complex v = em_integral(em_problem({f}, {0.0}, {0.5}, {1.0}), qtol(o)).value;
  rows.push_back(rel_row("f=1+z, s=1/2, t=1 -> pi", v, kPi, 1e-8));
  const Complex w = em_integral(em_problem({f}, {0.0}, {0.3}, {1.2}), qtol(o)).value;
  rows.push_back(rel_row("f=1+z, s=0.3, t=1.2", w, gamma_ratio({0.3, 0.9}, {1.2}), 1e-8));
  const LaurentPoly g(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}});
  const Complex u = em_integral(em_problem({g}, {0.0, 0.0}, {0.4, 0.5}, {1.3}), qtol(o)).value;
  rows.push_back(rel_row("f=1+z1+z2, s=(0.4,0.5), t=1.3", u, gamma_ratio({0.4, 0.5, 0.4}, {1.3}), 1e-8));
  return rows;
}

std::vector<CheckRow> simplex_t(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  std::mt19937_64 gen(o.seed);
  std::uniform_int_distribution<int> entry(-2, 2);
  std::uniform_real_distribution<double> unit(0.3, 0.7);
  std::vector<IntMatrix> ts{IntMatrix{{1, 1}, {0, 2}}};
  while (ts.size() < 6) {
    IntMatrix t{{entry(gen), entry(gen)}, {entry(gen), entry(gen)}};
    const std::int64_t d = determinant(t);
    if (d != 0 && std::abs(d) <= 4) ts.push_back(t);
  }
  for (const auto& t : ts) {
    // s = T u with u > 0 and t - |u| > 0
    const double u1 = unit(gen), u2 = unit(gen);
    const double tt = u1 + u2 + unit(gen);
    const CVector s{t(0, 0) * u1 + t(0, 1) * u2, t(1, 0) * u1 + t(1, 1) * u2};
    LaurentPoly f(2, {{{0, 0}, 1.0}, {{t(0, 0), t(1, 0)}, 1.0}, {{t(0, 1), t(1, 1)}, 1.0}});
    const Complex v = em_integral(em_problem({f}, {0.0, 0.0}, s, {tt}), qtol(o)).value;
    std::ostringstream name;
    name << "T=[" << t(0, 0) << ' ' << t(0, 1) << "; " << t(1, 0) << ' ' << t(1, 1) << "]";
    rows.push_back(rel_row(name.str(), v, simplex_closed_form(t, s, tt), 1e-7));
  }
  return rows;
}

std::vector<CheckRow> gauss_2f1(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const double s = 0.7, t1 = 0.9, t2 = 0.6;
  CVector cs = o.c.empty() ? CVector{0.3, 0.8, std::exp(I * (kPi / 4))} : o.c;
  for (auto c : cs) {
    const LaurentPoly f1(1, {{{0}, 1.0}, {{1}, 1.0}});
    const LaurentPoly f2(1, {{{0}, c}, {{1}, 1.0}});
    const Complex v = em_integral(em_problem({f1, f2}, {0.0}, {s}, {t1, t2}), qtol(o)).value;
    const Complex want = gamma_ratio({t1 + t2 - s, s}, {t1 + t2}) * hyp2f1_series(t2, t1 + t2 - s, t1 + t2, 1.0 - c);
    std::ostringstream name;
    name << "c=" << c;
    rows.push_back(rel_row(name.str(), v, want, 1e-6));
  }
  return rows;
}

// sum (T-s)_{|k|} / (T)_{|k|} (t1)_k1 (t2)_k2 / (k1! k2!) x^k1 y^k2
Complex appell_f1(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y) {
  Complex sum = 0.0;
  for (int n = 0; n < 400; ++n) {
    Complex layer = 0.0;
    Complex t = pochhammer(a, n) / pochhammer(c, n);
    for (int k1 = 0; k1 <= n; ++k1) {
      const int k2 = n - k1;
      layer += t * pochhammer(b1, k1) * pochhammer(b2, k2) / (std::tgamma(k1 + 1.0) * std::tgamma(k2 + 1.0)) *
               std::pow(x, k1) * std::pow(y, k2);
    }
    sum += layer;
    if (n > 10 && std::abs(layer) < 1e-17 * std::abs(sum)) break;
  }
  return sum;
}

std::vector<CheckRow> appell(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const Complex c1 = o.c.size() > 0 ? o.c[0] : Complex(0.7), c2 = o.c.size() > 1 ? o.c[1] : 1.2 * std::exp(0.3 * I);
  const LaurentPoly f0(1, {{{0}, 1.0}, {{1}, 1.0}});
  const LaurentPoly f1(1, {{{0}, c1}, {{1}, 1.0}});
  const LaurentPoly f2(1, {{{0}, c2}, {{1}, 1.0}});
  const CVector t{0.6, 0.7, 0.5};
  const Complex tt = t[0] + t[1] + t[2];
  for (double s : {0.8, -0.5}) {
    EMProblem p = em_problem({f0, f1, f2}, {0.0}, {}, {});
    const auto expr = continue_to(p, {s}, t);
    const Complex phi = eval_phi(expr, {s}, t, qtol(o));
    const Complex want = appell_f1(tt - s, t[1], t[2], tt, 1.0 - c1, 1.0 - c2) / complex_gamma(tt);
    std::ostringstream name;
    name << "Phi at s=" << s << ", t=(0.6,0.7,0.5)";
    rows.push_back(rel_row(name.str(), phi, want, 1e-6));
  }
  return rows;
}

std::vector<CheckRow> circuit(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const CVector c = o.c.size() == 4 ? o.c
                                    : CVector{1.0, 1.1 * std::exp(0.4 * I), 0.9 * std::exp(-1.1 * I), 1.2 * std::exp(2.0 * I)};
  const LaurentPoly f(1, {{{0}, c[0]}, {{2}, c[1]}, {{3}, c[2]}, {{6}, c[3]}});
  const ComponentAtlas at = univariate_components(f);
  rows.push_back(bool_row("complement arcs = 6", at.arcs.size() == 6, std::to_string(at.arcs.size()) + " arcs"));

  const CayleySystem sys = cayley_matrix(FactorList({f}), {2.31}, {1.13});
  const GaleData g = gale_dual(sys);
  const Zonotope z = Zonotope::from_rows(g.b);
  std::mt19937_64 gen(o.seed);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::size_t most = 0;
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> base(g.dim(), 0.0);
    std::vector<double> args(sys.columns());
    for (auto& a : args) a = ang(gen);
    for (std::size_t k = 0; k < g.dim(); ++k)
      for (std::size_t r = 0; r < sys.columns(); ++r) base[k] += args[r] * static_cast<double>(g.b(r, k));
    most = std::max(most, lattice_points_in_zonotope(z, base).size());
  }
  rows.push_back(bool_row("zonotope lattice points <= 5 (20 bases)", most <= 5, "max " + std::to_string(most)));

  const auto res = total_nonresonance(sys, sys.beta, 10);
  rows.push_back(bool_row("beta totally nonresonant", res.totally_nonresonant,
                          std::to_string(res.hyperplanes) + " hyperplanes checked exactly"));
  std::vector<Germ> germs;
  for (const auto& arc : at.arcs) germs.push_back(phi_germ(sys, {arc.representative}, {2.31}, {1.13}, c));
  std::vector<double> sv;
  const std::size_t rank = independence_rank(germs, c, 8, o.jobs, &sv);
  std::ostringstream d;
  d << "rank " << rank << ", vol " << normalized_volume(sys.a) << ", sigma_min/sigma_max " << sv.back() / sv.front();
  rows.push_back(bool_row("independence rank = 6", rank == 6, d.str()));
  return rows;
}

std::vector<CheckRow> rank_jump(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const CVector c = o.c.size() == 4 ? o.c : CVector{1.0, 1.0, 1.0, 1.0};
  const LaurentPoly f(1, {{{0}, c[0]}, {{1}, c[1]}, {{3}, c[2]}, {{4}, c[3]}});
  const ComponentAtlas at = univariate_components(f);
  const double theta = at.label_at(TorusPoint{0.0}) >= 0 ? 0.0 : at.arcs.front().representative;
  const auto expr = continue_to(em_problem({f}, {theta}, {}, {}), {-2.0}, {-1.0});
  const Complex phi = eval_phi(expr, {-2.0}, {-1.0}, qtol(o));
  CheckRow zero;
  zero.name = "|Phi(-2,-1)|";
  zero.error = std::abs(phi);
  zero.threshold = 1e-6;
  zero.pass = zero.error <= zero.threshold;
  zero.detail = "theta=" + std::to_string(theta) + ", " + std::to_string(expr.terms.size()) + " terms";
  rows.push_back(zero);
  const auto [p1, p2] = rank_jump_extract(expr);
  rows.push_back(rel_row("Phi_1 = 2 c2^2 / c1", p1.value, 2.0 * c[1] * c[1] / c[0], 1e-3));
  rows.push_back(rel_row("Phi_2 = 2 c3^2 / c4", p2.value, 2.0 * c[2] * c[2] / c[3], 1e-3));
  return rows;
}

std::vector<CheckRow> em_mb_gauss(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  std::mt19937_64 gen(o.seed);
  std::uniform_real_distribution<double> sd(0.2, 0.6), td(0.3, 0.8), mod(0.8, 1.25), ph(-0.3, 0.3);
  LaurentPoly proto(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, 0.5}});
  const CayleySystem sys = cayley_matrix(FactorList({proto}));
  const GaleData g = gale_dual(sys);
  for (int k = 0; k < 5; ++k) {
    CVector c{1.0, 1.0, 1.0, 0.5};
    if (k > 0)
      for (auto& x : c) x *= mod(gen) * std::exp(I * ph(gen));
    const CVector s{sd(gen), sd(gen)};
    const CVector t{s[0] + s[1] + td(gen)};
    const EMMBReport rep = em_mb_check(sys, g, c, {0.0, 0.0}, s, t, qtol(o));
    std::ostringstream name;
    name.precision(3);
    name << "s=(" << s[0].real() << "," << s[1].real() << ") t=" << t[0].real();
    rows.push_back(rel_row(name.str(), rep.mb, rep.em, 1e-5));
  }
  return rows;
}

std::vector<CheckRow> loop_gauss(const ExampleOptions& o) {
  std::vector<CheckRow> rows;
  const Complex c4 = o.c.empty() ? Complex(0.9) : o.c[0];
  const LaurentPoly f1(2, {{{0, 0}, 1.0}, {{1, 0}, I}, {{0, 1}, I}, {{1, 1}, c4}});
  RasterOptions ro;
  ro.resolution = o.resolution;
  ro.jobs = o.jobs;
  const ComponentAtlas at = raster_coamoeba_2d(f1, ro);
  const int a = at.label_at(TorusPoint{0.0, 0.0}), b = at.label_at(TorusPoint{kPi, kPi});
  rows.push_back(bool_row("(0,0) and (pi,pi) in distinct components", a >= 0 && b >= 0 && a != b,
                          "labels " + std::to_string(a) + ", " + std::to_string(b) + " of " +
                              std::to_string(at.component_count())));
  const LaurentPoly f0(2, {{{0, 0}, 1.0}, {{1, 0}, 1.0}, {{0, 1}, 1.0}, {{1, 1}, c4}});
  const LaurentPoly g0(2, {{{0, 0}, 1.0}, {{1, 0}, -1.0}, {{0, 1}, -1.0}, {{1, 1}, c4}});
  for (const CVector& s : {CVector{0.4, 0.5}, CVector{-0.5, 0.3}}) {
    const CVector t{1.2};
    const auto ef = continue_to(em_problem({f0}, {0.0, 0.0}, {}, {}), s, t);
    const auto eg = continue_to(em_problem({g0}, {kPi, kPi}, {}, {}), s, t);
    const Complex lhs = eval_phi(eg, s, t, qtol(o));
    const Complex rhs = std::exp((s[0] + s[1]) * kPi * I) * eval_phi(ef, s, t, qtol(o));
    std::ostringstream name;
    name << "Phi_g0^(pi,pi) = e^{(s1+s2) pi i} Phi_f0^(0,0), s=(" << s[0].real() << "," << s[1].real() << ")";
    rows.push_back(rel_row(name.str(), lhs, rhs, 1e-6));
  }
  return rows;
}

}  // namespace

const std::vector<std::string>& example_names() {
  static const std::vector<std::string> names{"beta",         "simplex-T",       "gauss-2f1",   "appell-f1-spotcheck",
                                              "circuit-0236", "rank-jump-0134", "em-mb-gauss", "loop-gauss"};
  return names;
}

std::vector<CheckRow> run_example(const std::string& name, const ExampleOptions& opt) {
  if (name == "beta") return beta(opt);
  if (name == "simplex-T") return simplex_t(opt);
  if (name == "gauss-2f1") return gauss_2f1(opt);
  if (name == "appell-f1-spotcheck") return appell(opt);
  if (name == "circuit-0236") return circuit(opt);
  if (name == "rank-jump-0134") return rank_jump(opt);
  if (name == "em-mb-gauss") return em_mb_gauss(opt);
  if (name == "loop-gauss") return loop_gauss(opt);
  fail(ErrorCode::SchemaError, "unknown example \"" + name + "\"");
}

void print_table(std::ostream& os, const std::string& name, const std::vector<CheckRow>& rows) {
  os << "example " << name << '\n';
  std::size_t w = 5;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  for (const auto& r : rows) {
    os << "  " << (r.pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(static_cast<int>(w)) << r.name << "  ";
    os << std::scientific << std::setprecision(2) << r.error << " <= " << r.threshold << std::defaultfloat;
    os << "  " << r.detail << '\n';
  }
}

}  // namespace emgkz::cli
