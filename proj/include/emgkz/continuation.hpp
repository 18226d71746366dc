#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "emgkz/emquad.hpp"
#include "emgkz/polytope.hpp"

namespace emgkz {

// a.s + b.t + constant
struct AffineForm {
  CVector coeff_s;
  CVector coeff_t;
  Complex constant = 0.0;

  Complex evaluate(const CVector& s, const CVector& t) const;
};

// Polynomial in (s_1..s_n, t_1..t_m) stored as a coefficient table.
class STPolynomial {
 public:
  using Key = std::vector<int>;

  STPolynomial() = default;
  STPolynomial(std::size_t n, std::size_t m) : n_(n), m_(m) {}
  static STPolynomial one(std::size_t n, std::size_t m);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  const std::map<Key, Complex>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  int degree() const;

  STPolynomial times(const AffineForm& a) const;
  void add(const STPolynomial& other);
  Complex evaluate(const CVector& s, const CVector& t) const;

 private:
  std::size_t n_ = 0, m_ = 0;
  std::map<Key, Complex> terms_;
};

// Denominator form <mu_k, s> - <nu_k, t> + d.
struct Pole {
  std::size_t facet = 0;
  std::int64_t d = 0;
  auto operator<=>(const Pole&) const = default;
};

struct ContinuationTerm {
  IVector beta;
  std::int64_t q = 0;
  STPolynomial numerator;
  std::vector<Pole> poles;  // sorted
};

struct ContinuationExpr {
  EMProblem base;  // factors, theta, anchor and branch hint; s and t unused
  NewtonData newton;
  std::vector<ContinuationTerm> terms;
  std::vector<std::size_t> steps_taken;
  std::set<Pole> realized_before_merge;

  std::size_t n_vars() const { return base.n_vars(); }
  std::size_t n_factors() const { return base.factors.size(); }
  AffineForm pole_form(const Pole& p) const;
  // <mu_k, s> - <nu_k, t>
  Complex facet_form(std::size_t k, const CVector& s, const CVector& t) const;
};

// Default 10^6, overridden by the EMGKZ_TERM_BUDGET environment variable.
std::size_t term_budget();

ContinuationExpr make_expression(const EMProblem& base);
ContinuationExpr step(const ContinuationExpr& expr, std::size_t k, std::size_t budget = term_budget());

// Greedy facet sequence after which all shifted integrals converge at (s,t)
// with every margin and every Re t_i + q at least delta.
std::vector<std::size_t> plan(const ContinuationExpr& expr, const CVector& s, const CVector& t, double delta = 0.5);
ContinuationExpr apply_plan(const ContinuationExpr& expr, const std::vector<std::size_t>& steps,
                            std::size_t budget = term_budget());
// make_expression + plan + apply_plan
ContinuationExpr continue_to(const EMProblem& base, const CVector& s, const CVector& t);

Complex eval_M(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol = 1e-11);
// M / prod Gamma(<mu_k, s> - <nu_k, t>), with the Gamma factors cancelled
// exactly against the term denominators so that pole hyperplanes are harmless.
Complex eval_phi(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol = 1e-11);
// Gamma(t) Phi for a single factor, entire in (s,t); the numerators are
// divided by (t)_q exactly so no Gamma pole is touched.
Complex eval_phi_tilde(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol = 1e-11);

struct LimitResult {
  Complex value = 0.0;
  double error_estimate = 0.0;
};

// lim_{h -> 0+} Phi((s,t) + h v) / h^order by Richardson extrapolation over
// h = 1e-2, 5e-3, ... (`levels` values); `tilde` selects Gamma(t) Phi. Throws LimitUnstable.
LimitResult phi_limit(const ContinuationExpr& expr, const CVector& s, const CVector& t, const CVector& ds,
                      const CVector& dt, int order, double tol = 1e-12, bool tilde = false, int levels = 3);

// Unit direction in C^{n+m} (real entries) from a seeded generator.
std::vector<double> random_direction(std::uint64_t seed, std::size_t dim);

// (Phi_1, Phi_2) for c_1 + c_2 z + c_3 z^3 + c_4 z^4 at (s,t) = (-2,-1), with
// Phi = Gamma(t) M / (Gamma(s) Gamma(4t - s)): Phi_1 = lim Phi / (4t - s + 2)
// along s = -2, Phi_2 = lim Phi / (s + 2) along 4t - s + 2 = 0.
std::pair<LimitResult, LimitResult> rank_jump_extract(const ContinuationExpr& expr);

struct PoleLatticeReport {
  std::set<std::int64_t> semigroup;        // G_k cut at the bound
  std::set<std::int64_t> realized;         // d-values on facet k in the merged expression
  std::set<std::int64_t> realized_before_merge;
  std::vector<std::int64_t> gaps;          // [0, bound] minus G_k
  bool realized_in_semigroup = true;
};

PoleLatticeReport pole_lattice(const ContinuationExpr& expr, std::size_t k, std::int64_t bound);

}  // namespace emgkz
