#include "emgkz/continuation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>
#include <sstream>
#include <tuple>

#include "emgkz/coamoeba.hpp"

namespace emgkz {

Complex AffineForm::evaluate(const CVector& s, const CVector& t) const {
  Complex v = constant;
  for (std::size_t i = 0; i < coeff_s.size(); ++i) v += coeff_s[i] * s[i];
  for (std::size_t i = 0; i < coeff_t.size(); ++i) v += coeff_t[i] * t[i];
  return v;
}

STPolynomial STPolynomial::one(std::size_t n, std::size_t m) {
  STPolynomial p(n, m);
  p.terms_[Key(n + m, 0)] = 1.0;
  return p;
}

int STPolynomial::degree() const {
  int d = -1;
  for (const auto& [k, c] : terms_) {
    int s = 0;
    for (int e : k) s += e;
    d = std::max(d, s);
  }
  return d;
}

STPolynomial STPolynomial::times(const AffineForm& a) const {
  STPolynomial r(n_, m_);
  auto add_to = [&](Key k, Complex c) {
    if (c == Complex(0.0)) return;
    auto [it, fresh] = r.terms_.try_emplace(std::move(k), c);
    if (!fresh) {
      it->second += c;
      if (it->second == Complex(0.0)) r.terms_.erase(it);
    }
  };
  for (const auto& [k, c] : terms_) {
    add_to(k, c * a.constant);
    for (std::size_t i = 0; i < a.coeff_s.size(); ++i) {
      Key kk = k;
      ++kk[i];
      add_to(std::move(kk), c * a.coeff_s[i]);
    }
    for (std::size_t i = 0; i < a.coeff_t.size(); ++i) {
      Key kk = k;
      ++kk[n_ + i];
      add_to(std::move(kk), c * a.coeff_t[i]);
    }
  }
  return r;
}

void STPolynomial::add(const STPolynomial& other) {
  for (const auto& [k, c] : other.terms_) {
    auto [it, fresh] = terms_.try_emplace(k, c);
    if (!fresh) {
      it->second += c;
      if (it->second == Complex(0.0)) terms_.erase(it);
    }
  }
}

Complex STPolynomial::evaluate(const CVector& s, const CVector& t) const {
  Complex v = 0.0;
  for (const auto& [k, c] : terms_) {
    Complex m = c;
    for (std::size_t i = 0; i < n_; ++i)
      if (k[i]) m *= std::pow(s[i], k[i]);
    for (std::size_t i = 0; i < m_; ++i)
      if (k[n_ + i]) m *= std::pow(t[i], k[n_ + i]);
    v += m;
  }
  return v;
}

// ---------------------------------------------------------------------------

AffineForm ContinuationExpr::pole_form(const Pole& p) const {
  const Facet& f = newton.facets.at(p.facet);
  AffineForm a;
  for (auto v : f.mu) a.coeff_s.push_back(static_cast<double>(v));
  for (auto v : f.nu) a.coeff_t.push_back(-static_cast<double>(v));
  a.constant = static_cast<double>(p.d);
  return a;
}

Complex ContinuationExpr::facet_form(std::size_t k, const CVector& s, const CVector& t) const {
  const Facet& f = newton.facets.at(k);
  Complex v = 0.0;
  for (std::size_t i = 0; i < f.mu.size(); ++i) v += static_cast<double>(f.mu[i]) * s[i];
  for (std::size_t i = 0; i < f.nu.size(); ++i) v -= static_cast<double>(f.nu[i]) * t[i];
  return v;
}

std::size_t term_budget() {
  if (const char* env = std::getenv("EMGKZ_TERM_BUDGET")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return 1'000'000;
}

ContinuationExpr make_expression(const EMProblem& base_in) {
  ContinuationExpr e;
  e.base = base_in;
  if (e.base.s.empty()) e.base.s.assign(e.base.n_vars(), 1.0);
  if (e.base.t.empty()) e.base.t.assign(e.base.factors.size(), 1.0);
  e.base.validate();
  e.newton = newton_facets(e.base.factors);
  if (e.base.verify_theta && e.n_vars() <= 2) {
    bool ok = true;
    try {
      ok = completely_nonvanishing_at(e.base.factors, TorusPoint(e.base.theta));
    } catch (const Error& err) {
      if (err.code() != ErrorCode::Inconclusive) throw;
    }
    if (!ok) fail(ErrorCode::BranchTrackingFailed, "theta lies in the closed coamoeba");
  }
  e.base.verify_theta = false;
  ContinuationTerm t0;
  t0.beta.assign(e.n_vars(), 0);
  t0.numerator = STPolynomial::one(e.n_vars(), e.n_factors());
  e.terms.push_back(std::move(t0));
  return e;
}

namespace {

// Coefficient of z^alpha in f'_i prod_{l != i} f_l, one entry per factor i,
// where f'_i is the face derivative along facet k.
std::map<Exponent, CVector> g_table(const ContinuationExpr& e, std::size_t k) {
  const Facet& fc = e.newton.facets.at(k);
  const std::size_t m = e.n_factors();
  std::map<Exponent, CVector> table;
  for (std::size_t i = 0; i < m; ++i) {
    LaurentPoly g = face_derivative(e.base.factors[i], fc.mu, fc.nu[i]);
    for (std::size_t l = 0; l < m; ++l)
      if (l != i) g = g * e.base.factors[l];
    for (const auto& [a, c] : g.terms()) {
      auto [it, fresh] = table.try_emplace(a, CVector(m, 0.0));
      it->second[i] += c;
    }
  }
  return table;
}

void require_full(const ContinuationExpr& e) {
  if (!e.newton.full_dimensional)
    fail(ErrorCode::NotFullDimensional, "continuation needs a full-dimensional Newton polytope");
}

}  // namespace

ContinuationExpr step(const ContinuationExpr& expr, std::size_t k, std::size_t budget) {
  require_full(expr);
  if (k >= expr.newton.size()) fail(ErrorCode::DimensionMismatch, "facet index out of range");
  const Facet& fc = expr.newton.facets[k];
  const auto table = g_table(expr, k);
  if (table.empty()) fail(ErrorCode::DegenerateConfiguration, "g vanishes identically");
  const std::size_t n = expr.n_vars(), m = expr.n_factors();

  ContinuationExpr out = expr;
  out.terms.clear();
  out.steps_taken.push_back(k);
  using Key = std::tuple<IVector, std::int64_t, std::vector<Pole>>;
  std::map<Key, STPolynomial> merged;
  for (const auto& term : expr.terms) {
    const Pole pole{k, checked_add(dot(fc.mu, term.beta), -checked_mul(term.q, fc.nu_sum))};
    out.realized_before_merge.insert(pole);
    std::vector<Pole> poles = term.poles;
    poles.insert(std::upper_bound(poles.begin(), poles.end(), pole), pole);
    for (const auto& [alpha, coeffs] : table) {
      AffineForm a;
      a.coeff_s.assign(n, 0.0);
      a.coeff_t = coeffs;
      Complex sum = 0.0;
      for (auto c : coeffs) sum += c;
      a.constant = static_cast<double>(term.q) * sum;
      IVector beta(n);
      for (std::size_t i = 0; i < n; ++i) beta[i] = checked_add(term.beta[i], alpha[i]);
      STPolynomial num = term.numerator.times(a);
      if (num.is_zero()) continue;
      auto [it, fresh] = merged.try_emplace(Key{std::move(beta), term.q + 1, poles}, STPolynomial(n, m));
      it->second.add(num);
      if (merged.size() > budget) {
        std::ostringstream os;
        os << "more than " << budget << " terms";
        fail(ErrorCode::TermBudgetExceeded, os.str());
      }
    }
  }
  for (auto& [key, num] : merged) {
    if (num.is_zero()) continue;
    ContinuationTerm t;
    t.beta = std::get<0>(key);
    t.q = std::get<1>(key);
    t.poles = std::get<2>(key);
    t.numerator = std::move(num);
    out.terms.push_back(std::move(t));
  }
  return out;
}

std::vector<std::size_t> plan(const ContinuationExpr& expr, const CVector& s, const CVector& t, double delta) {
  require_full(expr);
  const std::size_t n = expr.n_vars(), m = expr.n_factors(), nf = expr.newton.size();
  if (s.size() != n || t.size() != m) fail(ErrorCode::DimensionMismatch, "plan target has wrong dimensions");
  std::vector<std::vector<Exponent>> supports(nf);
  for (std::size_t k = 0; k < nf; ++k)
    for (const auto& [a, c] : g_table(expr, k)) supports[k].push_back(a);

  std::set<std::pair<IVector, std::int64_t>> shifts;
  for (const auto& term : expr.terms) shifts.insert({term.beta, term.q});
  double tau_min = HUGE_VAL;
  for (auto v : t) tau_min = std::min(tau_min, v.real());

  std::vector<std::size_t> out;
  for (int guard = 0; guard < 256; ++guard) {
    std::vector<double> worst(nf, HUGE_VAL);
    std::int64_t qmin = std::numeric_limits<std::int64_t>::max();
    for (const auto& [beta, q] : shifts) {
      qmin = std::min(qmin, q);
      for (std::size_t k = 0; k < nf; ++k) {
        const Facet& fc = expr.newton.facets[k];
        double v = -static_cast<double>(q * fc.nu_sum);
        for (std::size_t i = 0; i < n; ++i) v += static_cast<double>(fc.mu[i]) * (s[i].real() + beta[i]);
        for (std::size_t i = 0; i < m; ++i) v -= static_cast<double>(fc.nu[i]) * t[i].real();
        worst[k] = std::min(worst[k], v);
      }
    }
    const auto kbest = static_cast<std::size_t>(std::min_element(worst.begin(), worst.end()) - worst.begin());
    if (worst[kbest] >= delta && tau_min + static_cast<double>(qmin) >= delta) return out;
    out.push_back(kbest);
    std::set<std::pair<IVector, std::int64_t>> next;
    for (const auto& [beta, q] : shifts)
      for (const auto& a : supports[kbest]) {
        IVector b(n);
        for (std::size_t i = 0; i < n; ++i) b[i] = beta[i] + a[i];
        next.insert({std::move(b), q + 1});
      }
    shifts = std::move(next);
    if (shifts.size() > term_budget()) fail(ErrorCode::TermBudgetExceeded, "plan simulation exceeds the term budget");
  }
  fail(ErrorCode::TermBudgetExceeded, "plan did not terminate within 256 steps");
}

ContinuationExpr apply_plan(const ContinuationExpr& expr, const std::vector<std::size_t>& steps, std::size_t budget) {
  ContinuationExpr e = expr;
  for (auto k : steps) e = step(e, k, budget);
  return e;
}

ContinuationExpr continue_to(const EMProblem& base, const CVector& s, const CVector& t) {
  ContinuationExpr e = make_expression(base);
  return apply_plan(e, plan(e, s, t));
}

namespace {

void check_point(const ContinuationExpr& e, const CVector& s, const CVector& t) {
  if (s.size() != e.n_vars() || t.size() != e.n_factors())
    fail(ErrorCode::DimensionMismatch, "evaluation point has wrong dimensions");
}

class ShiftCache {
 public:
  ShiftCache(const ContinuationExpr& e, const CVector& s, const CVector& t, double tol)
      : e_(e), s_(s), t_(t), tol_(tol) {}

  Complex get(const IVector& beta, std::int64_t q) {
    auto key = std::make_pair(beta, q);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    EMProblem p = e_.base;
    p.s = s_;
    p.t = t_;
    for (std::size_t i = 0; i < p.s.size(); ++i) p.s[i] += static_cast<double>(beta[i]);
    for (auto& v : p.t) v += static_cast<double>(q);
    Complex v;
    try {
      v = em_integral(p, tol_).value;
    } catch (const Error& err) {
      if (err.code() == ErrorCode::NotInConvergenceDomain) fail(ErrorCode::TermIntegralDiverged, err.what());
      throw;
    }
    cache_.emplace(std::move(key), v);
    return v;
  }

 private:
  const ContinuationExpr& e_;
  const CVector& s_;
  const CVector& t_;
  double tol_;
  std::map<std::pair<IVector, std::int64_t>, Complex> cache_;
};

}  // namespace

Complex eval_M(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol) {
  check_point(expr, s, t);
  ShiftCache cache(expr, s, t, tol);
  Complex total = 0.0;
  for (const auto& term : expr.terms) {
    Complex v = term.numerator.evaluate(s, t);
    for (const auto& p : term.poles) {
      const Complex den = expr.facet_form(p.facet, s, t) + static_cast<double>(p.d);
      if (std::abs(den) < 1e-8) fail(ErrorCode::PoleHit, "a denominator vanishes at the evaluation point");
      v /= den;
    }
    total += v * cache.get(term.beta, term.q);
  }
  return total;
}

namespace {

// P(t) / (t)_q for a numerator depending on a single t; exact up to rounding
// because every step multiplies by t + q.
std::vector<Complex> divide_pochhammer(const STPolynomial& p, std::int64_t q) {
  const std::size_t n = p.n();
  std::vector<Complex> c(static_cast<std::size_t>(std::max(p.degree(), 0)) + 1, 0.0);
  double scale = 0.0;
  for (const auto& [k, v] : p.terms()) {
    for (std::size_t i = 0; i < n; ++i)
      if (k[i] != 0) fail(ErrorCode::DegenerateConfiguration, "numerator depends on s");
    c[static_cast<std::size_t>(k[n])] += v;
    scale = std::max(scale, std::abs(v));
  }
  for (std::int64_t j = 0; j < q; ++j) {
    // synthetic division by (t + j)
    if (c.size() < 2) fail(ErrorCode::DegenerateConfiguration, "numerator is not divisible by the Pochhammer symbol");
    const double r = -static_cast<double>(j);
    std::vector<Complex> out(c.size() - 1);
    out.back() = c.back();
    for (std::size_t i = out.size() - 1; i > 0; --i) out[i - 1] = c[i] + r * out[i];
    const Complex rem = c[0] + r * out[0];
    if (std::abs(rem) > 1e-8 * std::max(scale, 1e-300))
      fail(ErrorCode::DegenerateConfiguration, "numerator is not divisible by the Pochhammer symbol");
    c = std::move(out);
  }
  return c;
}

Complex phi_impl(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol, bool tilde) {
  check_point(expr, s, t);
  if (tilde && expr.n_factors() != 1) fail(ErrorCode::DimensionMismatch, "Gamma(t) Phi is defined for one factor");
  const std::size_t nf = expr.newton.size();
  std::vector<Complex> ell(nf);
  for (std::size_t k = 0; k < nf; ++k) ell[k] = expr.facet_form(k, s, t);

  ShiftCache cache(expr, s, t, tol);
  Complex total = 0.0;
  std::vector<std::vector<std::int64_t>> dsets(nf);
  for (const auto& term : expr.terms) {
    for (auto& d : dsets) d.clear();
    for (const auto& p : term.poles) dsets[p.facet].push_back(p.d);
    Complex v;
    if (tilde) {
      const auto qc = divide_pochhammer(term.numerator, term.q);
      Complex acc = 0.0;
      for (std::size_t i = qc.size(); i-- > 0;) acc = acc * t[0] + qc[i];
      try {
        v = acc * complex_gamma(t[0] + static_cast<double>(term.q));
      } catch (const Error& e) {
        if (e.code() == ErrorCode::PoleAtNonpositiveInteger) fail(ErrorCode::PoleHit, e.what());
        throw;
      }
    } else {
      v = term.numerator.evaluate(s, t);
    }
    // 1/Gamma(l) / prod_{d in D} (l + d) = prod_{j <= max D, j not in D} (l + j) / Gamma(l + max D + 1)
    for (std::size_t k = 0; k < nf; ++k) {
      auto& ds = dsets[k];
      if (ds.empty()) {
        v *= reciprocal_gamma(ell[k]);
        continue;
      }
      std::sort(ds.begin(), ds.end());
      const std::int64_t dmax = ds.back();
      std::size_t pos = 0;
      for (std::int64_t j = 0; j <= dmax; ++j) {
        std::size_t mult = 0;
        while (pos < ds.size() && ds[pos] == j) {
          ++pos;
          ++mult;
        }
        if (mult == 0) {
          v *= ell[k] + static_cast<double>(j);
        } else {
          for (std::size_t r = 1; r < mult; ++r) {
            const Complex den = ell[k] + static_cast<double>(j);
            if (std::abs(den) < 1e-8) fail(ErrorCode::PoleHit, "a repeated denominator vanishes");
            v /= den;
          }
        }
      }
      if (pos != ds.size()) fail(ErrorCode::PoleHit, "negative denominator offset");
      v *= reciprocal_gamma(ell[k] + static_cast<double>(dmax + 1));
    }
    if (v == Complex(0.0)) continue;
    total += v * cache.get(term.beta, term.q);
  }
  return total;
}

}  // namespace

Complex eval_phi(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol) {
  return phi_impl(expr, s, t, tol, false);
}

Complex eval_phi_tilde(const ContinuationExpr& expr, const CVector& s, const CVector& t, double tol) {
  return phi_impl(expr, s, t, tol, true);
}

LimitResult phi_limit(const ContinuationExpr& expr, const CVector& s, const CVector& t, const CVector& ds,
                      const CVector& dt, int order, double tol, bool tilde, int levels) {
  check_point(expr, s, t);
  if (ds.size() != s.size() || dt.size() != t.size()) fail(ErrorCode::DimensionMismatch, "direction has wrong length");
  if (levels < 2) fail(ErrorCode::DimensionMismatch, "need at least two extrapolation levels");
  // Richardson table on h = 1e-2 / 2^i, error terms assumed O(h), O(h^2), ...
  std::vector<std::vector<Complex>> tab(levels);
  double h = 1e-2;
  for (int i = 0; i < levels; ++i, h *= 0.5) {
    CVector s1 = s, t1 = t;
    for (std::size_t j = 0; j < s.size(); ++j) s1[j] += h * ds[j];
    for (std::size_t j = 0; j < t.size(); ++j) t1[j] += h * dt[j];
    tab[i].push_back(phi_impl(expr, s1, t1, tol, tilde) / std::pow(h, order));
    double w = 1.0;
    for (int k = 1; k <= i; ++k) {
      w *= 2.0;
      tab[i].push_back((w * tab[i][k - 1] - tab[i - 1][k - 1]) / (w - 1.0));
    }
  }
  const auto& last = tab.back();
  LimitResult out;
  out.value = last.back();
  out.error_estimate = std::abs(out.value - last[last.size() - 2]);
  if (out.error_estimate > 1e-4 * std::max(std::abs(out.value), 1e-8)) {
    std::ostringstream os;
    os << "extrapolation disagreement " << out.error_estimate << " for limit " << std::abs(out.value);
    fail(ErrorCode::LimitUnstable, os.str());
  }
  return out;
}

std::vector<double> random_direction(std::uint64_t seed, std::size_t dim) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<double> v(dim);
  double norm = 0.0;
  do {
    norm = 0.0;
    for (auto& x : v) {
      x = nd(gen);
      norm += x * x;
    }
  } while (norm < 1e-12);
  for (auto& x : v) x /= std::sqrt(norm);
  return v;
}

std::pair<LimitResult, LimitResult> rank_jump_extract(const ContinuationExpr& expr) {
  if (expr.n_vars() != 1 || expr.n_factors() != 1)
    fail(ErrorCode::DimensionMismatch, "rank jump extraction needs one univariate factor");
  const CVector s{-2.0}, t{-1.0};
  LimitResult p1 = phi_limit(expr, s, t, {0.0}, {1.0}, 1, 1e-12, true, 5);
  p1.value /= 4.0;
  p1.error_estimate /= 4.0;
  LimitResult p2 = phi_limit(expr, s, t, {1.0}, {0.25}, 1, 1e-12, true, 5);
  return {p1, p2};
}

PoleLatticeReport pole_lattice(const ContinuationExpr& expr, std::size_t k, std::int64_t bound) {
  if (k >= expr.newton.size()) fail(ErrorCode::DimensionMismatch, "facet index out of range");
  PoleLatticeReport rep;
  const LaurentPoly f = product(expr.base.factors);
  const auto supp = f.support();
  rep.semigroup = pole_semigroup(expr.newton, k, supp, bound);
  for (std::int64_t v = 0; v <= bound; ++v)
    if (!rep.semigroup.count(v)) rep.gaps.push_back(v);
  std::int64_t dmax = bound;
  for (const auto& term : expr.terms)
    for (const auto& p : term.poles)
      if (p.facet == k) {
        rep.realized.insert(p.d);
        dmax = std::max(dmax, p.d);
      }
  for (const auto& p : expr.realized_before_merge)
    if (p.facet == k) {
      rep.realized_before_merge.insert(p.d);
      dmax = std::max(dmax, p.d);
    }
  const auto big = pole_semigroup(expr.newton, k, supp, dmax);
  for (auto d : rep.realized_before_merge)
    if (!big.count(d)) rep.realized_in_semigroup = false;
  return rep;
}

}  // namespace emgkz
