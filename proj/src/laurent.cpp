#include "emgkz/laurent.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace emgkz {

LaurentPoly::LaurentPoly(std::size_t n_vars, const std::vector<std::pair<Exponent, Complex>>& terms)
    : n_vars_(n_vars) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

LaurentPoly LaurentPoly::constant(std::size_t n_vars, Complex c) {
  LaurentPoly p(n_vars);
  p.add_term(Exponent(n_vars, 0), c);
  return p;
}

LaurentPoly LaurentPoly::monomial(Exponent e, Complex c) {
  LaurentPoly p(e.size());
  p.add_term(e, c);
  return p;
}

Complex LaurentPoly::coefficient(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? Complex(0.0) : it->second;
}

void LaurentPoly::add_term(const Exponent& e, Complex c) {
  if (e.size() != n_vars_) fail(ErrorCode::DimensionMismatch, "exponent length differs from n_vars");
  require_finite(c, "LaurentPoly coefficient");
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) it->second += c;
  if (it->second == Complex(0.0)) terms_.erase(it);
}

std::vector<Exponent> LaurentPoly::support() const {
  std::vector<Exponent> s;
  s.reserve(terms_.size());
  for (const auto& [e, c] : terms_) s.push_back(e);
  return s;
}

Complex LaurentPoly::evaluate(std::span<const Complex> z) const {
  if (z.size() != n_vars_) fail(ErrorCode::DimensionMismatch, "evaluation point has wrong length");
  Complex sum = 0.0;
  for (const auto& [e, c] : terms_) {
    Complex m = c;
    for (std::size_t i = 0; i < n_vars_; ++i) m *= std::pow(z[i], static_cast<int>(e[i]));
    sum += m;
  }
  return sum;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& other) const {
  if (other.n_vars_ != n_vars_) fail(ErrorCode::DimensionMismatch, "product of polynomials in different rings");
  LaurentPoly r(n_vars_);
  for (const auto& [ea, ca] : terms_)
    for (const auto& [eb, cb] : other.terms_) {
      Exponent e(n_vars_);
      for (std::size_t i = 0; i < n_vars_; ++i) e[i] = checked_add(ea[i], eb[i]);
      r.add_term(e, ca * cb);
    }
  if (r.size() > kMaxProductTerms) {
    std::ostringstream os;
    os << "product has " << r.size() << " terms (limit " << kMaxProductTerms << ")";
    fail(ErrorCode::TermCountExceeded, os.str());
  }
  return r;
}

LaurentPoly LaurentPoly::operator+(const LaurentPoly& other) const {
  if (other.n_vars_ != n_vars_) fail(ErrorCode::DimensionMismatch, "sum of polynomials in different rings");
  LaurentPoly r = *this;
  for (const auto& [e, c] : other.terms_) r.add_term(e, c);
  return r;
}

LaurentPoly LaurentPoly::scaled(Complex c) const {
  LaurentPoly r(n_vars_);
  for (const auto& [e, v] : terms_) r.add_term(e, v * c);
  return r;
}

FactorList::FactorList(std::vector<LaurentPoly> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) fail(ErrorCode::DimensionMismatch, "a factor list needs at least one factor");
  for (const auto& f : factors_) {
    if (f.is_zero()) fail(ErrorCode::DimensionMismatch, "zero factor");
    if (f.n_vars() != factors_.front().n_vars()) fail(ErrorCode::DimensionMismatch, "factors in different rings");
  }
}

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b) {
  if (a.size() != b.size()) fail(ErrorCode::DimensionMismatch, "dot product length mismatch");
  std::int64_t s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s = checked_add(s, checked_mul(a[i], b[i]));
  return s;
}

std::vector<Exponent> support(const LaurentPoly& p) { return p.support(); }

std::vector<Exponent> cayley_order(const LaurentPoly& p) {
  std::vector<Exponent> out = p.support();
  std::sort(out.begin(), out.end(), [](const Exponent& a, const Exponent& b) {
    return std::lexicographical_compare(a.rbegin(), a.rend(), b.rbegin(), b.rend());
  });
  return out;
}

LaurentPoly product(const FactorList& fs) {
  LaurentPoly r = fs[0];
  for (std::size_t i = 1; i < fs.size(); ++i) r = r * fs[i];
  return r;
}

std::int64_t face_offset(const LaurentPoly& p, std::span<const std::int64_t> mu) {
  if (p.is_zero()) fail(ErrorCode::EmptySupport, "face offset of the zero polynomial");
  std::int64_t best = 0;
  bool first = true;
  for (const auto& [e, c] : p.terms()) {
    const std::int64_t v = dot(mu, e);
    if (first || v < best) best = v;
    first = false;
  }
  return best;
}

namespace {
void check_offset(const LaurentPoly& p, std::span<const std::int64_t> mu, std::int64_t nu) {
  const std::int64_t m = face_offset(p, mu);
  if (m != nu) {
    std::ostringstream os;
    os << "offset " << nu << " is not the minimum " << m << " of <mu, supp>";
    fail(ErrorCode::NotAFaceOffset, os.str());
  }
}
}  // namespace

LaurentPoly truncate_to_face(const LaurentPoly& p, std::span<const std::int64_t> mu, std::int64_t nu) {
  check_offset(p, mu, nu);
  LaurentPoly r(p.n_vars());
  for (const auto& [e, c] : p.terms())
    if (dot(mu, e) == nu) r.add_term(e, c);
  return r;
}

LaurentPoly face_derivative(const LaurentPoly& p, std::span<const std::int64_t> mu, std::int64_t nu) {
  check_offset(p, mu, nu);
  LaurentPoly r(p.n_vars());
  for (const auto& [e, c] : p.terms()) {
    const std::int64_t w = dot(mu, e) - nu;
    if (w != 0) r.add_term(e, c * static_cast<double>(w));
  }
  return r;
}

// ---------------------------------------------------------------------------

LogEvaluator::LogEvaluator(const LaurentPoly& f, std::span<const double> theta) : n_(f.n_vars()) {
  if (theta.size() != n_) fail(ErrorCode::DimensionMismatch, "theta has wrong length");
  for (const auto& [e, c] : f.terms()) {
    double ph = std::arg(c);
    for (std::size_t i = 0; i < n_; ++i) {
      exps_.push_back(static_cast<double>(e[i]));
      ph += static_cast<double>(e[i]) * theta[i];
    }
    log_abs_.push_back(std::log(std::abs(c)));
    phase_.push_back(ph);
  }
}

Complex LogEvaluator::principal_log(std::span<const double> x) const {
  const std::size_t k = log_abs_.size();
  double amax = -HUGE_VAL;
  thread_local std::vector<double> a;
  a.resize(k);
  for (std::size_t j = 0; j < k; ++j) {
    double v = log_abs_[j];
    for (std::size_t i = 0; i < n_; ++i) v += exps_[j * n_ + i] * x[i];
    a[j] = v;
    amax = std::max(amax, v);
  }
  double re = 0.0, im = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    const double w = std::exp(a[j] - amax);
    re += w * std::cos(phase_[j]);
    im += w * std::sin(phase_[j]);
  }
  const double mod = std::hypot(re, im);
  // Relative cancellation below ~1e-14 of the dominant monomial is a zero.
  if (mod < 1e-14) return Complex(-HUGE_VAL, 0.0);
  return Complex(amax + std::log(mod), std::atan2(im, re));
}

LogBranchTracker::LogBranchTracker(const FactorList& fs, std::span<const double> theta) {
  for (const auto& f : fs) evals_.emplace_back(f, theta);
}

namespace {
constexpr double kTwoPi = 2.0 * kPi;

double nearest_sheet(double principal_imag, double reference) {
  return principal_imag + kTwoPi * std::round((reference - principal_imag) / kTwoPi);
}

void require_nonzero(Complex l, std::span<const double> x) {
  if (!std::isfinite(l.real())) {
    std::ostringstream os;
    os << "factor vanishes numerically at x = (";
    for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    fail(ErrorCode::ZeroOnPath, os.str());
  }
}
}  // namespace

std::vector<Complex> LogBranchTracker::start(std::span<const double> x, std::span<const double> imag_hint) const {
  std::vector<Complex> logs;
  logs.reserve(evals_.size());
  for (std::size_t i = 0; i < evals_.size(); ++i) {
    Complex l = evals_[i].principal_log(x);
    require_nonzero(l, x);
    if (!imag_hint.empty()) l.imag(nearest_sheet(l.imag(), imag_hint[i]));
    logs.push_back(l);
  }
  return logs;
}

void LogBranchTracker::advance(std::span<const double> from, std::span<const double> to,
                               std::vector<Complex>& logs) const {
  // Long segments are cut into pieces of length <= 0.5 first; a single long
  // step could wind once around 0 and still land on the nearest sheet.
  double len = 0.0;
  for (std::size_t k = 0; k < from.size(); ++k) len = std::max(len, std::abs(to[k] - from[k]));
  const auto pieces = static_cast<std::size_t>(std::ceil(len / 0.5));
  if (pieces <= 1) {
    for (std::size_t i = 0; i < evals_.size(); ++i) advance_factor(i, from, to, logs[i], 0);
    return;
  }
  std::vector<double> a(from.begin(), from.end()), b(from.size());
  for (std::size_t p = 1; p <= pieces; ++p) {
    const double w = static_cast<double>(p) / static_cast<double>(pieces);
    for (std::size_t k = 0; k < from.size(); ++k) b[k] = from[k] + w * (to[k] - from[k]);
    for (std::size_t i = 0; i < evals_.size(); ++i) advance_factor(i, a, b, logs[i], 0);
    a = b;
  }
}

void LogBranchTracker::advance_factor(std::size_t i, std::span<const double> from, std::span<const double> to,
                                      Complex& log, int depth) const {
  Complex l = evals_[i].principal_log(to);
  require_nonzero(l, to);
  const double im = nearest_sheet(l.imag(), log.imag());
  if (std::abs(im - log.imag()) < 0.5 * kPi) {
    log = Complex(l.real(), im);
    return;
  }
  if (depth > 48) fail(ErrorCode::ZeroOnPath, "branch tracking could not resolve the argument along the path");
  std::vector<double> mid(from.size());
  for (std::size_t k = 0; k < from.size(); ++k) mid[k] = 0.5 * (from[k] + to[k]);
  advance_factor(i, from, mid, log, depth + 1);
  advance_factor(i, mid, to, log, depth + 1);
}

std::vector<Complex> eval_log_branch(const FactorList& fs, std::span<const double> x, std::span<const double> theta,
                                     std::span<const double> anchor) {
  const std::size_t n = fs.n_vars();
  if (x.size() != n || anchor.size() != n) fail(ErrorCode::DimensionMismatch, "eval_log_branch dimensions");
  LogBranchTracker tracker(fs, theta);
  std::vector<double> cur(anchor.begin(), anchor.end());
  auto logs = tracker.start(cur);
  for (std::size_t k = 0; k < n; ++k) {
    std::vector<double> next = cur;
    next[k] = x[k];
    tracker.advance(cur, next, logs);
    cur = std::move(next);
  }
  return logs;
}

}  // namespace emgkz
