#pragma once

#include <map>
#include <span>
#include <vector>

#include "emgkz/numeric.hpp"

namespace emgkz {

using Exponent = IVector;

inline constexpr std::size_t kMaxProductTerms = 100000;

// Sparse Laurent polynomial sum c_a z^a with complex coefficients.
// Zero coefficients are never stored.
class LaurentPoly {
 public:
  using TermMap = std::map<Exponent, Complex>;

  explicit LaurentPoly(std::size_t n_vars = 0) : n_vars_(n_vars) {}
  LaurentPoly(std::size_t n_vars, const std::vector<std::pair<Exponent, Complex>>& terms);

  static LaurentPoly constant(std::size_t n_vars, Complex c);
  static LaurentPoly monomial(Exponent e, Complex c);

  std::size_t n_vars() const { return n_vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  Complex coefficient(const Exponent& e) const;

  void add_term(const Exponent& e, Complex c);

  std::vector<Exponent> support() const;
  Complex evaluate(std::span<const Complex> z) const;

  LaurentPoly operator*(const LaurentPoly& other) const;
  LaurentPoly operator+(const LaurentPoly& other) const;
  LaurentPoly scaled(Complex c) const;

 private:
  std::size_t n_vars_;
  TermMap terms_;
};

// f_1 ... f_m sharing the same number of variables.
class FactorList {
 public:
  FactorList() = default;
  explicit FactorList(std::vector<LaurentPoly> factors);

  std::size_t size() const { return factors_.size(); }
  std::size_t n_vars() const { return factors_.front().n_vars(); }
  const LaurentPoly& operator[](std::size_t i) const { return factors_[i]; }
  const std::vector<LaurentPoly>& factors() const { return factors_; }
  auto begin() const { return factors_.begin(); }
  auto end() const { return factors_.end(); }

 private:
  std::vector<LaurentPoly> factors_;
};

std::int64_t dot(std::span<const std::int64_t> a, std::span<const std::int64_t> b);

std::vector<Exponent> support(const LaurentPoly& p);
// Support compared from the last coordinate: 1, z1, z2, z1 z2, ... This is
// the column order of the Cayley matrix and of the order map.
std::vector<Exponent> cayley_order(const LaurentPoly& p);
LaurentPoly product(const FactorList& fs);

// Minimum of <mu, a> over supp(p).
std::int64_t face_offset(const LaurentPoly& p, std::span<const std::int64_t> mu);

// Terms with <mu,a> = nu; nu must equal the minimum over the support.
LaurentPoly truncate_to_face(const LaurentPoly& p, std::span<const std::int64_t> mu, std::int64_t nu);

// d/dl (l^{-nu} p(l^mu z)) at l = 1, i.e. sum (<mu,a> - nu) c_a z^a.
LaurentPoly face_derivative(const LaurentPoly& p, std::span<const std::int64_t> mu, std::int64_t nu);

// ---------------------------------------------------------------------------
// Continuous logarithms of f_i(e^{x + i theta})
// ---------------------------------------------------------------------------

// Precomputed form of one factor for fast log evaluation along Arg^{-1}(theta).
class LogEvaluator {
 public:
  LogEvaluator(const LaurentPoly& f, std::span<const double> theta);

  // Principal log f(e^{x+i theta}) computed in log-sum-exp form (no overflow).
  Complex principal_log(std::span<const double> x) const;
  std::size_t n_vars() const { return n_; }

 private:
  std::size_t n_;
  std::vector<double> exps_;  // row-major terms x n
  std::vector<double> log_abs_;
  std::vector<double> phase_;
};

// Tracks a continuous branch of log f_i along straight segments, bisecting
// until consecutive values differ in argument by less than pi/2.
class LogBranchTracker {
 public:
  LogBranchTracker(const FactorList& fs, std::span<const double> theta);

  std::size_t factors() const { return evals_.size(); }

  // Principal logs at x, optionally shifted to the sheet nearest `hint`.
  std::vector<Complex> start(std::span<const double> x, std::span<const double> imag_hint = {}) const;

  // Continues `logs` (valid at `from`) to `to`. Throws ZeroOnPath.
  void advance(std::span<const double> from, std::span<const double> to, std::vector<Complex>& logs) const;

 private:
  void advance_factor(std::size_t i, std::span<const double> from, std::span<const double> to, Complex& log,
                      int depth) const;
  std::vector<LogEvaluator> evals_;
};

// One continuous log f_i(e^{x+i theta}) per factor along the axis-ordered path
// anchor -> x; the branch is principal at the anchor.
std::vector<Complex> eval_log_branch(const FactorList& fs, std::span<const double> x, std::span<const double> theta,
                                     std::span<const double> anchor);

}  // namespace emgkz
