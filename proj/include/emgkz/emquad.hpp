#pragma once

#include <vector>

#include "emgkz/laurent.hpp"

namespace emgkz {

struct EMProblem {
  FactorList factors;
  std::vector<double> theta;
  CVector s;
  CVector t;
  std::vector<double> anchor;       // empty means the origin
  std::vector<double> branch_hint;  // optional Im log f_i at the anchor; the nearest sheet is used
  bool verify_theta = true;         // run completely_nonvanishing_at (n <= 2)

  std::size_t n_vars() const { return factors.n_vars(); }
  void validate() const;
};

struct QuadratureReport {
  Complex value = 0.0;
  double abs_error_estimate = 0.0;
  double truncation_radius = 0.0;
  std::size_t cells_evaluated = 0;
};

// e^{i<s,theta>} int_{R^n} e^{<s,x>} prod f_i(e^{x+i theta})^{-t_i} dx
QuadratureReport em_integral(const EMProblem& p, double tol);

// Radius of the box |x - anchor|_inf <= R outside of which the integrand is
// below tol relative to its size at the anchor.
double truncation_radius(const EMProblem& p, double tol);

// Gamma((T^-1 s)_1) ... Gamma((T^-1 s)_n) Gamma(t - |T^-1 s|) / (|det T| Gamma(t)),
// the integral of 1 + z^{T_1} + ... + z^{T_n} for the columns T_j of T.
Complex simplex_closed_form(const IntMatrix& T, const CVector& s, Complex t);

// int_{(iR)^d} prod Gamma(-gamma_i - <b_i, w>) exp((gamma_i + <b_i, w>) log_c_i) dw
// with b_i the rows of B. log_c carries the chosen arguments (not reduced).
struct MBProblem {
  IntMatrix b;
  CVector gamma;
  CVector log_c;
};

QuadratureReport mb_integral(const MBProblem& p, double tol);

}  // namespace emgkz
