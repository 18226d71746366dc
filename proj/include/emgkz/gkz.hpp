#pragma once

#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "emgkz/coamoeba.hpp"
#include "emgkz/emquad.hpp"

namespace emgkz {

// Cayley matrix of f_1..f_m: m indicator rows on top of the exponent rows.
// Columns run factor by factor, each support in cayley_order.
struct CayleySystem {
  IntMatrix a;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> col_index;  // (factor, term) -> column
  std::vector<std::size_t> factor_of;                                  // per column
  std::vector<IVector> exponents;                                      // per column
  CVector beta;  // -(t, s); empty until parameters are attached
  std::size_t n_vars = 0;
  std::size_t n_factors = 0;

  std::size_t columns() const { return a.cols(); }
  std::size_t rows() const { return a.rows(); }
  CVector coefficients(const FactorList& fs) const;
  FactorList factors_with(const CVector& c) const;
};

CayleySystem cayley_matrix(const FactorList& fs);
CayleySystem cayley_matrix(const FactorList& fs, const CVector& s, const CVector& t);

// c -> F(c), an analytic germ in the coefficients.
using Germ = std::function<Complex(const CVector&)>;

// Phi^theta(s,t,c) through the continuation engine. theta is checked against
// the coamoeba once, at c0; node evaluations near c0 skip the check. With one
// variable the arc holding theta is followed as the roots move.
Germ phi_germ(const CayleySystem& sys, std::vector<double> theta, CVector s, CVector t, const CVector& c0,
              double tol = 1e-10);

struct CauchyOptions {
  int nodes = 32;             // per circle
  double radius = 0.05;       // relative to |c_j|
  unsigned jobs = 1;
};

// d^k F / dc^k at c0 (k a multi-index), by the trapezoidal rule on the
// product of circles around the coordinates with k_j > 0. The half grid gives
// the error estimate; DerivativeUnstable when the two disagree.
Complex cauchy_derivative(const Germ& f, const CVector& c0, const std::vector<int>& k, const CauchyOptions& opt = {},
                          double* error = nullptr);

// |sum_j a_ij c_j dF/dc_j - beta_i F| / (1 + |F|), row i counted from 0
double euler_residual(const CayleySystem& sys, const Germ& f, const CVector& c0, std::size_t i,
                      const CauchyOptions& opt = {});
// every row, sharing one gradient
std::vector<double> euler_residuals(const CayleySystem& sys, const Germ& f, const CVector& c0,
                                    const CauchyOptions& opt = {});
// |(d^u+ - d^u-) F| / (1 + max of the two)
double box_residual(const CayleySystem& sys, const Germ& f, const CVector& c0, const IVector& u,
                    const CauchyOptions& opt = {});

// B = [A_K^-1 A_J ; -I] D in the rows of the block columns K and the rest J.
// For one factor this is the dual matrix with a_0 the (negated) row of the
// first block column and A_I the translated exponent block.
struct GaleData {
  IntMatrix b;                      // r x (r - m - n), rows in column order of A
  std::vector<std::int64_t> d;      // diagonal of D
  std::vector<std::size_t> block;   // K, lexicographically first nonsingular
  std::vector<std::size_t> rest;    // J
  IVector a0;                       // m = 1 only: B(K_0, .) = -a0 (already scaled by D)
  IntMatrix a_one;                  // m = 1: n x n block, otherwise the square block of A
  IntMatrix a_two;
  std::int64_t block_det = 1;
  std::int64_t g_a = 1;
  std::int64_t g_b = 1;

  std::size_t dim() const { return b.cols(); }
};

GaleData gale_dual(const CayleySystem& sys);

struct EMMBReport {
  Complex mb = 0.0;   // g_B L^theta
  Complex em = 0.0;   // (2 pi i)^d e^{-i<s,theta>} Gamma(t) g_A M
  CVector gamma;
  double residual = 0.0;
};

// Both sides of the Mellin-Barnes / Euler-Mellin identity for one factor.
// gamma_J = -0.05 on the non-block columns, the block part solved from A gamma = beta.
EMMBReport em_mb_check(const CayleySystem& sys, const GaleData& gale, const CVector& c, const std::vector<double>& theta,
                       const CVector& s, const CVector& t, double tol = 1e-10);

// Numerical rank of the Taylor coefficients (orders <= 2 in each c_j) of the
// germs at c0, singular value cutoff 1e-6 sigma_max. `nodes` per circle.
std::size_t independence_rank(const std::vector<Germ>& germs, const CVector& c0, int nodes = 8, unsigned jobs = 1,
                              std::vector<double>* singular_values = nullptr);

struct ResonanceReport {
  bool totally_nonresonant = true;
  std::size_t hyperplanes = 0;   // distinct hyperplanes spanned by columns
  IVector normal;                // first hyperplane hit
  IVector shift;                 // k with <normal, beta + k> = 0, |k| <= bound; empty if none that small
  std::int64_t bound = 0;
};

// beta + Z^{m+n} against every hyperplane spanned by m+n-1 columns of A.
// The verdict is exact (divisibility of <normal, beta> by the content of the
// normal); the bound only limits the search for a witness shift.
ResonanceReport total_nonresonance(const CayleySystem& sys, const CVector& beta, std::int64_t search_bound);
bool total_nonresonance_check(const CayleySystem& sys, const CVector& beta, std::int64_t search_bound);

}  // namespace emgkz
