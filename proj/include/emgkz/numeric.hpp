#pragma once

#include <complex>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "emgkz/error.hpp"

namespace emgkz {

using Complex = std::complex<double>;
using CVector = std::vector<Complex>;
using IVector = std::vector<std::int64_t>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Throws NonFiniteValue when z is NaN or infinite.
Complex require_finite(Complex z, const char* where);

// Checked 64-bit arithmetic. Overflow aborts with IntegerOverflow.
std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

// ---------------------------------------------------------------------------
// Gamma family
// ---------------------------------------------------------------------------

// Principal branch of log Gamma, continuous on C \ (-inf, 0].
Complex log_gamma(Complex z);
Complex complex_gamma(Complex z);
// Entire; exactly zero at 0, -1, -2, ...
Complex reciprocal_gamma(Complex z);
// Pochhammer symbol (a)_k for k >= 0.
Complex pochhammer(Complex a, int k);

// Gauss series 2F1(a, b; c; z) summed directly; requires |z| < 1.
Complex hyp2f1_series(Complex a, Complex b, Complex c, Complex z, double tol = 1e-16);

// ---------------------------------------------------------------------------
// Exact integer matrices
// ---------------------------------------------------------------------------

class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);
  static IntMatrix from_rows(const std::vector<IVector>& rows, std::size_t cols);
  static IntMatrix from_columns(const std::vector<IVector>& cols, std::size_t rows);
  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  std::int64_t operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  IVector row(std::size_t r) const;
  IVector column(std::size_t c) const;
  IntMatrix transpose() const;
  IntMatrix select_columns(std::span<const std::size_t> idx) const;
  IntMatrix select_rows(std::span<const std::size_t> idx) const;
  IVector multiply(std::span<const std::int64_t> v) const;

  bool operator==(const IntMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> data_;
};

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b);

// Fraction-free (Bareiss) determinant of a square matrix.
std::int64_t determinant(const IntMatrix& m);
std::size_t rank(const IntMatrix& m);

// Saturated basis of {u in Z^cols : M u = 0}; every vector is verified exactly.
std::vector<IVector> integer_kernel(const IntMatrix& m);

// Basis of the lattice spanned by a set of integer vectors (rows of the
// returned list are independent).
std::vector<IVector> lattice_basis(const std::vector<IVector>& generators);

// gcd of all maximal minors; throws RankDeficient if rank < min(rows, cols).
std::int64_t gcd_maximal_minors(const IntMatrix& m);

// Normalized volume of the column configuration of A. The first row must be
// all ones and the affine hull of the remaining rows must have dimension <= 3.
std::int64_t normalized_volume(const IntMatrix& a);

// Calls fn(indices) for every k-subset of {0..n-1}, in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t n, std::size_t k, Fn&& fn) {
  if (k > n) return;
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  while (true) {
    fn(std::span<const std::size_t>(idx));
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

}  // namespace emgkz
