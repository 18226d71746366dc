#include "emgkz/numeric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "emgkz/polytope.hpp"

namespace emgkz {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::PoleAtNonpositiveInteger: return "PoleAtNonpositiveInteger";
    case ErrorCode::BranchCutHit: return "BranchCutHit";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::IntegerOverflow: return "IntegerOverflow";
    case ErrorCode::NonFiniteValue: return "NonFiniteValue";
    case ErrorCode::NotAFaceOffset: return "NotAFaceOffset";
    case ErrorCode::ZeroOnPath: return "ZeroOnPath";
    case ErrorCode::TermCountExceeded: return "TermCountExceeded";
    case ErrorCode::EmptySupport: return "EmptySupport";
    case ErrorCode::NumericallyCoincidentRoots: return "NumericallyCoincidentRoots";
    case ErrorCode::ResolutionTooCoarse: return "ResolutionTooCoarse";
    case ErrorCode::Inconclusive: return "Inconclusive";
    case ErrorCode::OnBoundary: return "OnBoundary";
    case ErrorCode::NotInConvergenceDomain: return "NotInConvergenceDomain";
    case ErrorCode::BranchTrackingFailed: return "BranchTrackingFailed";
    case ErrorCode::ToleranceNotReached: return "ToleranceNotReached";
    case ErrorCode::SingularT: return "SingularT";
    case ErrorCode::GammaPole: return "GammaPole";
    case ErrorCode::ConvergenceConditionViolated: return "ConvergenceConditionViolated";
    case ErrorCode::PoleOnContour: return "PoleOnContour";
    case ErrorCode::NotFullDimensional: return "NotFullDimensional";
    case ErrorCode::TermBudgetExceeded: return "TermBudgetExceeded";
    case ErrorCode::PoleHit: return "PoleHit";
    case ErrorCode::TermIntegralDiverged: return "TermIntegralDiverged";
    case ErrorCode::LimitUnstable: return "LimitUnstable";
    case ErrorCode::DerivativeUnstable: return "DerivativeUnstable";
    case ErrorCode::NoNonsingularBlock: return "NoNonsingularBlock";
    case ErrorCode::LopsidedMembership: return "LopsidedMembership";
    case ErrorCode::SchemaError: return "SchemaError";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
  }
  return "UnknownError";
}

Complex require_finite(Complex z, const char* where) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    fail(ErrorCode::NonFiniteValue, std::string("non-finite value in ") + where);
  }
  return z;
}

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) fail(ErrorCode::IntegerOverflow, "integer addition overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) fail(ErrorCode::IntegerOverflow, "integer multiplication overflow");
  return r;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  return checked_mul(std::abs(a) / gcd(a, b), std::abs(b));
}

// ---------------------------------------------------------------------------
// Gamma
// ---------------------------------------------------------------------------

namespace {

// B_{2k} / (2k (2k-1)), k = 1..10
constexpr double kStirling[] = {
    1.0 / 12.0,           -1.0 / 360.0,          1.0 / 1260.0,        -1.0 / 1680.0,
    1.0 / 1188.0,         -691.0 / 360360.0,     1.0 / 156.0,         -3617.0 / 122400.0,
    43867.0 / 244188.0,   -174611.0 / 125400.0,
};

constexpr double kStirlingShift = 16.0;

Complex stirling_log_gamma(Complex z) {
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex series = 0.0;
  Complex p = inv;
  for (double c : kStirling) {
    series += c * p;
    p *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * std::log(2.0 * kPi) + series;
}

// sin(pi z) with the integer part of Re z removed first, so that the result
// keeps full relative precision next to the zeros.
Complex sin_pi(Complex z) {
  const double n = std::round(z.real());
  const Complex r(z.real() - n, z.imag());
  Complex v = std::sin(kPi * r);
  if (std::fmod(std::abs(n), 2.0) == 1.0) v = -v;
  return v;
}

bool near_nonpositive_integer(Complex z, double tol) {
  const double n = std::round(z.real());
  return n <= 0.0 && std::abs(z - Complex(n, 0.0)) < tol;
}

}  // namespace

Complex log_gamma(Complex z) {
  require_finite(z, "log_gamma");
  if (z.imag() == 0.0 && z.real() <= 0.0) {
    std::ostringstream os;
    os << "log_gamma evaluated on the branch cut at " << z.real();
    fail(ErrorCode::BranchCutHit, os.str());
  }
  Complex shift = 0.0;
  Complex w = z;
  while (w.real() < kStirlingShift) {
    shift += std::log(w);
    w += 1.0;
  }
  return stirling_log_gamma(w) - shift;
}

Complex complex_gamma(Complex z) {
  require_finite(z, "complex_gamma");
  if (near_nonpositive_integer(z, 1e-12)) {
    std::ostringstream os;
    os << "Gamma pole at " << z;
    fail(ErrorCode::PoleAtNonpositiveInteger, os.str());
  }
  if (z.real() >= 0.5) return std::exp(log_gamma(z));
  return kPi / (sin_pi(z) * std::exp(log_gamma(1.0 - z)));
}

Complex reciprocal_gamma(Complex z) {
  require_finite(z, "reciprocal_gamma");
  if (z.imag() == 0.0 && z.real() <= 0.0 && z.real() == std::round(z.real())) return 0.0;
  if (z.real() >= 0.5) return std::exp(-log_gamma(z));
  return sin_pi(z) * std::exp(log_gamma(1.0 - z)) / kPi;
}

Complex pochhammer(Complex a, int k) {
  Complex r = 1.0;
  for (int i = 0; i < k; ++i) r *= a + static_cast<double>(i);
  return r;
}

Complex hyp2f1_series(Complex a, Complex b, Complex c, Complex z, double tol) {
  if (std::abs(z) >= 1.0) fail(ErrorCode::NotInConvergenceDomain, "hyp2f1_series needs |z| < 1");
  Complex sum = 1.0;
  Complex term = 1.0;
  int quiet = 0;
  for (int k = 0; k < 200000; ++k) {
    const double kd = k;
    term *= (a + kd) * (b + kd) / ((c + kd) * (kd + 1.0)) * z;
    sum += term;
    if (std::abs(term) <= tol * std::abs(sum)) {
      if (++quiet >= 3) return sum;
    } else {
      quiet = 0;
    }
  }
  fail(ErrorCode::ToleranceNotReached, "hyp2f1_series did not converge");
}

// ---------------------------------------------------------------------------
// IntMatrix
// ---------------------------------------------------------------------------

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) fail(ErrorCode::DimensionMismatch, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::from_rows(const std::vector<IVector>& rows, std::size_t cols) {
  IntMatrix m(rows.size(), cols);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) fail(ErrorCode::DimensionMismatch, "row length mismatch");
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

IntMatrix IntMatrix::from_columns(const std::vector<IVector>& cols, std::size_t rows) {
  IntMatrix m(rows, cols.size());
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j].size() != rows) fail(ErrorCode::DimensionMismatch, "column length mismatch");
    for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
  }
  return m;
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IVector IntMatrix::row(std::size_t r) const {
  return IVector(data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
                 data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_));
}

IVector IntMatrix::column(std::size_t c) const {
  IVector v(rows_);
  for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, c);
  return v;
}

IntMatrix IntMatrix::transpose() const {
  IntMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

IntMatrix IntMatrix::select_columns(std::span<const std::size_t> idx) const {
  IntMatrix m(rows_, idx.size());
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) m(i, j) = (*this)(i, idx[j]);
  return m;
}

IntMatrix IntMatrix::select_rows(std::span<const std::size_t> idx) const {
  IntMatrix m(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j) m(i, j) = (*this)(idx[i], j);
  return m;
}

IVector IntMatrix::multiply(std::span<const std::int64_t> v) const {
  if (v.size() != cols_) fail(ErrorCode::DimensionMismatch, "matrix-vector size mismatch");
  IVector out(rows_, 0);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) out[i] = checked_add(out[i], checked_mul((*this)(i, j), v[j]));
  return out;
}

IntMatrix multiply(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) fail(ErrorCode::DimensionMismatch, "matrix product size mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s = checked_add(s, checked_mul(a(i, k), b(k, j)));
      c(i, j) = s;
    }
  return c;
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) fail(ErrorCode::DimensionMismatch, "determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  std::vector<__int128> a(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) a[i * n + j] = m(i, j);
  auto at = [&](std::size_t i, std::size_t j) -> __int128& { return a[i * n + j]; };
  __int128 prev = 1;
  int sign = 1;
  const __int128 limit = static_cast<__int128>(std::numeric_limits<std::int64_t>::max());
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (at(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && at(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(at(k, j), at(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        at(i, j) = (at(i, j) * at(k, k) - at(i, k) * at(k, j)) / prev;
        if (at(i, j) > limit || at(i, j) < -limit) fail(ErrorCode::IntegerOverflow, "determinant overflow");
      }
      at(i, k) = 0;
    }
    prev = at(k, k);
  }
  return static_cast<std::int64_t>(sign * at(n - 1, n - 1));
}

namespace {

void normalize_row(IVector& r) {
  std::int64_t g = 0;
  for (auto v : r) g = gcd(g, v);
  if (g > 1)
    for (auto& v : r) v /= g;
}

// In-place integer row echelon form over the first `pivot_cols` columns using
// unimodular row operations (extended Euclid). Returns the number of pivots.
std::size_t hermite_rows(std::vector<IVector>& rows, std::size_t pivot_cols) {
  std::size_t lead = 0;
  for (std::size_t c = 0; c < pivot_cols && lead < rows.size(); ++c) {
    // Euclid on column c among rows lead..end until a single nonzero remains.
    while (true) {
      std::size_t best = rows.size();
      for (std::size_t i = lead; i < rows.size(); ++i) {
        if (rows[i][c] != 0 && (best == rows.size() || std::abs(rows[i][c]) < std::abs(rows[best][c]))) best = i;
      }
      if (best == rows.size()) break;
      std::swap(rows[lead], rows[best]);
      bool done = true;
      for (std::size_t i = lead + 1; i < rows.size(); ++i) {
        if (rows[i][c] == 0) continue;
        const std::int64_t q = rows[i][c] / rows[lead][c];
        for (std::size_t j = 0; j < rows[i].size(); ++j)
          rows[i][j] = checked_add(rows[i][j], -checked_mul(q, rows[lead][j]));
        if (rows[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (rows[lead][c] != 0) {
      if (rows[lead][c] < 0)
        for (auto& v : rows[lead]) v = -v;
      ++lead;
    }
  }
  return lead;
}

}  // namespace

std::size_t rank(const IntMatrix& m) {
  std::vector<IVector> rows;
  for (std::size_t i = 0; i < m.rows(); ++i) rows.push_back(m.row(i));
  for (auto& r : rows) normalize_row(r);
  return hermite_rows(rows, m.cols());
}

std::vector<IVector> integer_kernel(const IntMatrix& m) {
  const std::size_t d = m.rows();
  const std::size_t r = m.cols();
  // Augmented rows [M^T | I_r]; after echelonizing the first d columns, rows
  // whose M^T part vanished hold a unimodular - hence saturated - kernel basis.
  std::vector<IVector> rows(r, IVector(d + r, 0));
  for (std::size_t j = 0; j < r; ++j) {
    for (std::size_t i = 0; i < d; ++i) rows[j][i] = m(i, j);
    rows[j][d + j] = 1;
  }
  const std::size_t pivots = hermite_rows(rows, d);
  std::vector<IVector> basis;
  for (std::size_t i = pivots; i < r; ++i) basis.emplace_back(rows[i].begin() + static_cast<std::ptrdiff_t>(d), rows[i].end());

  // Size reduction keeps the entries small; it is unimodular so saturation is kept.
  for (int pass = 0; pass < 8; ++pass) {
    bool changed = false;
    for (std::size_t a = 0; a < basis.size(); ++a)
      for (std::size_t b = 0; b < basis.size(); ++b) {
        if (a == b) continue;
        long double dot = 0, nb = 0;
        for (std::size_t k = 0; k < r; ++k) {
          dot += static_cast<long double>(basis[a][k]) * basis[b][k];
          nb += static_cast<long double>(basis[b][k]) * basis[b][k];
        }
        const auto q = static_cast<std::int64_t>(std::llround(dot / nb));
        if (q == 0) continue;
        IVector cand = basis[a];
        long double na = 0, nc = 0;
        for (std::size_t k = 0; k < r; ++k) {
          cand[k] = checked_add(cand[k], -checked_mul(q, basis[b][k]));
          na += static_cast<long double>(basis[a][k]) * basis[a][k];
          nc += static_cast<long double>(cand[k]) * cand[k];
        }
        if (nc < na) {
          basis[a] = cand;
          changed = true;
        }
      }
    if (!changed) break;
  }
  for (auto& u : basis) {
    // Canonical sign: first nonzero entry positive.
    auto it = std::find_if(u.begin(), u.end(), [](std::int64_t v) { return v != 0; });
    if (it != u.end() && *it < 0)
      for (auto& v : u) v = -v;
    for (auto v : m.multiply(u))
      if (v != 0) fail(ErrorCode::IntegerOverflow, "kernel verification failed");
  }
  return basis;
}

std::vector<IVector> lattice_basis(const std::vector<IVector>& generators) {
  if (generators.empty()) return {};
  std::vector<IVector> rows = generators;
  const std::size_t pivots = hermite_rows(rows, rows.front().size());
  rows.resize(pivots);
  return rows;
}

std::int64_t gcd_maximal_minors(const IntMatrix& m) {
  const std::size_t k = std::min(m.rows(), m.cols());
  if (rank(m) < k) fail(ErrorCode::RankDeficient, "gcd_maximal_minors needs full rank");
  std::int64_t g = 0;
  if (m.rows() <= m.cols()) {
    for_each_subset(m.cols(), k, [&](std::span<const std::size_t> idx) { g = gcd(g, determinant(m.select_columns(idx))); });
  } else {
    for_each_subset(m.rows(), k, [&](std::span<const std::size_t> idx) { g = gcd(g, determinant(m.select_rows(idx))); });
  }
  return std::abs(g);
}

std::int64_t normalized_volume(const IntMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0) fail(ErrorCode::DegenerateConfiguration, "empty configuration");
  for (std::size_t j = 0; j < a.cols(); ++j)
    if (a(0, j) != 1) fail(ErrorCode::DegenerateConfiguration, "first row of A must be all ones");
  if (rank(a) != a.rows()) fail(ErrorCode::DegenerateConfiguration, "A does not have full row rank");
  std::vector<IVector> pts;
  for (std::size_t j = 0; j < a.cols(); ++j) {
    IVector p(a.rows() - 1);
    for (std::size_t i = 1; i < a.rows(); ++i) p[i - 1] = a(i, j);
    pts.push_back(std::move(p));
  }
  return lattice_volume(pts);
}

}  // namespace emgkz
