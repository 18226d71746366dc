#include "emgkz/emquad.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emgkz/coamoeba.hpp"
#include "emgkz/polytope.hpp"

namespace emgkz {

namespace {

constexpr double kInitialStep = 0.25;
constexpr std::size_t kMaxNodes = 6'000'000;

struct GridSums {
  Complex fine = 0.0;
  Complex coarse = 0.0;
  double boundary_face = 0.0;  // |integrand| summed over the outer faces with face weights
  std::size_t nodes = 0;
};

// Trapezoid rule in u after x_d = center_d + sinh(u_d) on every axis, nodes
// u = k h with |k| <= K. Nodes are visited by walking outward from the center
// axis by axis so that `Walker` can carry state (a log branch) along the path.
// Both the rule with step h and the one with step 2h are accumulated.
template <class Walker>
GridSums walk_grid(Walker& walker, const std::vector<double>& center, double h, std::size_t kmax) {
  using State = typename Walker::State;
  const std::size_t n = center.size();
  GridSums sums;
  std::vector<double> x = center;
  std::vector<std::int64_t> idx(n, 0);
  const double coarse_scale = std::ldexp(1.0, static_cast<int>(n));
  const double edge_weight = h * std::cosh(static_cast<double>(kmax) * h);

  auto rec = [&](auto&& self, std::size_t d, const State& st, double w) -> void {
    if (d == n) {
      const Complex v = std::exp(walker.log_value(st, x));
      ++sums.nodes;
      const Complex wv = w * v;
      sums.fine += wv;
      bool even = true, edge = false;
      for (auto k : idx) {
        if (k % 2 != 0) even = false;
        if (static_cast<std::size_t>(std::abs(k)) == kmax) edge = true;
      }
      if (even) sums.coarse += coarse_scale * wv;
      if (edge) sums.boundary_face += std::abs(w * v) / edge_weight;
      return;
    }
    self(self, d + 1, st, w * h);
    for (int sign : {1, -1}) {
      State cur = st;
      double prev = center[d];
      for (std::size_t k = 1; k <= kmax; ++k) {
        const double u = static_cast<double>(k) * h;
        const double xk = center[d] + sign * std::sinh(u);
        std::vector<double> from = x;
        from[d] = prev;
        x[d] = xk;
        walker.advance(cur, from, x);
        idx[d] = sign * static_cast<std::int64_t>(k);
        self(self, d + 1, cur, w * h * std::cosh(u));
        prev = xk;
      }
      x[d] = center[d];
      idx[d] = 0;
    }
  };
  rec(rec, 0, walker.start(center), 1.0);
  return sums;
}

// Adaptive driver shared by the Euler-Mellin and Mellin-Barnes rules.
// `decay` is the minimal exponential decay rate of the integrand on the unit
// box, used to bound the tail beyond the truncation box.
template <class Walker>
QuadratureReport adaptive_de(Walker& walker, const std::vector<double>& center, double radius, double decay,
                             double tol) {
  const std::size_t n = center.size();
  QuadratureReport rep;
  for (int widen = 0; widen < 6; ++widen) {
    const double umax = std::asinh(std::max(radius, 1.0));
    double h = kInitialStep;
    Complex value = 0.0;
    double err = HUGE_VAL, prev = HUGE_VAL, boundary = 0.0;
    while (true) {
      const auto kmax = static_cast<std::size_t>(std::ceil(umax / h / 2.0)) * 2;
      if (std::pow(2.0 * static_cast<double>(kmax) + 1.0, static_cast<double>(n)) > static_cast<double>(kMaxNodes))
        break;
      const GridSums g = walk_grid(walker, center, h, kmax);
      rep.cells_evaluated += g.nodes;
      value = g.fine;
      // |fine - coarse| is the error of the coarse rule; once the rule is
      // converging each halving roughly doubles the correct digits
      const double diff = std::abs(g.fine - g.coarse);
      err = std::isfinite(prev) && diff < 0.1 * prev ? diff * diff / prev : diff;
      err = std::max(err, 16 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(value)));
      prev = diff;
      boundary = g.boundary_face;
      if (err <= tol * (1.0 + std::abs(value))) break;
      h *= 0.5;
    }
    if (!std::isfinite(std::abs(value))) fail(ErrorCode::NonFiniteValue, "quadrature produced a non-finite value");
    const double tail = boundary / decay;
    if (tail > 0.1 * tol * (1.0 + std::abs(value))) {
      radius *= 1.5;
      continue;
    }
    rep.value = value;
    rep.abs_error_estimate = err + tail;
    rep.truncation_radius = radius;
    if (err > tol * (1.0 + std::abs(value))) {
      std::ostringstream os;
      os << "error estimate " << err << " above tolerance " << tol << " at the finest admissible grid";
      fail(ErrorCode::ToleranceNotReached, os.str());
    }
    return rep;
  }
  fail(ErrorCode::ToleranceNotReached, "integrand does not decay inside the widened truncation box");
}

// Points of the unit sphere of the sup norm, used to sample linear decay rates.
std::vector<std::vector<double>> box_directions(std::size_t n) {
  std::vector<std::vector<double>> dirs;
  if (n == 0) return dirs;
  const std::size_t m = n == 1 ? 1 : n == 2 ? 64 : n == 3 ? 12 : 4;
  for (std::size_t face = 0; face < n; ++face)
    for (double sgn : {1.0, -1.0}) {
      std::size_t total = 1;
      for (std::size_t i = 0; i + 1 < n; ++i) total *= m + 1;
      for (std::size_t c = 0; c < total; ++c) {
        std::vector<double> u(n);
        std::size_t rest = c;
        for (std::size_t i = 0; i < n; ++i) {
          if (i == face) {
            u[i] = sgn;
            continue;
          }
          const std::size_t j = rest % (m + 1);
          rest /= m + 1;
          u[i] = m == 0 ? 0.0 : -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(m);
        }
        dirs.push_back(std::move(u));
      }
    }
  return dirs;
}

double em_decay_rate(const EMProblem& p) {
  double kmin = HUGE_VAL;
  for (const auto& u : box_directions(p.n_vars())) {
    double k = 0.0;
    for (std::size_t i = 0; i < p.factors.size(); ++i) {
      double hmax = -HUGE_VAL;
      for (const auto& [a, c] : p.factors[i].terms()) {
        double v = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) v += static_cast<double>(a[j]) * u[j];
        hmax = std::max(hmax, v);
      }
      k += p.t[i].real() * hmax;
    }
    for (std::size_t j = 0; j < u.size(); ++j) k -= p.s[j].real() * u[j];
    kmin = std::min(kmin, k);
  }
  return kmin;
}

std::vector<double> anchor_of(const EMProblem& p) {
  return p.anchor.empty() ? std::vector<double>(p.n_vars(), 0.0) : p.anchor;
}

class EMWalker {
 public:
  using State = std::vector<Complex>;

  explicit EMWalker(const EMProblem& p) : p_(p), tracker_(p.factors, p.theta) {
    for (std::size_t j = 0; j < p.n_vars(); ++j) phase_ += Complex(0.0, 1.0) * p.s[j] * p.theta[j];
  }

  State start(const std::vector<double>& x) const {
    try {
      return tracker_.start(x, p_.branch_hint);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroOnPath) fail(ErrorCode::BranchTrackingFailed, e.what());
      throw;
    }
  }

  void advance(State& st, const std::vector<double>& from, const std::vector<double>& to) const {
    try {
      tracker_.advance(from, to, st);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ZeroOnPath) fail(ErrorCode::BranchTrackingFailed, e.what());
      throw;
    }
  }

  Complex log_value(const State& st, const std::vector<double>& x) const {
    Complex e = phase_;
    for (std::size_t j = 0; j < x.size(); ++j) e += p_.s[j] * x[j];
    for (std::size_t i = 0; i < st.size(); ++i) e -= p_.t[i] * st[i];
    return e;
  }

 private:
  const EMProblem& p_;
  LogBranchTracker tracker_;
  Complex phase_ = 0.0;
};

Complex log_gamma_any(Complex z) {
  if (z.imag() == 0.0 && z.real() <= 0.0) return std::log(complex_gamma(z));
  return log_gamma(z);
}

class MBWalker {
 public:
  struct State {};

  explicit MBWalker(const MBProblem& p) : p_(p) {}
  State start(const std::vector<double>&) const { return {}; }
  void advance(State&, const std::vector<double>&, const std::vector<double>&) const {}

  Complex log_value(const State&, const std::vector<double>& y) const {
    Complex e = 0.0;
    for (std::size_t i = 0; i < p_.b.rows(); ++i) {
      double by = 0.0;
      for (std::size_t k = 0; k < p_.b.cols(); ++k) by += static_cast<double>(p_.b(i, k)) * y[k];
      const Complex expo = p_.gamma[i] + Complex(0.0, by);
      e += log_gamma_any(-expo) + expo * p_.log_c[i];
    }
    return e;
  }

 private:
  const MBProblem& p_;
};

}  // namespace

void EMProblem::validate() const {
  if (factors.factors().empty()) fail(ErrorCode::DimensionMismatch, "problem has no factors");
  const std::size_t n = n_vars(), m = factors.size();
  if (theta.size() != n || s.size() != n) fail(ErrorCode::DimensionMismatch, "theta and s need n_vars entries");
  if (t.size() != m) fail(ErrorCode::DimensionMismatch, "t needs one entry per factor");
  if (!anchor.empty() && anchor.size() != n) fail(ErrorCode::DimensionMismatch, "anchor has wrong length");
  if (!branch_hint.empty() && branch_hint.size() != m)
    fail(ErrorCode::DimensionMismatch, "branch hint needs one entry per factor");
  for (auto v : s) require_finite(v, "s");
  for (auto v : t) require_finite(v, "t");
}

double truncation_radius(const EMProblem& p, double tol) {
  p.validate();
  if (tol >= 1.0) return 0.0;
  const double k = em_decay_rate(p);
  if (!(k > 0.0)) fail(ErrorCode::NotInConvergenceDomain, "integrand does not decay in every direction");
  // Size of the integrand at the anchor with the principal branch.
  double log_size = 0.0;
  try {
    EMWalker w(p);
    const auto a = anchor_of(p);
    log_size = std::max(0.0, w.log_value(w.start(a), a).real());
  } catch (const Error&) {
  }
  return (std::log(1.0 / tol) + log_size) / k;
}

QuadratureReport em_integral(const EMProblem& p, double tol) {
  p.validate();
  if (!(tol > 0.0)) fail(ErrorCode::ToleranceNotReached, "tolerance must be positive");
  for (auto v : p.t)
    if (!(v.real() > 0.0)) fail(ErrorCode::NotInConvergenceDomain, "Re t must be positive");
  const NewtonData nd = newton_facets(p.factors);
  std::vector<double> sigma, tau;
  for (auto v : p.s) sigma.push_back(v.real());
  for (auto v : p.t) tau.push_back(v.real());
  for (std::size_t k = 0; k < nd.size(); ++k)
    if (!(margin(nd, k, sigma, tau) > 0.0)) {
      std::ostringstream os;
      os << "margin of facet " << k << " is " << margin(nd, k, sigma, tau);
      fail(ErrorCode::NotInConvergenceDomain, os.str());
    }
  if (!nd.full_dimensional) fail(ErrorCode::NotInConvergenceDomain, "Newton polytope is not full-dimensional");
  if (p.verify_theta && p.n_vars() <= 2) {
    bool ok = true;
    try {
      ok = completely_nonvanishing_at(p.factors, TorusPoint(p.theta));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconclusive) throw;
    }
    if (!ok) fail(ErrorCode::BranchTrackingFailed, "theta lies in the closed coamoeba");
  }

  EMWalker walker(p);
  const double radius = truncation_radius(p, std::min(1e-6, 1e-2 * tol));
  return adaptive_de(walker, anchor_of(p), radius, em_decay_rate(p), tol);
}

Complex simplex_closed_form(const IntMatrix& T, const CVector& s, Complex t) {
  const std::size_t n = T.rows();
  if (T.cols() != n || s.size() != n) fail(ErrorCode::DimensionMismatch, "T must be square and match s");
  const std::int64_t det = determinant(T);
  if (det == 0) fail(ErrorCode::SingularT, "T is singular");
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    rhs(static_cast<Eigen::Index>(i)) = s[i];
    for (std::size_t j = 0; j < n; ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = static_cast<double>(T(i, j));
  }
  const Eigen::VectorXcd y = m.partialPivLu().solve(rhs);
  try {
    Complex v = 1.0, sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v *= complex_gamma(y(static_cast<Eigen::Index>(i)));
      sum += y(static_cast<Eigen::Index>(i));
    }
    v *= complex_gamma(t - sum) * reciprocal_gamma(t);
    return v / static_cast<double>(std::abs(det));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::PoleAtNonpositiveInteger) fail(ErrorCode::GammaPole, e.what());
    throw;
  }
}

QuadratureReport mb_integral(const MBProblem& p, double tol) {
  const std::size_t r = p.b.rows(), d = p.b.cols();
  if (p.gamma.size() != r || p.log_c.size() != r) fail(ErrorCode::DimensionMismatch, "gamma and c need one entry per row of B");
  if (d == 0) fail(ErrorCode::DegenerateConfiguration, "Mellin-Barnes integral over a zero-dimensional contour");
  for (std::size_t i = 0; i < r; ++i) {
    const double re = p.gamma[i].real();
    const bool row_zero = std::all_of(p.b.row(i).begin(), p.b.row(i).end(), [](std::int64_t x) { return x == 0; });
    const double k = std::round(re);
    if (re > -1e-12 && std::abs(re - k) < 1e-12 && (!row_zero || std::abs(p.gamma[i].imag()) < 1e-12))
      fail(ErrorCode::PoleOnContour, "a Gamma pole lies on the imaginary contour");
  }
  std::vector<double> phase(d, 0.0);
  for (std::size_t k = 0; k < d; ++k)
    for (std::size_t i = 0; i < r; ++i) phase[k] += p.log_c[i].imag() * static_cast<double>(p.b(i, k));
  if (!zonotope_contains(Zonotope::from_rows(p.b), phase))
    fail(ErrorCode::ConvergenceConditionViolated, "Arg(c) B is not in the interior of the zonotope");

  // |integrand| ~ |y|^P exp(-k(y)) with k(y) = (pi/2) sum |<b_i,y>| + <Arg(c)B, y>.
  double kmin = HUGE_VAL;
  for (const auto& u : box_directions(d)) {
    double k = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      double bu = 0.0;
      for (std::size_t j = 0; j < d; ++j) bu += static_cast<double>(p.b(i, j)) * u[j];
      k += 0.5 * kPi * std::abs(bu);
    }
    for (std::size_t j = 0; j < d; ++j) k += phase[j] * u[j];
    kmin = std::min(kmin, k);
  }
  if (!(kmin > 0.0)) fail(ErrorCode::ConvergenceConditionViolated, "integrand does not decay in every direction");
  double power = 0.0;
  for (std::size_t i = 0; i < r; ++i) power += std::max(0.0, -p.gamma[i].real() - 0.5);

  MBWalker walker(p);
  const std::vector<double> center(d, 0.0);
  const double log_size = std::max(0.0, walker.log_value({}, center).real());
  const double base = std::log(1.0 / std::min(1e-6, 1e-2 * tol)) + log_size;
  double radius = base / kmin;
  for (int it = 0; it < 8; ++it) radius = (base + power * std::log1p(radius)) / kmin;

  QuadratureReport rep = adaptive_de(walker, center, radius, kmin, tol);
  rep.value *= std::pow(Complex(0.0, 1.0), static_cast<int>(d));
  return rep;
}

}  // namespace emgkz
