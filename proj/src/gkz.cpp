#include "emgkz/gkz.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <exception>
#include <set>
#include <sstream>
#include <thread>

#include "emgkz/continuation.hpp"
#include "emgkz/polytope.hpp"

namespace emgkz {

namespace {

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// F at every node, in node order. Workers take interleaved indices; the
// first failure in index order is reported.
CVector evaluate_all(const Germ& f, const std::vector<CVector>& nodes, unsigned jobs) {
  CVector out(nodes.size());
  std::vector<std::exception_ptr> errs(nodes.size());
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < nodes.size(); i += stride) {
      try {
        out[i] = f(nodes[i]);
      } catch (...) {
        errs[i] = std::current_exception();
      }
    }
  };
  const std::size_t w = std::max<std::size_t>(1, std::min<std::size_t>(jobs, nodes.size()));
  if (w == 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < w; ++i) pool.emplace_back(work, i, w);
    for (auto& th : pool) th.join();
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (errs[i]) {
      try {
        std::rethrow_exception(errs[i]);
      } catch (const Error& e) {
        fail(ErrorCode::DerivativeUnstable, std::string("germ failed at a Cauchy node: ") + e.what());
      }
    }
    if (!std::isfinite(out[i].real()) || !std::isfinite(out[i].imag()))
      fail(ErrorCode::DerivativeUnstable, "germ is not finite at a Cauchy node");
  }
  return out;
}

// Samples of F on the product of circles c_j + rho_j e^{2 pi i l / N} over `vars`,
// nodes enumerated with the last variable fastest.
struct CircleGrid {
  std::vector<std::size_t> vars;
  std::vector<double> rho;
  int n = 0;
  CVector values;

  std::size_t size() const {
    std::size_t s = 1;
    for (std::size_t i = 0; i < vars.size(); ++i) s *= static_cast<std::size_t>(n);
    return s;
  }
};

CircleGrid sample_grid(const Germ& f, const CVector& c0, std::vector<std::size_t> vars, double radius, int n,
                       unsigned jobs) {
  CircleGrid g;
  g.vars = std::move(vars);
  g.n = n;
  for (auto j : g.vars) {
    const double a = std::abs(c0[j]);
    if (!(a > 0.0)) fail(ErrorCode::DerivativeUnstable, "Cauchy circle around a zero coefficient");
    g.rho.push_back(radius * a);
  }
  const std::size_t total = g.size();
  std::vector<CVector> nodes;
  nodes.reserve(total);
  std::vector<int> idx(g.vars.size(), 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    CVector c = c0;
    for (std::size_t q = 0; q < g.vars.size(); ++q)
      c[g.vars[q]] += g.rho[q] * std::polar(1.0, 2.0 * kPi * idx[q] / n);
    nodes.push_back(std::move(c));
    for (std::size_t q = g.vars.size(); q-- > 0;) {
      if (++idx[q] < n) break;
      idx[q] = 0;
    }
  }
  g.values = evaluate_all(f, nodes, jobs);
  return g;
}

// (1/N'^p) sum F e^{-i<k, phi>} over the subgrid with step `stride`: the
// Fourier coefficient of order k, i.e. the Taylor coefficient times rho^k.
Complex grid_coefficient(const CircleGrid& g, const std::vector<int>& k, int stride) {
  const std::size_t p = g.vars.size();
  const int m = g.n / stride;
  std::vector<int> idx(p, 0);
  Complex sum = 0.0;
  std::size_t count = 0;
  while (true) {
    std::size_t flat = 0;
    double phase = 0.0;
    for (std::size_t q = 0; q < p; ++q) {
      flat = flat * static_cast<std::size_t>(g.n) + static_cast<std::size_t>(idx[q] * stride);
      phase += static_cast<double>(k[q]) * idx[q] / m;
    }
    sum += g.values[flat] * std::polar(1.0, -2.0 * kPi * phase);
    ++count;
    std::size_t q = p;
    while (q > 0) {
      if (++idx[q - 1] < m) break;
      idx[q - 1] = 0;
      --q;
    }
    if (q == 0) break;
  }
  return sum / static_cast<double>(count);
}

EMProblem problem_at(const CayleySystem& sys, const CVector& c, const std::vector<double>& theta) {
  EMProblem p;
  p.factors = sys.factors_with(c);
  p.theta = theta;
  return p;
}

void require_beta(const CayleySystem& sys) {
  if (sys.beta.size() != sys.rows()) fail(ErrorCode::DimensionMismatch, "system has no homogeneity parameter attached");
}

}  // namespace

CVector CayleySystem::coefficients(const FactorList& fs) const {
  if (fs.size() != n_factors) fail(ErrorCode::DimensionMismatch, "wrong number of factors");
  CVector c(columns());
  for (std::size_t j = 0; j < columns(); ++j) c[j] = fs[factor_of[j]].coefficient(exponents[j]);
  return c;
}

FactorList CayleySystem::factors_with(const CVector& c) const {
  if (c.size() != columns()) fail(ErrorCode::DimensionMismatch, "one coefficient per column expected");
  std::vector<LaurentPoly> out(n_factors, LaurentPoly(n_vars));
  for (std::size_t j = 0; j < columns(); ++j) {
    if (c[j] == 0.0) fail(ErrorCode::EmptySupport, "zero coefficient on a column of A");
    out[factor_of[j]].add_term(exponents[j], require_finite(c[j], "coefficient"));
  }
  return FactorList(std::move(out));
}

CayleySystem cayley_matrix(const FactorList& fs) {
  if (fs.size() == 0) fail(ErrorCode::EmptySupport, "no factors");
  CayleySystem sys;
  sys.n_vars = fs.n_vars();
  sys.n_factors = fs.size();
  for (std::size_t i = 0; i < fs.size(); ++i) {
    if (fs[i].is_zero()) fail(ErrorCode::EmptySupport, "factor with empty support");
    std::size_t j = 0;
    for (const auto& e : cayley_order(fs[i])) {
      sys.col_index[{i, j++}] = sys.exponents.size();
      sys.exponents.push_back(e);
      sys.factor_of.push_back(i);
    }
  }
  const std::size_t m = sys.n_factors, n = sys.n_vars;
  sys.a = IntMatrix(m + n, sys.exponents.size());
  for (std::size_t col = 0; col < sys.exponents.size(); ++col) {
    sys.a(sys.factor_of[col], col) = 1;
    for (std::size_t k = 0; k < n; ++k) sys.a(m + k, col) = sys.exponents[col][k];
  }
  return sys;
}

CayleySystem cayley_matrix(const FactorList& fs, const CVector& s, const CVector& t) {
  CayleySystem sys = cayley_matrix(fs);
  if (s.size() != sys.n_vars || t.size() != sys.n_factors) fail(ErrorCode::DimensionMismatch, "(s,t) has wrong length");
  for (auto x : t) sys.beta.push_back(-x);
  for (auto x : s) sys.beta.push_back(-x);
  return sys;
}

Germ phi_germ(const CayleySystem& sys, std::vector<double> theta, CVector s, CVector t, const CVector& c0, double tol) {
  // validates theta and the parameters once
  (void)eval_phi(continue_to(problem_at(sys, c0, theta), s, t), s, t, tol);
  if (sys.n_vars == 1) {
    // Roots move with c, so theta is re-chosen at each node: the midpoint of
    // the arc nearest to the midpoint of the arc holding theta at c0.
    const ComponentAtlas base = univariate_components(sys.factors_with(c0)[0]);
    const int label = base.label_at(TorusPoint(theta));
    if (label < 0) fail(ErrorCode::BranchTrackingFailed, "theta lies on the coamoeba");
    const double mid = base.arcs[static_cast<std::size_t>(label)].representative;
    return [sys, mid, s = std::move(s), t = std::move(t), tol](const CVector& c) {
      const FactorList fs = sys.factors_with(c);
      const ComponentAtlas at = univariate_components(fs[0]);
      double best = HUGE_VAL, rep = mid;
      for (const auto& arc : at.arcs) {
        const double dist = std::abs(angle_diff(arc.representative, mid));
        if (dist < best) {
          best = dist;
          rep = arc.representative;
        }
      }
      EMProblem p = problem_at(sys, c, {rep});
      p.verify_theta = false;
      return eval_phi(continue_to(p, s, t), s, t, tol);
    };
  }
  return [sys, theta = std::move(theta), s = std::move(s), t = std::move(t), tol](const CVector& c) {
    EMProblem p = problem_at(sys, c, theta);
    p.verify_theta = false;
    return eval_phi(continue_to(p, s, t), s, t, tol);
  };
}

Complex cauchy_derivative(const Germ& f, const CVector& c0, const std::vector<int>& k, const CauchyOptions& opt,
                          double* error) {
  if (k.size() != c0.size()) fail(ErrorCode::DimensionMismatch, "derivative order has wrong length");
  if (opt.nodes < 4 || opt.nodes % 2) fail(ErrorCode::DimensionMismatch, "Cauchy rule needs an even node count >= 4");
  std::vector<std::size_t> vars;
  std::vector<int> orders;
  for (std::size_t j = 0; j < k.size(); ++j) {
    if (k[j] < 0) fail(ErrorCode::DimensionMismatch, "negative derivative order");
    if (k[j] > 0) {
      vars.push_back(j);
      orders.push_back(k[j]);
    }
  }
  if (vars.empty()) {
    if (error) *error = 0.0;
    return evaluate_all(f, {c0}, 1)[0];
  }
  const CircleGrid g = sample_grid(f, c0, vars, opt.radius, opt.nodes, opt.jobs);
  double weight = 1.0;
  for (std::size_t q = 0; q < vars.size(); ++q) weight *= factorial(orders[q]) / std::pow(g.rho[q], orders[q]);
  const Complex full = weight * grid_coefficient(g, orders, 1);
  const Complex half = weight * grid_coefficient(g, orders, 2);
  double fmax = 0.0;
  for (auto v : g.values) fmax = std::max(fmax, std::abs(v));
  const double err = std::abs(full - half);
  if (error) *error = err;
  if (err > 1e-6 * (std::abs(full) + weight * fmax)) {
    std::ostringstream os;
    os << "half-grid estimate differs by " << err << " from " << std::abs(full);
    fail(ErrorCode::DerivativeUnstable, os.str());
  }
  return full;
}

double euler_residual(const CayleySystem& sys, const Germ& f, const CVector& c0, std::size_t i,
                      const CauchyOptions& opt) {
  require_beta(sys);
  if (i >= sys.rows()) fail(ErrorCode::DimensionMismatch, "Euler operator index out of range");
  if (c0.size() != sys.columns()) fail(ErrorCode::DimensionMismatch, "one coefficient per column expected");
  const Complex value = cauchy_derivative(f, c0, std::vector<int>(c0.size(), 0), opt);
  Complex sum = 0.0;
  for (std::size_t j = 0; j < sys.columns(); ++j) {
    if (sys.a(i, j) == 0) continue;
    std::vector<int> k(c0.size(), 0);
    k[j] = 1;
    sum += static_cast<double>(sys.a(i, j)) * c0[j] * cauchy_derivative(f, c0, k, opt);
  }
  return std::abs(sum - sys.beta[i] * value) / (1.0 + std::abs(value));
}

std::vector<double> euler_residuals(const CayleySystem& sys, const Germ& f, const CVector& c0,
                                    const CauchyOptions& opt) {
  require_beta(sys);
  if (c0.size() != sys.columns()) fail(ErrorCode::DimensionMismatch, "one coefficient per column expected");
  const Complex value = cauchy_derivative(f, c0, std::vector<int>(c0.size(), 0), opt);
  CVector grad(c0.size());
  for (std::size_t j = 0; j < c0.size(); ++j) {
    std::vector<int> k(c0.size(), 0);
    k[j] = 1;
    grad[j] = cauchy_derivative(f, c0, k, opt);
  }
  std::vector<double> out;
  for (std::size_t i = 0; i < sys.rows(); ++i) {
    Complex sum = 0.0;
    for (std::size_t j = 0; j < sys.columns(); ++j) sum += static_cast<double>(sys.a(i, j)) * c0[j] * grad[j];
    out.push_back(std::abs(sum - sys.beta[i] * value) / (1.0 + std::abs(value)));
  }
  return out;
}

double box_residual(const CayleySystem& sys, const Germ& f, const CVector& c0, const IVector& u,
                    const CauchyOptions& opt) {
  if (u.size() != sys.columns() || c0.size() != sys.columns())
    fail(ErrorCode::DimensionMismatch, "one entry per column expected");
  for (auto x : sys.a.multiply(u))
    if (x != 0) fail(ErrorCode::DimensionMismatch, "u is not in the kernel of A");
  std::vector<int> plus(u.size(), 0), minus(u.size(), 0);
  bool zero = true;
  for (std::size_t j = 0; j < u.size(); ++j) {
    if (u[j] > 0) plus[j] = static_cast<int>(u[j]);
    if (u[j] < 0) minus[j] = static_cast<int>(-u[j]);
    zero = zero && u[j] == 0;
  }
  if (zero) return 0.0;
  const Complex dp = cauchy_derivative(f, c0, plus, opt);
  const Complex dm = cauchy_derivative(f, c0, minus, opt);
  return std::abs(dp - dm) / (1.0 + std::max(std::abs(dp), std::abs(dm)));
}

GaleData gale_dual(const CayleySystem& sys) {
  const IntMatrix& a = sys.a;
  const std::size_t rows = a.rows(), r = a.cols();
  if (r < rows) fail(ErrorCode::NoNonsingularBlock, "fewer columns than rows");
  GaleData g;
  bool found = false;
  for_each_subset(r, rows, [&](std::span<const std::size_t> idx) {
    if (found) return;
    const IntMatrix block = a.select_columns(idx);
    const std::int64_t det = determinant(block);
    if (det != 0) {
      found = true;
      g.block.assign(idx.begin(), idx.end());
      g.block_det = det;
    }
  });
  if (!found) fail(ErrorCode::NoNonsingularBlock, "A has no nonsingular maximal block");
  for (std::size_t j = 0; j < r; ++j)
    if (std::find(g.block.begin(), g.block.end(), j) == g.block.end()) g.rest.push_back(j);

  const IntMatrix ak = a.select_columns(g.block);
  const std::size_t k = g.rest.size();
  g.b = IntMatrix(r, k);
  g.d.assign(k, 1);
  for (std::size_t q = 0; q < k; ++q) {
    // Cramer: A_K x = a_j with x = num / det
    const IVector aj = a.column(g.rest[q]);
    IVector num(rows);
    std::int64_t content = g.block_det;
    for (std::size_t i = 0; i < rows; ++i) {
      IntMatrix m = ak;
      for (std::size_t p = 0; p < rows; ++p) m(p, i) = aj[p];
      num[i] = determinant(m);
      content = gcd(content, num[i]);
    }
    content = std::abs(content);
    std::int64_t dq = std::abs(g.block_det) / content;
    const std::int64_t sgn = g.block_det > 0 ? 1 : -1;
    g.d[q] = dq;
    for (std::size_t i = 0; i < rows; ++i) g.b(g.block[i], q) = sgn * num[i] / content;
    g.b(g.rest[q], q) = -dq;
  }

  // exact checks
  const IntMatrix ab = multiply(a, g.b);
  for (std::size_t i = 0; i < ab.rows(); ++i)
    for (std::size_t j = 0; j < ab.cols(); ++j)
      if (ab(i, j) != 0) fail(ErrorCode::DegenerateConfiguration, "A B != 0");
  g.g_a = gcd_maximal_minors(a);
  g.g_b = k == 0 ? 1 : gcd_maximal_minors(g.b);
  std::int64_t det_d = 1;
  for (auto x : g.d) det_d = checked_mul(det_d, x);
  if (checked_mul(g.g_b, std::abs(g.block_det)) != checked_mul(g.g_a, det_d))
    fail(ErrorCode::DegenerateConfiguration, "g_B |det A_I| != g_A |det D|");

  if (sys.n_factors == 1) {
    const std::size_t base = g.block.front(), n = sys.n_vars;
    g.a0 = g.b.row(base);
    for (auto& x : g.a0) x = -x;
    g.a_one = IntMatrix(n, n);
    g.a_two = IntMatrix(n, k);
    for (std::size_t i = 0; i < n; ++i) {
      const std::int64_t shift = sys.exponents[base][i];
      for (std::size_t q = 0; q < n; ++q) g.a_one(i, q) = sys.exponents[g.block[q + 1]][i] - shift;
      for (std::size_t q = 0; q < k; ++q) g.a_two(i, q) = sys.exponents[g.rest[q]][i] - shift;
    }
  } else {
    g.a_one = ak;
    g.a_two = a.select_columns(g.rest);
  }
  return g;
}

EMMBReport em_mb_check(const CayleySystem& sys, const GaleData& gale, const CVector& c, const std::vector<double>& theta,
                       const CVector& s, const CVector& t, double tol) {
  if (sys.n_factors != 1) fail(ErrorCode::DimensionMismatch, "the bridge is implemented for one factor");
  if (gale.dim() == 0) fail(ErrorCode::DegenerateConfiguration, "empty dual matrix: needs r > n + 1");
  if (s.size() != sys.n_vars || t.size() != 1 || theta.size() != sys.n_vars)
    fail(ErrorCode::DimensionMismatch, "(s,t,theta) has wrong length");
  const FactorList fs = sys.factors_with(c);
  if (lopsided_membership(fs[0], TorusPoint(theta)))
    fail(ErrorCode::LopsidedMembership, "theta lies in the closed lopsided coamoeba");

  const std::size_t r = sys.columns(), rows = sys.rows();
  CVector beta{-t[0]};
  for (auto x : s) beta.push_back(-x);
  EMMBReport rep;
  rep.gamma.assign(r, 0.0);
  Eigen::MatrixXcd ak(rows, rows);
  Eigen::VectorXcd rhs(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    rhs(i) = beta[i];
    for (std::size_t q = 0; q < rows; ++q) ak(i, q) = static_cast<double>(sys.a(i, gale.block[q]));
    for (auto j : gale.rest) rhs(i) -= static_cast<double>(sys.a(i, j)) * -0.05;
  }
  for (auto j : gale.rest) rep.gamma[j] = -0.05;
  const Eigen::VectorXcd gk = ak.partialPivLu().solve(rhs);
  for (std::size_t q = 0; q < rows; ++q) rep.gamma[gale.block[q]] = gk(q);
  for (const auto& g : rep.gamma)
    if (!(g.real() < 0.0)) fail(ErrorCode::ConvergenceConditionViolated, "gamma has a component with Re >= 0");

  MBProblem mb{gale.b, rep.gamma, {}};
  for (std::size_t j = 0; j < r; ++j) {
    double ph = std::arg(c[j]);
    for (std::size_t i = 0; i < sys.n_vars; ++i) ph += static_cast<double>(sys.exponents[j][i]) * theta[i];
    mb.log_c.push_back(Complex(std::log(std::abs(c[j])), ph));
  }
  rep.mb = static_cast<double>(gale.g_b) * mb_integral(mb, tol).value;

  EMProblem p = problem_at(sys, c, theta);
  p.s = s;
  p.t = t;
  const Complex m = em_integral(p, tol).value;
  Complex phase = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) phase += s[i] * theta[i];
  const Complex two_pi_i(0.0, 2.0 * kPi);
  rep.em = std::pow(two_pi_i, static_cast<int>(gale.dim())) * std::exp(-Complex(0.0, 1.0) * phase) *
           complex_gamma(t[0]) * static_cast<double>(gale.g_a) * m;
  rep.residual = std::abs(rep.mb - rep.em) / std::abs(rep.em);
  return rep;
}

std::size_t independence_rank(const std::vector<Germ>& germs, const CVector& c0, int nodes, unsigned jobs,
                              std::vector<double>* singular_values) {
  if (germs.empty()) return 0;
  const std::size_t r = c0.size();
  if (nodes < 6) fail(ErrorCode::DimensionMismatch, "at least 6 nodes per circle for second-order coefficients");
  double total = 1.0;
  for (std::size_t j = 0; j < r; ++j) total *= nodes;
  if (total > 2e6) fail(ErrorCode::DegenerateConfiguration, "Taylor grid too large");
  std::vector<std::size_t> vars(r);
  for (std::size_t j = 0; j < r; ++j) vars[j] = j;

  std::vector<std::vector<int>> orders;
  std::vector<int> k(r, 0);
  while (true) {
    orders.push_back(k);
    std::size_t q = r;
    while (q > 0) {
      if (++k[q - 1] <= 2) break;
      k[q - 1] = 0;
      --q;
    }
    if (q == 0) break;
  }

  Eigen::MatrixXcd mat(germs.size(), orders.size());
  for (std::size_t g = 0; g < germs.size(); ++g) {
    const CircleGrid grid = sample_grid(germs[g], c0, vars, 0.05, nodes, jobs);
    for (std::size_t o = 0; o < orders.size(); ++o) mat(g, o) = grid_coefficient(grid, orders[o], 1);
    const double norm = mat.row(g).norm();
    if (!(norm > 0.0)) fail(ErrorCode::DerivativeUnstable, "germ vanishes on the Taylor grid");
    mat.row(g) /= norm;
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat);
  const auto& sv = svd.singularValues();
  if (singular_values) singular_values->assign(sv.data(), sv.data() + sv.size());
  std::size_t rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > 1e-6 * sv(0)) ++rank;
  return rank;
}

ResonanceReport total_nonresonance(const CayleySystem& sys, const CVector& beta, std::int64_t search_bound) {
  const IntMatrix& a = sys.a;
  const std::size_t d = a.rows();
  if (beta.size() != d) fail(ErrorCode::DimensionMismatch, "beta needs one entry per row of A");
  if (search_bound < 1) fail(ErrorCode::DimensionMismatch, "search bound must be at least 1");
  ResonanceReport rep;
  rep.bound = search_bound;

  std::set<IVector> normals;
  for_each_subset(a.cols(), d - 1, [&](std::span<const std::size_t> idx) {
    const IntMatrix m = a.select_columns(idx);
    IVector nrm(d);
    for (std::size_t i = 0; i < d; ++i) {
      std::vector<std::size_t> keep;
      for (std::size_t p = 0; p < d; ++p)
        if (p != i) keep.push_back(p);
      const std::int64_t minor = determinant(m.select_rows(keep));
      nrm[i] = (i % 2 ? -minor : minor);
    }
    if (std::all_of(nrm.begin(), nrm.end(), [](std::int64_t x) { return x == 0; })) return;
    nrm = primitive(nrm);
    for (auto x : nrm)
      if (x != 0) {
        if (x < 0)
          for (auto& y : nrm) y = -y;
        break;
      }
    normals.insert(nrm);
  });
  rep.hyperplanes = normals.size();

  for (const auto& nrm : normals) {
    Complex v = 0.0;
    for (std::size_t i = 0; i < d; ++i) v += static_cast<double>(nrm[i]) * beta[i];
    // nrm is primitive, so <nrm, Z^d> = Z
    if (std::abs(v.imag()) > 1e-9 || std::abs(v.real() - std::round(v.real())) > 1e-9) continue;
    rep.totally_nonresonant = false;
    rep.normal = nrm;
    const std::int64_t target = -static_cast<std::int64_t>(std::llround(v.real()));
    double cells = 1.0;
    for (std::size_t i = 0; i < d; ++i) cells *= static_cast<double>(2 * search_bound + 1);
    if (cells <= 1e7) {
      IVector kk(d, -search_bound);
      while (true) {
        if (dot(nrm, kk) == target) {
          rep.shift = kk;
          break;
        }
        std::size_t q = d;
        while (q > 0) {
          if (++kk[q - 1] <= search_bound) break;
          kk[q - 1] = -search_bound;
          --q;
        }
        if (q == 0) break;
      }
    }
    break;
  }
  return rep;
}

bool total_nonresonance_check(const CayleySystem& sys, const CVector& beta, std::int64_t search_bound) {
  return total_nonresonance(sys, beta, search_bound).totally_nonresonant;
}

}  // namespace emgkz
