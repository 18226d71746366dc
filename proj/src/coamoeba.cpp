#include "emgkz/coamoeba.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "emgkz/polytope.hpp"

namespace emgkz {

namespace {
constexpr double kTwoPi = 2.0 * kPi;
constexpr double kArgMerge = 1e-9;
constexpr double kFiberRange = 12.0;
}  // namespace

double reduce_angle(double a) {
  double r = a - kTwoPi * std::floor((a + kPi) / kTwoPi);
  if (r >= kPi) r -= kTwoPi;
  if (r < -kPi) r += kTwoPi;
  return r;
}

double angle_diff(double a, double b) { return reduce_angle(a - b); }

TorusPoint::TorusPoint(std::vector<double> t) : theta(std::move(t)) {
  for (auto& x : theta) {
    if (!std::isfinite(x)) fail(ErrorCode::NonFiniteValue, "torus point coordinate is not finite");
    x = reduce_angle(x);
  }
}

// ---------------------------------------------------------------------------
// Roots
// ---------------------------------------------------------------------------

CVector polynomial_roots(const CVector& coeffs_in) {
  CVector c = coeffs_in;
  double cmax = 0.0;
  for (auto v : c) cmax = std::max(cmax, std::abs(v));
  if (cmax == 0.0) fail(ErrorCode::DegenerateConfiguration, "roots of the zero polynomial");
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * cmax) c.pop_back();
  // Zero roots carry no argument; they are dropped.
  std::size_t lo = 0;
  while (lo < c.size() && c[lo] == Complex(0.0)) ++lo;
  c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(lo));
  const std::size_t d = c.size() - 1;
  if (d == 0) return {};
  if (d == 1) return {-c[0] / c[1]};
  if (d == 2) {
    const Complex disc = std::sqrt(c[1] * c[1] - 4.0 * c[2] * c[0]);
    const Complex q = -0.5 * (c[1] + (std::real(std::conj(c[1]) * disc) >= 0 ? disc : -disc));
    if (q == Complex(0.0)) return {0.0, 0.0};
    return {q / c[2], c[0] / q};
  }
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
  for (std::size_t i = 1; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
  for (std::size_t i = 0; i < d; ++i) comp(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(d - 1)) = -c[i] / c[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  if (es.info() != Eigen::Success) fail(ErrorCode::NonFiniteValue, "companion eigenvalue solver failed");
  CVector r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = es.eigenvalues()(static_cast<Eigen::Index>(i));
  return r;
}

namespace {

// Distinct arguments of the nonzero roots. Nearby roots (a numerically split
// multiple root) are averaged first; arguments closer than 1e-9 are merged.
std::vector<double> distinct_root_arguments(const CVector& coeffs, bool* merged) {
  CVector roots = polynomial_roots(coeffs);
  std::vector<char> used(roots.size(), 0);
  std::vector<double> args;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    if (used[i] || roots[i] == Complex(0.0)) continue;
    Complex sum = roots[i];
    int cnt = 1;
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (!used[j] && std::abs(roots[j] - roots[i]) < 1e-5 * std::abs(roots[i])) {
        used[j] = 1;
        sum += roots[j];
        ++cnt;
      }
    args.push_back(reduce_angle(std::arg(sum / static_cast<double>(cnt))));
  }
  std::sort(args.begin(), args.end());
  std::vector<double> out;
  for (double a : args) {
    if (!out.empty() && a - out.back() < kArgMerge) {
      if (merged) *merged = true;
      continue;
    }
    out.push_back(a);
  }
  if (out.size() > 1 && out.front() + kTwoPi - out.back() < kArgMerge) {
    if (merged) *merged = true;
    out.pop_back();
  }
  return out;
}

double circular_distance(double a, double b) { return std::abs(angle_diff(a, b)); }

// Terms of a polynomial whose support lies on a line a0 + k d, as a univariate
// polynomial in w = z^d. Returns the direction d.
CVector line_polynomial(const std::vector<std::pair<IVector, Complex>>& terms, IVector& dir) {
  const IVector& a0 = terms.front().first;
  IVector d(a0.size(), 0);
  for (const auto& [a, c] : terms)
    if (a != a0) {
      for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - a0[i];
      break;
    }
  d = primitive(d);
  std::int64_t dd = dot(d, d);
  std::vector<std::pair<std::int64_t, Complex>> ks;
  std::int64_t kmin = 0;
  for (const auto& [a, c] : terms) {
    IVector diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - a0[i];
    const std::int64_t k = dot(diff, d) / dd;
    ks.emplace_back(k, c);
    kmin = std::min(kmin, k);
  }
  std::int64_t kmax = 0;
  for (auto& [k, c] : ks) kmax = std::max(kmax, k - kmin);
  CVector poly(static_cast<std::size_t>(kmax) + 1, 0.0);
  for (auto& [k, c] : ks) poly[static_cast<std::size_t>(k - kmin)] += c;
  dir = d;
  return poly;
}

// Whether the polynomial with support on a line vanishes on Arg^{-1}(theta).
bool line_vanishes(const std::vector<std::pair<IVector, Complex>>& terms, std::span<const double> theta) {
  if (terms.size() < 2) return false;
  IVector d;
  const CVector poly = line_polynomial(terms, d);
  double phase = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) phase += static_cast<double>(d[i]) * theta[i];
  for (double a : distinct_root_arguments(poly, nullptr))
    if (circular_distance(a, phase) <= kArgMerge) return true;
  return false;
}

// f(z) restricted to z_fixed = e^{x + i theta_fixed}, as a polynomial in the
// other variable.
class Fiber {
 public:
  Fiber(const LaurentPoly& f, std::size_t fixed, double theta_fixed) {
    const std::size_t freev = 1 - fixed;
    std::int64_t emin = std::numeric_limits<std::int64_t>::max(), emax = std::numeric_limits<std::int64_t>::min();
    for (const auto& [a, c] : f.terms()) {
      emin = std::min(emin, a[freev]);
      emax = std::max(emax, a[freev]);
    }
    slots_.resize(static_cast<std::size_t>(emax - emin) + 1);
    for (const auto& [a, c] : f.terms()) {
      const Complex phased = c * std::polar(1.0, static_cast<double>(a[fixed]) * theta_fixed);
      slots_[static_cast<std::size_t>(a[freev] - emin)].push_back({static_cast<double>(a[fixed]), phased});
    }
  }

  bool trivial() const { return slots_.size() < 2; }

  CVector coeffs(double x) const {
    CVector c(slots_.size(), 0.0);
    for (std::size_t k = 0; k < slots_.size(); ++k)
      for (const auto& [e, v] : slots_[k]) c[k] += v * std::exp(e * x);
    return c;
  }

  CVector roots(double x) const {
    CVector c = coeffs(x);
    double cmax = 0.0;
    for (auto v : c) cmax = std::max(cmax, std::abs(v));
    if (cmax == 0.0 || !std::isfinite(cmax)) return {};
    for (auto& v : c) v /= cmax;
    return polynomial_roots(c);
  }

 private:
  std::vector<std::vector<std::pair<double, Complex>>> slots_;
};

// Greedy nearest matching in (log modulus, argument).
std::vector<int> match_roots(const CVector& a, const CVector& b) {
  std::vector<int> m(a.size(), -1);
  std::vector<char> used(b.size(), 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    double best = HUGE_VAL;
    int bi = -1;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      const double dist = std::abs(std::log(std::abs(a[i])) - std::log(std::abs(b[j]))) +
                          circular_distance(std::arg(a[i]), std::arg(b[j]));
      if (dist < best) {
        best = dist;
        bi = static_cast<int>(j);
      }
    }
    if (bi >= 0) {
      m[i] = bi;
      used[static_cast<std::size_t>(bi)] = 1;
    }
  }
  return m;
}

// Follows the root arguments of a fiber over x in [-R, R]. `pair(a, b)` is
// called for the arguments of matched roots at consecutive accepted samples,
// `point(a)` for roots that could not be matched.
template <class Pair, class Point>
void trace_fiber(const Fiber& fb, double max_step, Pair&& pair, Point&& point) {
  constexpr int kInitial = 128;
  constexpr int kMaxDepth = 22;
  auto refine = [&](auto&& self, double xa, const CVector& ra, double xb, const CVector& rb, int depth) -> void {
    const auto m = match_roots(ra, rb);
    bool ok = ra.size() == rb.size();
    for (std::size_t i = 0; i < ra.size() && ok; ++i)
      if (m[i] < 0 || circular_distance(std::arg(ra[i]), std::arg(rb[static_cast<std::size_t>(m[i])])) > max_step)
        ok = false;
    if (!ok && depth < kMaxDepth) {
      const double xm = 0.5 * (xa + xb);
      const CVector rm = fb.roots(xm);
      self(self, xa, ra, xm, rm, depth + 1);
      self(self, xm, rm, xb, rb, depth + 1);
      return;
    }
    std::vector<char> hit(rb.size(), 0);
    for (std::size_t i = 0; i < ra.size(); ++i) {
      if (m[i] >= 0) {
        pair(std::arg(ra[i]), std::arg(rb[static_cast<std::size_t>(m[i])]));
        hit[static_cast<std::size_t>(m[i])] = 1;
      } else {
        point(std::arg(ra[i]));
      }
    }
    for (std::size_t j = 0; j < rb.size(); ++j)
      if (!hit[j]) point(std::arg(rb[j]));
  };
  double xa = -kFiberRange;
  CVector ra = fb.roots(xa);
  for (int s = 1; s <= kInitial; ++s) {
    const double xb = -kFiberRange + 2.0 * kFiberRange * s / kInitial;
    CVector rb = fb.roots(xb);
    refine(refine, xa, ra, xb, rb, 0);
    xa = xb;
    ra = std::move(rb);
  }
}

std::size_t pixel_of(double angle, std::size_t res) {
  const double w = kTwoPi / static_cast<double>(res);
  auto i = static_cast<std::int64_t>(std::floor((reduce_angle(angle) + kPi) / w));
  const auto r = static_cast<std::int64_t>(res);
  return static_cast<std::size_t>(((i % r) + r) % r);
}

double pixel_center(std::size_t i, std::size_t res) {
  return -kPi + (static_cast<double>(i) + 0.5) * kTwoPi / static_cast<double>(res);
}

// Marks the pixels along the short arc from a to b in one raster line.
void mark_arc(std::vector<std::uint8_t>& line, double a, double b) {
  const std::size_t res = line.size();
  const double d = angle_diff(b, a);
  const double w = kTwoPi / static_cast<double>(res);
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(d) / w)) + 1;
  for (std::size_t s = 0; s <= steps; ++s) line[pixel_of(a + d * static_cast<double>(s) / steps, res)] = 1;
}

void sweep_line(const LaurentPoly& f, std::size_t fixed, std::size_t index, std::size_t res,
                std::vector<std::uint8_t>& line) {
  Fiber fb(f, fixed, pixel_center(index, res));
  if (fb.trivial()) return;
  trace_fiber(
      fb, 0.5 * kTwoPi / static_cast<double>(res), [&](double a, double b) { mark_arc(line, a, b); },
      [&](double a) { line[pixel_of(a, res)] = 1; });
}

void label_components(ComponentAtlas& at) {
  const std::size_t res = at.resolution;
  const std::size_t npix = res * res;
  // Chessboard distance to the marked set on the torus.
  std::vector<int> dist(npix, std::numeric_limits<int>::max());
  std::deque<std::size_t> q;
  for (std::size_t p = 0; p < npix; ++p)
    if (at.marked[p]) {
      dist[p] = 0;
      q.push_back(p);
    }
  while (!q.empty()) {
    const std::size_t p = q.front();
    q.pop_front();
    const std::size_t i = p / res, j = p % res;
    for (int di = -1; di <= 1; ++di)
      for (int dj = -1; dj <= 1; ++dj) {
        const std::size_t ni = (i + res + static_cast<std::size_t>(di + 1) - 1) % res;
        const std::size_t nj = (j + res + static_cast<std::size_t>(dj + 1) - 1) % res;
        const std::size_t np = ni * res + nj;
        if (dist[np] > dist[p] + 1) {
          dist[np] = dist[p] + 1;
          q.push_back(np);
        }
      }
  }
  at.labels.assign(npix, -1);
  int next = 0;
  for (std::size_t start = 0; start < npix; ++start) {
    if (at.marked[start] || at.labels[start] >= 0) continue;
    Component c;
    c.label = next;
    std::size_t best = start;
    std::vector<std::size_t> stack{start};
    at.labels[start] = next;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++c.pixel_count;
      if (dist[p] > dist[best] || (dist[p] == dist[best] && p < best)) best = p;
      const std::size_t i = p / res, j = p % res;
      const std::size_t nb[4] = {((i + 1) % res) * res + j, ((i + res - 1) % res) * res + j, i * res + (j + 1) % res,
                                 i * res + (j + res - 1) % res};
      for (std::size_t np : nb)
        if (!at.marked[np] && at.labels[np] < 0) {
          at.labels[np] = next;
          stack.push_back(np);
        }
    }
    c.representative = TorusPoint({pixel_center(best / res, res), pixel_center(best % res, res)});
    c.clearance = dist[best];
    c.unreliable = c.clearance < 2;
    at.components.push_back(std::move(c));
    ++next;
  }
}

}  // namespace

int ComponentAtlas::label_at(const TorusPoint& theta) const {
  if (theta.size() != n_vars) fail(ErrorCode::DimensionMismatch, "label_at: wrong torus dimension");
  if (n_vars == 1) {
    const double t = theta[0];
    for (double e : excluded)
      if (circular_distance(t, e) <= kArgMerge) return -1;
    for (std::size_t k = 0; k < arcs.size(); ++k) {
      double u = t;
      while (u < arcs[k].lo) u += kTwoPi;
      if (u < arcs[k].hi) return static_cast<int>(k);
    }
    return -1;
  }
  const std::size_t p = pixel_of(theta[0], resolution) * resolution + pixel_of(theta[1], resolution);
  return labels[p];
}

bool ComponentAtlas::has_unreliable() const {
  return std::any_of(components.begin(), components.end(), [](const Component& c) { return c.unreliable; });
}

ComponentAtlas univariate_components(const LaurentPoly& f) {
  if (f.n_vars() != 1) fail(ErrorCode::DimensionMismatch, "univariate_components needs one variable");
  if (f.size() < 2) fail(ErrorCode::DegenerateConfiguration, "a monomial has an empty coamoeba");
  const std::int64_t lo = f.terms().begin()->first[0];
  const std::int64_t hi = f.terms().rbegin()->first[0];
  CVector poly(static_cast<std::size_t>(hi - lo) + 1, 0.0);
  for (const auto& [a, c] : f.terms()) poly[static_cast<std::size_t>(a[0] - lo)] = c;

  ComponentAtlas at;
  at.n_vars = 1;
  at.excluded = distinct_root_arguments(poly, &at.merged);
  const std::size_t k = at.excluded.size();
  for (std::size_t j = 0; j < k; ++j) {
    Arc arc;
    arc.lo = at.excluded[j];
    arc.hi = j + 1 < k ? at.excluded[j + 1] : at.excluded[0] + kTwoPi;
    arc.representative = reduce_angle(0.5 * (arc.lo + arc.hi));
    at.arcs.push_back(arc);
  }
  return at;
}

ComponentAtlas raster_coamoeba_2d(const LaurentPoly& f, const RasterOptions& opts) {
  if (f.n_vars() != 2) fail(ErrorCode::DimensionMismatch, "raster_coamoeba_2d needs two variables");
  const std::size_t res = opts.resolution;
  if (res < 8) fail(ErrorCode::ResolutionTooCoarse, "raster resolution must be at least 8");
  const unsigned jobs = std::max(1u, opts.jobs);

  // Each worker owns a full bitmap; they are OR-ed in worker order.
  std::vector<std::vector<std::uint8_t>> maps(jobs, std::vector<std::uint8_t>(res * res, 0));
  auto work = [&](unsigned w) {
    auto& m = maps[w];
    std::vector<std::uint8_t> line(res);
    for (std::size_t i = w; i < res; i += jobs) {
      std::fill(line.begin(), line.end(), 0);
      sweep_line(f, 0, i, res, line);
      for (std::size_t j = 0; j < res; ++j) m[i * res + j] |= line[j];
      std::fill(line.begin(), line.end(), 0);
      sweep_line(f, 1, i, res, line);
      for (std::size_t j = 0; j < res; ++j) m[j * res + i] |= line[j];
    }
  };
  if (jobs == 1) {
    work(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned w = 0; w < jobs; ++w) threads.emplace_back(work, w);
    for (auto& t : threads) t.join();
  }

  ComponentAtlas at;
  at.n_vars = 2;
  at.resolution = res;
  at.marked.assign(res * res, 0);
  for (const auto& m : maps)
    for (std::size_t p = 0; p < res * res; ++p) at.marked[p] |= m[p];
  label_components(at);
  return at;
}

// ---------------------------------------------------------------------------

namespace {

bool factor_nonvanishing_2d(const LaurentPoly& f, std::span<const double> theta, std::size_t resolution) {
  std::vector<IVector> supp = f.support();
  const std::size_t dim = affine_dimension(supp);
  std::vector<std::pair<IVector, Complex>> all(f.terms().begin(), f.terms().end());
  if (dim == 0) return true;
  if (dim == 1) return !line_vanishes(all, theta);

  for (const auto& h : hull_facets(supp)) {
    std::vector<std::pair<IVector, Complex>> edge;
    for (const auto& [a, c] : f.terms())
      if (dot(h.normal, a) == h.offset) edge.push_back({a, c});
    if (line_vanishes(edge, theta)) return false;
  }

  const double tol = kPi / static_cast<double>(resolution);
  Fiber fb(f, 0, theta[0]);
  bool crossing = false;
  double closest = HUGE_VAL;
  trace_fiber(
      fb, 0.02,
      [&](double a, double b) {
        const double da = angle_diff(a, theta[1]), db = angle_diff(b, theta[1]);
        closest = std::min({closest, std::abs(da), std::abs(db)});
        if (std::abs(da) < 0.5 * kPi && std::abs(db) < 0.5 * kPi && (da == 0.0 || db == 0.0 || (da < 0) != (db < 0)))
          crossing = true;
      },
      [&](double a) { closest = std::min(closest, std::abs(angle_diff(a, theta[1]))); });
  if (crossing || closest <= kArgMerge) return false;
  if (closest < tol) {
    std::ostringstream os;
    os << "theta = (" << theta[0] << ", " << theta[1] << ") is within " << closest << " of the coamoeba";
    fail(ErrorCode::Inconclusive, os.str());
  }
  return true;
}

}  // namespace

bool completely_nonvanishing_at(const FactorList& fs, const TorusPoint& theta, std::size_t resolution) {
  const std::size_t n = fs.n_vars();
  if (theta.size() != n) fail(ErrorCode::DimensionMismatch, "theta has wrong length");
  if (n > 2) fail(ErrorCode::DimensionMismatch, "complete nonvanishing is decided for n <= 2 only");
  for (const auto& f : fs) {
    if (n == 1) {
      std::vector<std::pair<IVector, Complex>> all(f.terms().begin(), f.terms().end());
      if (line_vanishes(all, theta.theta)) return false;
    } else if (!factor_nonvanishing_2d(f, theta.theta, resolution)) {
      return false;
    }
  }
  return true;
}

bool lopsided_membership(const LaurentPoly& f, const TorusPoint& theta) {
  if (theta.size() != f.n_vars()) fail(ErrorCode::DimensionMismatch, "theta has wrong length");
  std::vector<double> ang;
  for (const auto& [a, c] : f.terms()) {
    double p = std::arg(c);
    for (std::size_t i = 0; i < a.size(); ++i) p += static_cast<double>(a[i]) * theta[i];
    ang.push_back(reduce_angle(p));
  }
  if (ang.size() < 2) return false;
  std::sort(ang.begin(), ang.end());
  double gap = ang.front() + kTwoPi - ang.back();
  for (std::size_t i = 1; i < ang.size(); ++i) gap = std::max(gap, ang[i] - ang[i - 1]);
  return gap <= kPi + 1e-12;
}

std::vector<double> order_map(const FactorList& fs, const TorusPoint& theta, const IntMatrix& b,
                              const std::vector<IVector>& basepoint) {
  if (basepoint.size() != fs.size()) fail(ErrorCode::DimensionMismatch, "one basepoint per factor is required");
  std::vector<double> args;
  for (std::size_t j = 0; j < fs.size(); ++j) {
    const LaurentPoly& f = fs[j];
    if (lopsided_membership(f, theta)) fail(ErrorCode::LopsidedMembership, "theta lies in the lopsided coamoeba");
    const Complex c0 = f.coefficient(basepoint[j]);
    if (c0 == Complex(0.0)) fail(ErrorCode::DegenerateConfiguration, "basepoint is not in the support");
    auto phase = [&](const IVector& a) {
      double p = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) p += static_cast<double>(a[i]) * theta[i];
      return p;
    };
    for (const auto& a : cayley_order(f)) {
      const Complex c = f.coefficient(a);
      const double v = angle_diff(std::arg(c / c0) + phase(a) - phase(basepoint[j]), 0.0);
      const double pv = v == -kPi ? kPi : v;
      if (kPi - std::abs(pv) < 1e-9) fail(ErrorCode::OnBoundary, "a phase ratio is within 1e-9 of pi");
      args.push_back(pv);
    }
  }
  if (b.rows() != args.size()) fail(ErrorCode::DimensionMismatch, "B has the wrong number of rows");
  std::vector<double> v(b.cols(), 0.0);
  for (std::size_t k = 0; k < b.cols(); ++k)
    for (std::size_t r = 0; r < b.rows(); ++r) v[k] += args[r] * static_cast<double>(b(r, k));
  return v;
}

// ---------------------------------------------------------------------------

Zonotope Zonotope::from_rows(const IntMatrix& b) {
  Zonotope z;
  z.dim = b.cols();
  for (std::size_t r = 0; r < b.rows(); ++r) z.generators.push_back(b.row(r));
  return z;
}

namespace {

std::vector<IVector> zonotope_normals(const Zonotope& z) {
  const std::size_t d = z.dim;
  std::set<IVector> out;
  if (d == 1) return {IVector{1}};
  for_each_subset(z.generators.size(), d - 1, [&](std::span<const std::size_t> idx) {
    IVector nrm(d);
    for (std::size_t k = 0; k < d; ++k) {
      IntMatrix m(d - 1, d - 1);
      for (std::size_t r = 0; r < d - 1; ++r)
        for (std::size_t c = 0, cc = 0; c < d; ++c)
          if (c != k) m(r, cc++) = z.generators[idx[r]][c];
      const std::int64_t det = determinant(m);
      nrm[k] = (k % 2 == 0) ? det : -det;
    }
    if (std::all_of(nrm.begin(), nrm.end(), [](std::int64_t x) { return x == 0; })) return;
    nrm = primitive(nrm);
    const auto first = std::find_if(nrm.begin(), nrm.end(), [](std::int64_t x) { return x != 0; });
    if (*first < 0)
      for (auto& x : nrm) x = -x;
    out.insert(nrm);
  });
  return {out.begin(), out.end()};
}

bool full_rank(const Zonotope& z) {
  if (z.generators.empty()) return false;
  return rank(IntMatrix::from_rows(z.generators, z.dim)) == z.dim;
}

}  // namespace

bool zonotope_contains(const Zonotope& z, std::span<const double> p) {
  if (p.size() != z.dim) fail(ErrorCode::DimensionMismatch, "point dimension differs from the zonotope");
  if (!full_rank(z)) return false;
  for (const auto& nrm : zonotope_normals(z)) {
    double np = 0.0, width = 0.0;
    for (std::size_t k = 0; k < z.dim; ++k) np += static_cast<double>(nrm[k]) * p[k];
    for (const auto& g : z.generators) width += std::abs(static_cast<double>(dot(nrm, g)));
    if (!(std::abs(np) < 0.5 * kPi * width * (1.0 - 1e-12))) return false;
  }
  return true;
}

std::vector<std::vector<double>> lattice_points_in_zonotope(const Zonotope& z, std::span<const double> base) {
  if (base.size() != z.dim) fail(ErrorCode::DimensionMismatch, "base dimension differs from the zonotope");
  std::vector<std::vector<double>> out;
  if (!full_rank(z)) return out;
  const auto basis = lattice_basis(z.generators);
  const std::size_t d = z.dim, r = basis.size();
  Eigen::MatrixXd m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(r));
  for (std::size_t j = 0; j < r; ++j)
    for (std::size_t c = 0; c < d; ++c)
      m(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(j)) = kTwoPi * static_cast<double>(basis[j][c]);
  const Eigen::MatrixXd pinv = (m.transpose() * m).inverse() * m.transpose();
  std::vector<double> half(d, 0.0);
  for (const auto& g : z.generators)
    for (std::size_t c = 0; c < d; ++c) half[c] += 0.5 * kPi * std::abs(static_cast<double>(g[c]));

  std::vector<std::int64_t> lo(r), hi(r);
  double count = 1.0;
  for (std::size_t j = 0; j < r; ++j) {
    double center = 0.0, spread = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
      const double pj = pinv(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(c));
      center -= pj * base[c];
      spread += std::abs(pj) * half[c];
    }
    lo[j] = static_cast<std::int64_t>(std::floor(center - spread)) - 1;
    hi[j] = static_cast<std::int64_t>(std::ceil(center + spread)) + 1;
    count *= static_cast<double>(hi[j] - lo[j] + 1);
  }
  if (count > 1e7) fail(ErrorCode::DegenerateConfiguration, "zonotope lattice enumeration is too large");

  std::vector<std::int64_t> k = lo;
  std::vector<double> p(d);
  while (true) {
    for (std::size_t c = 0; c < d; ++c) {
      p[c] = base[c];
      for (std::size_t j = 0; j < r; ++j) p[c] += kTwoPi * static_cast<double>(k[j] * basis[j][c]);
    }
    if (zonotope_contains(z, p)) out.push_back(p);
    std::size_t j = r;
    while (j > 0) {
      --j;
      if (k[j] < hi[j]) {
        ++k[j];
        break;
      }
      k[j] = lo[j];
      if (j == 0) return out;
    }
    if (r == 0) return out;
  }
}

}  // namespace emgkz
