#include "emgkz/polytope.hpp"

#include <algorithm>
#include <array>
#include <cstdlib>
#include <sstream>

namespace emgkz {

namespace {

IVector sub(const IVector& a, const IVector& b) {
  IVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = checked_add(a[i], -b[i]);
  return r;
}

IVector cross(const IVector& a, const IVector& b) {
  return {checked_add(checked_mul(a[1], b[2]), -checked_mul(a[2], b[1])),
          checked_add(checked_mul(a[2], b[0]), -checked_mul(a[0], b[2])),
          checked_add(checked_mul(a[0], b[1]), -checked_mul(a[1], b[0]))};
}

bool is_zero(const IVector& v) {
  return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
}

std::vector<IVector> dedupe(std::vector<IVector> pts) {
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

void check_points(const std::vector<IVector>& pts) {
  if (pts.empty()) fail(ErrorCode::EmptySupport, "empty point set");
  const std::size_t n = pts.front().size();
  for (const auto& p : pts)
    if (p.size() != n) fail(ErrorCode::DimensionMismatch, "points of different lengths");
  if (n > 3) fail(ErrorCode::DegenerateConfiguration, "exact hulls are only available in dimension <= 3");
}

// Keeps mu if every point lies on one side of <mu, x> = <mu, base>; flips it
// to point inward.
void try_normal(IVector mu, const IVector& base, const std::vector<IVector>& pts, std::set<IVector>& out) {
  if (is_zero(mu)) return;
  mu = primitive(std::move(mu));
  const std::int64_t b = dot(mu, base);
  bool pos = false, neg = false;
  for (const auto& p : pts) {
    const std::int64_t v = dot(mu, p) - b;
    if (v > 0) pos = true;
    if (v < 0) neg = true;
    if (pos && neg) return;
  }
  if (!pos && !neg) return;
  if (neg)
    for (auto& x : mu) x = -x;
  out.insert(std::move(mu));
}

// Twice the area of conv(pts) for planar integer points (monotone chain).
std::int64_t area2(std::vector<std::array<std::int64_t, 2>> p) {
  std::sort(p.begin(), p.end());
  p.erase(std::unique(p.begin(), p.end()), p.end());
  if (p.size() < 3) return 0;
  auto turn = [](const auto& o, const auto& a, const auto& b) {
    return checked_add(checked_mul(a[0] - o[0], b[1] - o[1]), -checked_mul(a[1] - o[1], b[0] - o[0]));
  };
  std::vector<std::array<std::int64_t, 2>> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && turn(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && turn(h[k - 2], h[k - 1], p[i]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  std::int64_t s = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const auto& a = h[i];
    const auto& b = h[(i + 1) % h.size()];
    s = checked_add(s, checked_add(checked_mul(a[0], b[1]), -checked_mul(a[1], b[0])));
  }
  return std::abs(s);
}

}  // namespace

IVector primitive(IVector v) {
  std::int64_t g = 0;
  for (auto x : v) g = gcd(g, x);
  if (g > 1)
    for (auto& x : v) x /= g;
  return v;
}

std::size_t affine_dimension(const std::vector<IVector>& pts) {
  check_points(pts);
  std::vector<IVector> diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) diffs.push_back(sub(pts[i], pts[0]));
  if (diffs.empty()) return 0;
  return rank(IntMatrix::from_rows(diffs, pts[0].size()));
}

std::vector<HalfSpace> hull_facets(const std::vector<IVector>& input) {
  check_points(input);
  const auto pts = dedupe(input);
  const std::size_t n = pts.front().size();
  const std::size_t dim = affine_dimension(pts);
  std::set<IVector> normals;

  if (dim == 0) return {};
  if (dim == 1) {
    const auto far = std::find_if(pts.begin(), pts.end(), [&](const IVector& p) { return p != pts[0]; });
    IVector d = primitive(sub(*far, pts[0]));
    normals.insert(d);
    for (auto& x : d) x = -x;
    normals.insert(d);
  } else if (n == 2) {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) {
        const IVector e = sub(pts[j], pts[i]);
        try_normal({-e[1], e[0]}, pts[i], pts, normals);
      }
  } else if (dim == 2) {
    // Planar set in Z^3: in-plane normals N x e.
    IVector plane(3, 0);
    for (std::size_t i = 1; i < pts.size() && is_zero(plane); ++i)
      for (std::size_t j = i + 1; j < pts.size() && is_zero(plane); ++j)
        plane = cross(sub(pts[i], pts[0]), sub(pts[j], pts[0]));
    plane = primitive(plane);
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        try_normal(cross(plane, sub(pts[j], pts[i])), pts[i], pts, normals);
  } else {
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j)
        for (std::size_t k = j + 1; k < pts.size(); ++k)
          try_normal(cross(sub(pts[j], pts[i]), sub(pts[k], pts[i])), pts[i], pts, normals);
  }

  std::vector<HalfSpace> out;
  for (const auto& mu : normals) {
    std::int64_t off = dot(mu, pts[0]);
    for (const auto& p : pts) off = std::min(off, dot(mu, p));
    out.push_back({mu, off});
  }
  return out;
}

std::vector<IVector> hull_vertices(const std::vector<IVector>& input) {
  check_points(input);
  const auto pts = dedupe(input);
  const std::size_t dim = affine_dimension(pts);
  if (dim == 0) return pts;
  const auto facets = hull_facets(pts);
  std::vector<IVector> out;
  for (const auto& p : pts) {
    std::vector<IVector> active;
    for (const auto& h : facets)
      if (dot(h.normal, p) == h.offset) active.push_back(h.normal);
    if (active.size() >= dim && rank(IntMatrix::from_rows(active, p.size())) == dim) out.push_back(p);
  }
  return out;
}

std::int64_t lattice_volume(const std::vector<IVector>& input) {
  check_points(input);
  const auto pts = dedupe(input);
  const std::size_t n = pts.front().size();
  if (n == 0) return 1;
  if (affine_dimension(pts) < n) return 0;
  if (n == 1) return pts.back()[0] - pts.front()[0];
  if (n == 2) {
    std::vector<std::array<std::int64_t, 2>> p;
    for (const auto& x : pts) p.push_back({x[0], x[1]});
    return area2(std::move(p));
  }
  // Pyramids over the facets from pts[0]: height times the facet's area in
  // its own lattice. Projecting along a coordinate c with mu_c != 0 scales
  // that area by |mu_c|.
  std::int64_t vol = 0;
  for (const auto& h : hull_facets(pts)) {
    const std::int64_t height = dot(h.normal, pts[0]) - h.offset;
    if (height == 0) continue;
    std::size_t c = 0;
    while (h.normal[c] == 0) ++c;
    std::vector<std::array<std::int64_t, 2>> proj;
    for (const auto& p : pts)
      if (dot(h.normal, p) == h.offset) {
        std::array<std::int64_t, 2> q{};
        for (std::size_t i = 0, j = 0; i < 3; ++i)
          if (i != c) q[j++] = p[i];
        proj.push_back(q);
      }
    const std::int64_t a = area2(std::move(proj));
    const std::int64_t mc = std::abs(h.normal[c]);
    if (a % mc != 0) fail(ErrorCode::DegenerateConfiguration, "facet area is not a multiple of the projection factor");
    vol = checked_add(vol, checked_mul(height, a / mc));
  }
  return vol;
}

// ---------------------------------------------------------------------------

NewtonData newton_facets(const FactorList& fs) {
  NewtonData nd;
  nd.n_vars = fs.n_vars();
  std::vector<IVector> sum{IVector(nd.n_vars, 0)};
  for (const auto& f : fs) {
    const auto verts = hull_vertices(f.support());
    nd.vertices.push_back(verts);
    std::vector<IVector> next;
    for (const auto& a : sum)
      for (const auto& b : verts) {
        IVector p(nd.n_vars);
        for (std::size_t i = 0; i < nd.n_vars; ++i) p[i] = checked_add(a[i], b[i]);
        next.push_back(std::move(p));
      }
    sum = hull_vertices(next);
  }
  nd.full_dimensional = affine_dimension(sum) == nd.n_vars;
  for (const auto& h : hull_facets(sum)) {
    Facet fc;
    fc.mu = h.normal;
    for (const auto& f : fs) {
      fc.nu.push_back(face_offset(f, fc.mu));
      fc.nu_sum = checked_add(fc.nu_sum, fc.nu.back());
    }
    nd.facets.push_back(std::move(fc));
  }
  return nd;
}

bool is_full_dimensional(const NewtonData& nd) { return nd.full_dimensional; }

namespace {
const Facet& facet_at(const NewtonData& nd, std::size_t k) {
  if (k >= nd.facets.size()) fail(ErrorCode::DimensionMismatch, "facet index out of range");
  return nd.facets[k];
}
}  // namespace

double margin(const NewtonData& nd, std::size_t k, std::span<const double> sigma, std::span<const double> tau) {
  const Facet& f = facet_at(nd, k);
  if (sigma.size() != nd.n_vars || tau.size() != f.nu.size())
    fail(ErrorCode::DimensionMismatch, "margin: sigma or tau has wrong length");
  double v = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) v += static_cast<double>(f.mu[i]) * sigma[i];
  for (std::size_t i = 0; i < tau.size(); ++i) v -= static_cast<double>(f.nu[i]) * tau[i];
  return v;
}

std::int64_t distance_d(const NewtonData& nd, std::size_t k, std::span<const std::int64_t> alpha) {
  const Facet& f = facet_at(nd, k);
  return checked_add(dot(f.mu, alpha), -f.nu_sum);
}

std::int64_t step_distance(const NewtonData& nd, std::size_t k, const std::vector<IVector>& support) {
  if (support.empty()) fail(ErrorCode::EmptySupport, "step distance over an empty support");
  std::int64_t m = distance_d(nd, k, support.front());
  for (const auto& a : support) m = std::min(m, distance_d(nd, k, a));
  return m;
}

std::set<std::int64_t> semigroup_up_to(const std::set<std::int64_t>& generators, std::int64_t bound) {
  std::set<std::int64_t> out;
  if (bound < 0) return out;
  std::vector<char> hit(static_cast<std::size_t>(bound) + 1, 0);
  hit[0] = 1;
  for (std::int64_t v = 0; v <= bound; ++v) {
    if (!hit[v]) continue;
    out.insert(v);
    for (auto g : generators)
      if (g > 0 && v + g <= bound) hit[v + g] = 1;
  }
  return out;
}

std::set<std::int64_t> pole_semigroup(const NewtonData& nd, std::size_t k, const std::vector<IVector>& supp_f,
                                      std::int64_t bound) {
  std::set<std::int64_t> gens;
  for (const auto& a : supp_f) {
    const std::int64_t d = distance_d(nd, k, a);
    if (d > 0) gens.insert(d);
  }
  return semigroup_up_to(gens, bound);
}

}  // namespace emgkz
