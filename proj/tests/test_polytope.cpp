#include <algorithm>
#include <random>
#include <set>

#include "doctest.h"
#include "emgkz/error.hpp"
#include "emgkz/laurent.hpp"
#include "emgkz/polytope.hpp"

using namespace emgkz;

namespace {

std::vector<IVector> random_points(std::mt19937_64& rng, std::size_t n, std::size_t k, int lo, int hi) {
  std::uniform_int_distribution<int> e(lo, hi);
  std::set<IVector> pts;
  while (pts.size() < k) {
    IVector p(n);
    for (auto& x : p) x = e(rng);
    pts.insert(p);
  }
  return {pts.begin(), pts.end()};
}

IVector sub(const IVector& a, const IVector& b) {
  IVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

// Brute-force facets of a full-dimensional set: every primitive normal of a
// hyperplane through n affinely independent points that supports the set.
std::vector<HalfSpace> brute_facets(const std::vector<IVector>& pts) {
  const std::size_t n = pts.front().size();
  std::set<IVector> normals;
  for_each_subset(pts.size(), n, [&](std::span<const std::size_t> idx) {
    IVector nrm;
    if (n == 1) {
      nrm = {1};
    } else if (n == 2) {
      const IVector d = sub(pts[idx[1]], pts[idx[0]]);
      nrm = {-d[1], d[0]};
    } else {
      const IVector a = sub(pts[idx[1]], pts[idx[0]]), b = sub(pts[idx[2]], pts[idx[0]]);
      nrm = {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
    }
    if (std::all_of(nrm.begin(), nrm.end(), [](auto x) { return x == 0; })) return;
    nrm = primitive(nrm);
    for (int sign : {1, -1}) {
      IVector v = nrm;
      for (auto& x : v) x *= sign;
      std::int64_t lo = dot(v, pts[idx[0]]);
      bool supports = true;
      for (const auto& p : pts) supports = supports && dot(v, p) >= lo;
      if (!supports) continue;
      std::vector<IVector> face;
      for (const auto& p : pts)
        if (dot(v, p) == lo) face.push_back(p);
      if (affine_dimension(face) == n - 1) normals.insert(v);
    }
  });
  std::vector<HalfSpace> out;
  for (const auto& v : normals) {
    std::int64_t lo = dot(v, pts.front());
    for (const auto& p : pts) lo = std::min(lo, dot(v, p));
    out.push_back({v, lo});
  }
  return out;
}

LaurentPoly poly_on(const std::vector<IVector>& pts, std::size_t n) {
  LaurentPoly p(n);
  double c = 1.0;
  for (const auto& a : pts) p.add_term(a, c += 0.25);
  return p;
}

}  // namespace

TEST_CASE("unit square facets") {
  const auto f = hull_facets({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  const std::vector<HalfSpace> want{{{-1, 0}, -1}, {{0, -1}, -1}, {{0, 1}, 0}, {{1, 0}, 0}};
  CHECK(f == want);
  CHECK(lattice_volume({{0, 0}, {1, 0}, {0, 1}, {1, 1}}) == 2);
  CHECK(hull_vertices({{0, 0}, {1, 0}, {2, 0}, {0, 1}}).size() == 3);
}

TEST_CASE("hull facets agree with brute force enumeration") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t n = 1 + trial % 3;
    auto pts = random_points(rng, n, std::min<std::size_t>(n == 1 ? 5 : 12, n + 1 + trial % 8), -2, 2);
    if (affine_dimension(pts) < n) continue;
    CHECK(hull_facets(pts) == brute_facets(pts));
  }
}

TEST_CASE("lower dimensional hulls") {
  const std::vector<IVector> seg{{0, 0}, {1, 1}, {2, 2}};
  CHECK(affine_dimension(seg) == 1);
  const auto f = hull_facets(seg);
  REQUIRE(f.size() == 2);
  for (const auto& h : f) CHECK(h.normal[0] == h.normal[1]);
  CHECK(primitive({4, -6}) == IVector{2, -3});
}

TEST_CASE("interval [0,4] from the four term quartic") {
  const LaurentPoly f(1, {{{0}, 1.0}, {{1}, 1.0}, {{3}, 1.0}, {{4}, 1.0}});
  const NewtonData nd = newton_facets(FactorList({f}));
  REQUIRE(nd.size() == 2);
  CHECK(nd.facets[0].mu == IVector{-1});
  CHECK(nd.facets[0].nu == IVector{-4});
  CHECK(nd.facets[1].mu == IVector{1});
  CHECK(nd.facets[1].nu == IVector{0});
  CHECK(is_full_dimensional(nd));
}

TEST_CASE("newton facets come from the Minkowski sum with per factor offsets") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto p1 = random_points(rng, n, n + 1, -1, 2), p2 = random_points(rng, n, 2 + trial % 3, -1, 1);
    const LaurentPoly f = poly_on(p1, n), g = poly_on(p2, n);
    const FactorList fs({f, g});
    const NewtonData nd = newton_facets(fs);
    const auto prod = support(f * g);
    if (affine_dimension(prod) < n) {
      CHECK_FALSE(is_full_dimensional(nd));
      continue;
    }
    const auto want = brute_facets(prod);
    REQUIRE(nd.size() == want.size());
    for (std::size_t k = 0; k < nd.size(); ++k) {
      CHECK(nd.facets[k].mu == want[k].normal);
      CHECK(nd.facets[k].nu_sum == want[k].offset);
      CHECK(nd.facets[k].nu[0] == face_offset(f, nd.facets[k].mu));
      CHECK(nd.facets[k].nu[1] == face_offset(g, nd.facets[k].mu));
    }
  }
}

TEST_CASE("facets of a degenerate support") {
  const LaurentPoly f(2, {{{0, 0}, 1.0}, {{1, 1}, 1.0}});
  CHECK_FALSE(is_full_dimensional(newton_facets(FactorList({f}))));
}

TEST_CASE("margin shift identity is exact") {
  std::mt19937_64 rng(303);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto pts = random_points(rng, n, n + 2, -1, 2);
    if (affine_dimension(pts) < n) continue;
    const LaurentPoly f = poly_on(pts, n);
    const FactorList fs({f});
    const NewtonData nd = newton_facets(fs);
    std::vector<double> sigma(n), tau{u(rng)};
    for (auto& x : sigma) x = u(rng);
    for (std::size_t k = 0; k < nd.size(); ++k)
      for (const auto& a : pts) {
        const std::int64_t d = distance_d(nd, k, a);
        REQUIRE(d >= 0);
        // d = 0 exactly on the facet
        CHECK((d == 0) == (dot(nd.facets[k].mu, a) == nd.facets[k].nu_sum));
        std::vector<double> s2(sigma);
        for (std::size_t i = 0; i < n; ++i) s2[i] += double(a[i]);
        std::vector<double> t2{tau[0] + 1.0};
        CHECK(margin(nd, k, s2, t2) - margin(nd, k, sigma, tau) == doctest::Approx(double(d)).epsilon(1e-12));
      }
  }
}

TEST_CASE("numerical semigroups against brute force") {
  CHECK(semigroup_up_to({3, 4}, 10) == std::set<std::int64_t>{0, 3, 4, 6, 7, 8, 9, 10});
  CHECK(semigroup_up_to({}, 10) == std::set<std::int64_t>{0});
  for (const std::set<std::int64_t>& gens : {std::set<std::int64_t>{5, 7}, {2, 9}, {4, 6, 9}}) {
    std::set<std::int64_t> want;
    for (std::int64_t a = 0; a <= 30; ++a)
      for (std::int64_t b = 0; b <= 30; ++b)
        for (std::int64_t c = 0; c <= 30; ++c) {
          auto it = gens.begin();
          std::int64_t v = a * *it++;
          v += b * *it++;
          if (it != gens.end()) v += c * *it;
          if (v <= 30) want.insert(v);
        }
    CHECK(semigroup_up_to(gens, 30) == want);
  }
}

TEST_CASE("pole semigroup of the quartic") {
  const LaurentPoly f(1, {{{0}, 1.0}, {{3}, 1.0}, {{4}, 1.0}});
  const NewtonData nd = newton_facets(FactorList({f}));
  // facet mu = 1 at 0: distances 3, 4
  const auto g = pole_semigroup(nd, 1, support(f), 10);
  CHECK(g == std::set<std::int64_t>{0, 3, 4, 6, 7, 8, 9, 10});
  CHECK(step_distance(nd, 1, {{3}, {4}}) == 3);
}
