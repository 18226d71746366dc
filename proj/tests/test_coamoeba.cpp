#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "emgkz/coamoeba.hpp"
#include "emgkz/error.hpp"

using namespace emgkz;

namespace {

LaurentPoly gauss(Complex c1, Complex c2, Complex c3, Complex c4) {
  return LaurentPoly(2, {{{0, 0}, c1}, {{1, 0}, c2}, {{0, 1}, c3}, {{1, 1}, c4}});
}

LaurentPoly univariate(const std::vector<int>& exps, const CVector& c) {
  LaurentPoly p(1);
  for (std::size_t k = 0; k < exps.size(); ++k) p.add_term({exps[k]}, c[k]);
  return p;
}

Complex random_unit_scale(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> r(0.5, 2.0), a(-kPi, kPi);
  return std::polar(r(rng), a(rng));
}

// Near the lopsided boundary the coamoeba may come closer than half a pixel;
// refine until the test is conclusive.
bool nonvanishing_refined(const LaurentPoly& f, const TorusPoint& th) {
  for (std::size_t res : {256u, 4096u, 65536u, 1048576u}) {
    try {
      return completely_nonvanishing_at(FactorList({f}), th, res);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconclusive) throw;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("angle reduction") {
  CHECK(reduce_angle(kPi) == doctest::Approx(-kPi));
  CHECK(reduce_angle(3 * kPi + 0.5) == doctest::Approx(-kPi + 0.5));
  CHECK(reduce_angle(-0.25) == doctest::Approx(-0.25));
  CHECK(angle_diff(kPi - 0.1, -kPi + 0.1) == doctest::Approx(-0.2));
}

TEST_CASE("companion roots are roots") {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 30; ++trial) {
    CVector c(2 + trial % 6);
    for (auto& x : c) x = random_unit_scale(rng);
    const auto roots = polynomial_roots(c);
    REQUIRE(roots.size() == c.size() - 1);
    for (auto z : roots) {
      Complex v = 0.0, scale = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) {
        v = v * z + c[k];
        scale = scale * std::abs(z) + std::abs(c[k]);
      }
      CHECK(std::abs(v) < 1e-10 * std::abs(scale));
    }
  }
}

TEST_CASE("1 + z has a single complement arc") {
  const auto at = univariate_components(univariate({0, 1}, {1.0, 1.0}));
  REQUIRE(at.excluded.size() == 1);
  CHECK(at.excluded[0] == doctest::Approx(-kPi));
  REQUIRE(at.arcs.size() == 1);
  CHECK(at.label_at(TorusPoint{0.0}) == 0);
  CHECK(at.label_at(TorusPoint{kPi}) == -1);
}

TEST_CASE("arc count equals the number of distinct root arguments") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 40; ++trial) {
    const std::vector<int> exps{0, 1 + trial % 3, 4 + trial % 2, 7};
    CVector c(4);
    for (auto& x : c) x = random_unit_scale(rng);
    const LaurentPoly f = univariate(exps, c);
    CVector dense(8, 0.0);
    for (std::size_t k = 0; k < 4; ++k) dense[exps[k]] = c[k];
    std::vector<double> args;
    for (auto z : polynomial_roots(dense)) args.push_back(std::arg(z));
    std::sort(args.begin(), args.end());
    std::size_t distinct = 0;
    for (std::size_t i = 0; i < args.size(); ++i)
      if (i == 0 || args[i] - args[i - 1] > 1e-9) ++distinct;
    if (args.back() - args.front() > 2 * kPi - 1e-9) --distinct;
    const auto at = univariate_components(f);
    CHECK(at.arcs.size() == distinct);
    for (const auto& a : at.arcs) CHECK(at.label_at(TorusPoint{a.representative}) >= 0);
  }
}

TEST_CASE("circuit 0 2 3 6 leaves six arcs for generic coefficients") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    CVector c(4);
    for (auto& x : c) x = random_unit_scale(rng);
    CHECK(univariate_components(univariate({0, 2, 3, 6}, c)).arcs.size() == 6);
  }
}

TEST_CASE("bilinear product coamoeba is a cross with one complement component") {
  RasterOptions ro;
  ro.resolution = 64;
  const auto at = raster_coamoeba_2d(gauss(1.0, 1.0, 1.0, 1.0), ro);
  CHECK(at.components.size() == 1);
  CHECK(at.label_at(TorusPoint{0.3, -0.4}) == 0);
}

TEST_CASE("Gauss coamoeba with a rotated middle separates (0,0) from (pi,pi)") {
  RasterOptions ro;
  ro.resolution = 128;
  ro.jobs = 2;
  const LaurentPoly f = gauss(1.0, Complex(0, 1), Complex(0, 1), 0.9);
  const auto at = raster_coamoeba_2d(f, ro);
  CHECK(at.components.size() == 2);
  const int a = at.label_at(TorusPoint{0.0, 0.0}), b = at.label_at(TorusPoint{kPi, kPi});
  CHECK(a >= 0);
  CHECK(b >= 0);
  CHECK(a != b);
  // labels partition the unmarked pixels
  for (std::size_t i = 0; i < at.marked.size(); ++i) CHECK((at.labels[i] < 0) == bool(at.marked[i]));
  for (const auto& c : at.components) CHECK(completely_nonvanishing_at(FactorList({f}), c.representative));
}

TEST_CASE("raster is independent of the worker count") {
  const LaurentPoly f = gauss(1.0, Complex(0.3, 1.0), Complex(-0.2, 0.8), 0.7);
  RasterOptions one, four;
  one.resolution = four.resolution = 96;
  four.jobs = 4;
  const auto a = raster_coamoeba_2d(f, one), b = raster_coamoeba_2d(f, four);
  CHECK(a.marked == b.marked);
  CHECK(a.labels == b.labels);
}

TEST_CASE("zeros of the bilinear form lie in the lopsided coamoeba") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const Complex c1 = random_unit_scale(rng), c2 = random_unit_scale(rng), c3 = random_unit_scale(rng),
                  c4 = random_unit_scale(rng), z1 = random_unit_scale(rng);
    const Complex z2 = -(c1 + c2 * z1) / (c3 + c4 * z1);
    CHECK(lopsided_membership(gauss(c1, c2, c3, c4), TorusPoint{std::arg(z1), std::arg(z2)}));
  }
}

TEST_CASE("lopsided complement is inside the coamoeba complement") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> a(-kPi, kPi);
  const std::vector<LaurentPoly> polys{gauss(1.0, Complex(0, 1), Complex(0, 1), 0.9),
                                       gauss(2.0, 0.3, Complex(0.1, 0.4), -0.2),
                                       LaurentPoly(2, {{{0, 0}, 1.0}, {{2, 1}, Complex(0.5, 0.5)}, {{0, 3}, -0.7}})};
  int checked = 0;
  for (const auto& f : polys) {
    for (int trial = 0; trial < 200; ++trial) {
      const TorusPoint th{a(rng), a(rng)};
      if (lopsided_membership(f, th)) continue;
      ++checked;
      CHECK(nonvanishing_refined(f, th));
    }
  }
  CHECK(checked > 50);
  // univariate: theta outside LA' never hits a root argument
  const LaurentPoly g = univariate({0, 2, 3, 6}, {1.0, Complex(0.3, 0.8), -0.5, Complex(1.2, -0.2)});
  const auto at = univariate_components(g);
  for (int trial = 0; trial < 200; ++trial) {
    const double th = a(rng);
    if (!lopsided_membership(g, TorusPoint{th})) CHECK(at.label_at(TorusPoint{th}) >= 0);
  }
}

TEST_CASE("order map is constant on lopsided components and lands on the shifted lattice") {
  const Complex c2(0, 1), c3(0, 1);
  const LaurentPoly f = gauss(1.0, c2, c3, 0.9);
  const FactorList fs({f});
  const IntMatrix b{{-1}, {1}, {1}, {-1}};
  const double arg_cb = std::arg(c2) + std::arg(c3);  // c1, c4 > 0
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  for (const TorusPoint& centre : {TorusPoint{0.0, 0.0}, TorusPoint{kPi, kPi}}) {
    REQUIRE_FALSE(lopsided_membership(f, centre));
    const double v0 = order_map(fs, centre, b, {{0, 0}})[0];
    CHECK(order_map(fs, centre, b, {{1, 1}})[0] == doctest::Approx(v0).epsilon(1e-12));
    const double k = (v0 - arg_cb) / (2 * kPi);
    CHECK(std::abs(k - std::round(k)) < 1e-9);
    CHECK(zonotope_contains(Zonotope::from_rows(b), std::vector<double>{v0}));
    int sampled = 0;
    while (sampled < 50) {
      const TorusPoint th{centre[0] + u(rng), centre[1] + u(rng)};
      if (lopsided_membership(f, th)) continue;
      ++sampled;
      CHECK(std::abs(order_map(fs, th, b, {{0, 0}})[0] - v0) < 1e-9);
    }
  }
  CHECK(order_map(fs, TorusPoint{0.0, 0.0}, b, {{0, 0}})[0] !=
        doctest::Approx(order_map(fs, TorusPoint{kPi, kPi}, b, {{0, 0}})[0]));
  CHECK_THROWS_AS(order_map(fs, TorusPoint{kPi / 2, 0.0}, b, {{0, 0}}), Error);
}

TEST_CASE("zonotope lattice points") {
  const Zonotope z = Zonotope::from_rows(IntMatrix{{-1}, {1}, {1}, {-1}});
  const auto pts = lattice_points_in_zonotope(z, std::vector<double>{0.0});
  REQUIRE(pts.size() == 1);
  CHECK(pts[0][0] == doctest::Approx(0.0));
  CHECK(lattice_points_in_zonotope(z, std::vector<double>{kPi}).size() == 2);
  CHECK_FALSE(zonotope_contains(z, std::vector<double>{2 * kPi}));
  CHECK(zonotope_contains(z, std::vector<double>{2 * kPi - 1e-6}));
}

TEST_CASE("circuit zonotope holds at most five shifted lattice points") {
  const IntMatrix a{{1, 1, 1, 1}, {0, 2, 3, 6}};
  const auto ker = integer_kernel(a);
  const IntMatrix b = IntMatrix::from_columns(ker, 4);
  const Zonotope z = Zonotope::from_rows(b);
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  std::size_t most = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> args{u(rng), u(rng), u(rng), u(rng)};
    std::vector<double> base(b.cols(), 0.0);
    for (std::size_t k = 0; k < b.cols(); ++k)
      for (std::size_t r = 0; r < 4; ++r) base[k] += args[r] * double(b(r, k));
    const auto pts = lattice_points_in_zonotope(z, base);
    for (const auto& p : pts) CHECK(zonotope_contains(z, p));
    most = std::max(most, pts.size());
  }
  CHECK(most <= 5);
  CHECK(most >= 4);
}
