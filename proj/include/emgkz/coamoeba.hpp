#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "emgkz/laurent.hpp"

namespace emgkz {

// Reduces an angle to [-pi, pi).
double reduce_angle(double a);
// Signed difference a - b reduced to [-pi, pi).
double angle_diff(double a, double b);

struct TorusPoint {
  std::vector<double> theta;

  TorusPoint() = default;
  explicit TorusPoint(std::vector<double> t);
  TorusPoint(std::initializer_list<double> t) : TorusPoint(std::vector<double>(t)) {}
  std::size_t size() const { return theta.size(); }
  double operator[](std::size_t i) const { return theta[i]; }
};

// Complement arc (lo, hi) of the closed coamoeba of a univariate polynomial;
// hi may exceed pi for the arc wrapping through -pi.
struct Arc {
  double lo = 0.0;
  double hi = 0.0;
  double representative = 0.0;
};

struct Component {
  int label = 0;
  TorusPoint representative;
  std::size_t pixel_count = 0;
  int clearance = 0;         // chessboard distance (pixels) of the representative to the marked set
  bool unreliable = false;   // thinner than two pixels
};

struct ComponentAtlas {
  std::size_t n_vars = 0;

  // n = 1
  std::vector<double> excluded;  // distinct root arguments, sorted
  std::vector<Arc> arcs;
  bool merged = false;  // some root arguments coincided within 1e-9

  // n = 2: row-major [i1 * resolution + i2], pixel centers -pi + (i + 1/2) 2pi/resolution
  std::size_t resolution = 0;
  std::vector<std::uint8_t> marked;
  std::vector<int> labels;  // -1 on marked pixels
  std::vector<Component> components;

  std::size_t component_count() const { return n_vars == 1 ? arcs.size() : components.size(); }
  // Component (n=2) or arc (n=1) index containing theta; -1 when theta is marked.
  int label_at(const TorusPoint& theta) const;
  bool has_unreliable() const;
};

struct RasterOptions {
  std::size_t resolution = 512;
  unsigned jobs = 1;
};

// Roots of sum coeffs[k] z^k via companion-matrix eigenvalues.
CVector polynomial_roots(const CVector& coeffs);

ComponentAtlas univariate_components(const LaurentPoly& f);
ComponentAtlas raster_coamoeba_2d(const LaurentPoly& f, const RasterOptions& opts = {});

// Throws Inconclusive when theta is within half a pixel (at `resolution`) of
// the coamoeba without a detectable crossing.
bool completely_nonvanishing_at(const FactorList& fs, const TorusPoint& theta, std::size_t resolution = 512);

// True iff theta lies in the closed lopsided coamoeba.
bool lopsided_membership(const LaurentPoly& f, const TorusPoint& theta);

// Row vector [arg_pi(ratio)] * B with columns ordered factor by factor, each
// factor's support in cayley_order. basepoint[j] must lie in supp f_j.
std::vector<double> order_map(const FactorList& fs, const TorusPoint& theta, const IntMatrix& b,
                              const std::vector<IVector>& basepoint);

struct Zonotope {
  std::vector<IVector> generators;  // rows of B
  std::size_t dim = 0;

  static Zonotope from_rows(const IntMatrix& b);
};

// Strict interior of (pi/2) sum mu_i b_i, |mu_i| <= 1.
bool zonotope_contains(const Zonotope& z, std::span<const double> p);

// Points of (base + 2 pi Z[B]) in the interior, in lexicographic order of the
// lattice coordinates.
std::vector<std::vector<double>> lattice_points_in_zonotope(const Zonotope& z, std::span<const double> base);

}  // namespace emgkz
