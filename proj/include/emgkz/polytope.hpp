#pragma once

#include <set>
#include <span>
#include <vector>

#include "emgkz/laurent.hpp"

namespace emgkz {

// <normal, x> >= offset, with a primitive inward normal.
struct HalfSpace {
  IVector normal;
  std::int64_t offset = 0;
  bool operator==(const HalfSpace&) const = default;
};

// Exact convex-hull helpers over Z^n, n <= 3.
std::size_t affine_dimension(const std::vector<IVector>& pts);
// Facets of conv(pts) relative to its affine hull, sorted lexicographically by
// normal. For a lower-dimensional hull the normals lie in the linear span of
// pts - pts[0].
std::vector<HalfSpace> hull_facets(const std::vector<IVector>& pts);
std::vector<IVector> hull_vertices(const std::vector<IVector>& pts);
// dim! * Euclidean volume for a full-dimensional point set.
std::int64_t lattice_volume(const std::vector<IVector>& pts);
IVector primitive(IVector v);

struct Facet {
  IVector mu;               // primitive inward normal
  IVector nu;               // nu^i = min <mu, Delta_{f_i}>, one per factor
  std::int64_t nu_sum = 0;  // |nu|
};

struct NewtonData {
  std::size_t n_vars = 0;
  std::vector<Facet> facets;
  std::vector<std::vector<IVector>> vertices;  // per factor
  bool full_dimensional = false;

  std::size_t size() const { return facets.size(); }
};

NewtonData newton_facets(const FactorList& fs);
bool is_full_dimensional(const NewtonData& nd);

// <mu_k, sigma> - <nu_k, tau>
double margin(const NewtonData& nd, std::size_t k, std::span<const double> sigma, std::span<const double> tau);
// d_k^alpha = <mu_k, alpha> - |nu_k|
std::int64_t distance_d(const NewtonData& nd, std::size_t k, std::span<const std::int64_t> alpha);
// min of d_k^alpha over a nonempty support.
std::int64_t step_distance(const NewtonData& nd, std::size_t k, const std::vector<IVector>& support);

// The numerical semigroup generated by `generators` (and 0), cut at `bound`.
std::set<std::int64_t> semigroup_up_to(const std::set<std::int64_t>& generators, std::int64_t bound);
// G_k cut at `bound`, generated by the positive d_k^alpha over supp_f.
std::set<std::int64_t> pole_semigroup(const NewtonData& nd, std::size_t k, const std::vector<IVector>& supp_f,
                                      std::int64_t bound);

}  // namespace emgkz
