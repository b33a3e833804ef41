#pragma once

// Geometry of flat 2-tori: cusp cross-sections and tube boundary tori.

#include <array>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "lamcert/common.hpp"

namespace lamcert {

/// Primitive integer homology class (p, q) on a torus, with respect to a
/// fixed basis. Construction rejects (0, 0) and non-primitive pairs.
class Slope {
 public:
  Slope(std::int64_t p, std::int64_t q);

  std::int64_t p() const { return p_; }
  std::int64_t q() const { return q_; }

  /// Representative of {s, -s} with p > 0, or p == 0 and q > 0.
  Slope canonical() const;

  friend bool operator==(const Slope&, const Slope&) = default;

 private:
  std::int64_t p_;
  std::int64_t q_;
};

/// One slope per cusp, ordered by cusp index.
using CompleteSlope = std::vector<Slope>;

/// Rank-2 Euclidean lattice. The basis is kept exactly as given; reduction is
/// done on demand.
class FlatTorusLattice {
 public:
  /// Throws InputError when the basis is not finite or det is zero or subnormal.
  FlatTorusLattice(Vec2 v1, Vec2 v2);

  /// Cusp shape as exported by census software: modulus tau in the upper half
  /// plane and the cross-section area. Basis is s*(1, 0), s*(Re tau, Im tau)
  /// with s = sqrt(area / Im tau).
  static FlatTorusLattice from_shape(double tau_re, double tau_im, double area);

  Vec2 v1() const { return v1_; }
  Vec2 v2() const { return v2_; }
  double area() const { return area_; }

  /// p*v1 + q*v2, accumulated in binary128 and rounded once.
  Vec2 vector(std::int64_t p, std::int64_t q) const;

  FlatTorusLattice scaled(double factor) const;

 private:
  Vec2 v1_;
  Vec2 v2_;
  double area_;
};

/// Lagrange-Gauss reduced basis together with the integer change of basis:
/// b1 = coeff[0][0]*v1 + coeff[0][1]*v2, b2 = coeff[1][0]*v1 + coeff[1][1]*v2.
/// Guarantees |b1| <= |b2| and |<b1, b2>| <= |b1|^2 / 2.
struct ReducedBasis {
  Vec2 b1;
  Vec2 b2;
  std::array<std::array<std::int64_t, 2>, 2> coeff;
  /// Bound on the absolute rounding error of b1, b2.
  double rounding_error = 0.0;
};

ReducedBasis gauss_reduce(const FlatTorusLattice& lattice);

double slope_length(const FlatTorusLattice& lattice, const Slope& s);

/// |s| / sqrt(area); invariant under scaling the lattice.
double normalized_length(const FlatTorusLattice& lattice, const Slope& s);

/// ( sum_i normalized_length_i^-2 )^-1/2 over the cusps.
double total_normalized_length(std::span<const FlatTorusLattice> lattices,
                               std::span<const Slope> slopes);

struct ShortestVector {
  Slope slope;
  double length;
};

/// Minimal primitive class. Ties (relative 1e-12) are broken by taking the
/// lexicographically greatest canonical (p, q).
ShortestVector shortest_vector(const FlatTorusLattice& lattice);

/// Covering radius (= diameter of the flat torus) as a certified enclosure.
/// Computed from the circumcircle of the non-obtuse Delaunay triangle of the
/// reduced basis; falls back to covering_radius_grid when the rounding
/// enclosure is wider than tol.
Interval covering_radius(const FlatTorusLattice& lattice, double tol);

/// Grid evaluation over the reduced fundamental cell with spacing at most
/// `resolution`. lo is the largest sampled distance, hi adds the half
/// diagonal of a grid cell (distance-to-lattice is 1-Lipschitz).
Interval covering_radius_grid(const FlatTorusLattice& lattice, double resolution);

struct LatticeResidue {
  std::int64_t p;  // coefficient of v1
  std::int64_t q;  // coefficient of v2
  Vec2 residual;   // w - (p*v1 + q*v2), of minimal norm
};

/// Closest lattice vector to w.
LatticeResidue reduce_modulo(const FlatTorusLattice& lattice, Vec2 w);

/// Calls visit(p, q, vector) for every nonzero lattice vector of norm <= radius
/// (coefficients with respect to the original basis). Stops early if visit
/// returns true; returns whether it stopped early.
bool for_each_vector_within(
    const FlatTorusLattice& lattice, double radius,
    const std::function<bool(std::int64_t, std::int64_t, Vec2)>& visit);

std::int64_t gcd64(std::int64_t a, std::int64_t b);

}  // namespace lamcert
