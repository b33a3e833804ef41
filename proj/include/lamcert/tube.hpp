#pragma once

// Hyperbolic tubes around a closed geodesic, in cylindrical coordinates
// (r, theta, z) with metric dr^2 + sinh^2 r dtheta^2 + cosh^2 r dz^2 and
// deck transformation (theta, z) -> (theta + twist, z + core_length).

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lamcert/common.hpp"
#include "lamcert/lattice.hpp"

namespace lamcert {

struct TubeShape {
  double core_length = 0.0;  // epsilon
  double twist = 0.0;        // theta_0, normalised to [0, 2pi)
  double radius = 0.0;       // R

  TubeShape() = default;
  /// Validates positivity and normalises the twist.
  TubeShape(double core_length, double twist, double radius);
};

/// A point given in lift coordinates: theta and z are not reduced, so a path
/// is a continuous curve in the universal cover.
struct TubePoint {
  double r = 0.0;
  double theta = 0.0;
  double z = 0.0;
  friend bool operator==(const TubePoint&, const TubePoint&) = default;
};

/// Polyline whose edges are straight in (r, theta, z).
using TubePath = std::vector<TubePoint>;

FlatTorusLattice torus_lattice_at_radius(const TubeShape& tube, double r);

/// Length of the coordinate-linear edge a -> b, by adaptive Gauss-Kronrod
/// quadrature at relative tolerance 1e-9.
double edge_length(const TubePoint& a, const TubePoint& b);
double path_length(const TubePath& path);

/// Length of the part of the path with r >= r_min.
double path_length_above(const TubePath& path, double r_min);

struct ProjectionFactor {
  double bound;  // e^{-r} + e^{r-R}
  double exact;  // cosh r / cosh R
};

ProjectionFactor projection_factor_bound(double r, double R);

/// Radial projection onto T_target. Inward: every vertex must satisfy
/// target <= r <= tube.radius. Outward: 0 < r <= target <= tube.radius.
TubePath project_inward(const TubeShape& tube, const TubePath& path, double target_r);
TubePath project_outward(const TubeShape& tube, const TubePath& path, double target_r);

/// tube.radius - min r over the vertices (edges are monotone in r).
double tube_depth(const TubeShape& tube, const TubePath& path);
double tube_depth(const TubeShape& tube, std::span<const TubePath> paths);

/// Window for the total length of the filling core link. Requires ell > 7.823.
Interval nz_core_length_window(double total_normalized_length);

/// Point on the hyperboloid model, signature (-,+,+,+); the core is the
/// x0-x1 axis.
std::array<double, 4> to_hyperboloid(const TubePoint& p);

/// Distance in the universal cover between the lifts.
double lift_distance(const TubePoint& a, const TubePoint& b);

/// Samples of the geodesic segment between the two lifts, `pieces` edges.
/// The theta coordinate is unwrapped continuously from a.theta.
TubePath geodesic_samples(const TubePoint& a, const TubePoint& b, std::size_t pieces);

/// Translation length of the k-th power of the core at distance r from it.
double core_power_displacement(const TubeShape& tube, long long k, double r);

/// Radius of the boundary of the mu-thin part of the tube: the largest r at
/// which some nontrivial power of the core moves points less than mu.
/// Empty when the core itself is not mu-short.
std::optional<double> thin_radius(const TubeShape& tube, double mu);

/// Tube whose boundary torus is the given flat torus and whose meridian is
/// the given primitive class on it.
TubeShape tube_from_boundary(const FlatTorusLattice& boundary, const Slope& meridian);

/// Tube radius estimate from the core length (Meyerhoff's bound). This is a
/// literature estimate, not a certified quantity.
double meyerhoff_radius(double core_length);

struct TubeDeepnessRecord {
  bool core_thin = true;  // false: the core is not mu-short, distances unset
  double radius = 0.0;
  Interval boundary_diameter;
  double dist_thick_to_max = 0.0;
  double dist_thick_to_core = 0.0;
};

struct DeepnessCertificate {
  double D = 0.0;
  double t = 0.0;
  double mu = 0.0;
  std::optional<double> mu3;
  std::vector<TubeDeepnessRecord> per_tube;
};

/// One record per tube. Diameters come from covering_radius at tolerance
/// diam_tol; the thick interface is thin_radius(tube, mu).
DeepnessCertificate make_deepness_certificate(double D, double t, double mu,
                                              std::optional<double> mu3,
                                              std::span<const TubeShape> tubes,
                                              double diam_tol = 1e-9);

struct ConditionResult {
  std::string name;
  std::optional<std::size_t> tube;  // empty for global conditions
  Tristate status = Tristate::pass;
  double margin = 0.0;  // computed with the conservative diameter endpoint
};

struct DeepnessVerdict {
  bool doubled = false;
  double depth_used = 0.0;  // D or 2D
  std::vector<ConditionResult> conditions;
  Tristate overall = Tristate::pass;
};

/// (D', t)-deep check with D' = doubled ? 2D : D, together with
/// D >= 8 diam + 2 log 4 and t >= log 4.
DeepnessVerdict check_deepness(const DeepnessCertificate& cert, bool doubled);

}  // namespace lamcert
