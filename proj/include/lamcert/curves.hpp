#pragma once

// Closed curves made of abstract thick-part segments and explicit in-tube
// paths, and the shortening operations on them.

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "lamcert/homology.hpp"
#include "lamcert/tube.hpp"

namespace lamcert {

struct ThickSegment {
  std::string label;
  double length = 0.0;
  std::vector<std::int64_t> homology_tag;
  friend bool operator==(const ThickSegment&, const ThickSegment&) = default;
};

struct TubeSegment {
  std::size_t tube = 0;
  TubePath path;
};

using Segment = std::variant<ThickSegment, TubeSegment>;

/// Cyclic sequence of segments. If any thick segment is present, every tube
/// segment runs from its boundary torus to itself and no two tube segments
/// are adjacent. Otherwise all segments lie in one tube and chain up to deck
/// transformations.
struct HybridCurve {
  std::vector<Segment> segments;
};

struct WeightedCurve {
  HybridCurve curve;
  std::int64_t weight = 1;
};

struct MultiCurve {
  std::vector<WeightedCurve> components;
};

struct TubeSystem {
  std::vector<TubeShape> tubes;
  /// Per tube, the radius of the thick/thin interface. Needed for thick_length.
  std::vector<double> thick_interface;
};

/// Throws InputError describing the first violated invariant.
void validate(const HybridCurve& curve, const TubeSystem& system);

double length(const HybridCurve& curve);
double length(const MultiCurve& g);

/// Thick segments in full, tube segments only where r >= thick_interface.
double thick_length(const HybridCurve& curve, const TubeSystem& system);
double thick_length(const MultiCurve& g, const TubeSystem& system);

/// Index of the fundamental slab z in [k eps, (k+1) eps) containing z.
std::int64_t sheet(const TubeShape& tube, double z);

/// Number of core turns contributed by an in-tube path.
std::int64_t winding(const TubeShape& tube, const TubePath& path);

/// Homology of a curve: the summed thick tags and per-tube core windings.
struct HomologyLedger {
  std::vector<std::int64_t> thick;
  std::vector<std::int64_t> cores;
  friend bool operator==(const HomologyLedger&, const HomologyLedger&) = default;
};

HomologyLedger homology_of(const HybridCurve& curve, const TubeSystem& system);
HomologyLedger homology_of(const MultiCurve& g, const TubeSystem& system);

/// rho on curves: cls paired with thick tags, plus rho(core_i) per winding.
struct PairingOracle {
  CohomologyClass cls;
  std::vector<std::int64_t> core_values;

  std::int64_t operator()(const HomologyLedger& h) const;
};

std::int64_t rho_of(const PairingOracle& rho, const MultiCurve& g, const TubeSystem& system);

struct TightenResult {
  TubePath path;
  double length = 0.0;
  double residual = 0.0;  // polyline length minus exact geodesic length
  bool converged = true;
};

/// Shortest path with the same endpoints (and the same lift). Never returns a
/// longer path than the input.
TightenResult tighten_in_tube(const TubeShape& tube, const TubePath& path);

/// Geodesic representative of core^k: the core traversed |k| times.
TightenResult tighten_core_class(const TubeShape& tube, std::int64_t k);

struct CapResult {
  TubePath sigma_bar;  // arc followed by the boundary cap
  TubePath alpha;      // the cap alone
  TubePath gamma;      // geodesic in the free homotopy class of sigma_bar
  std::int64_t k = 0;  // sigma_bar is homotopic to core^k
  double len_sigma_bar = 0.0;
  double len_alpha = 0.0;
  double len_gamma = 0.0;
  double depth = 0.0;
  /// len(sigma_bar) - len(gamma) - D/4 - len(alpha)/2
  double margin = 0.0;
  bool guaranteed = false;
  std::string not_guaranteed_reason;
};

/// Closes an arc from T_R to itself by the shortest Euclidean geodesic in
/// T_R and tightens the loop.
CapResult cap_and_tighten(const TubeShape& tube, const TubePath& arc, double D);

struct ShorteningReport {
  MultiCurve result;
  std::size_t crossings = 0;     // boundary crossings of deep strands
  std::size_t deep_strands = 0;  // n
  std::size_t caps = 0;          // cap traversals, 2n
  double cap_added = 0.0;        // total length of cap traversals
  double cap_bound = 0.0;        // sum over tubes of 2 n diam_hi
  double savings = 0.0;          // length removed by tightening inside tubes
  double length_before = 0.0;
  double length_after = 0.0;
  HomologyLedger ledger_before;
  HomologyLedger ledger_after;
};

/// Replaces each excursion deeper than D into a tube by boundary caps and
/// tightened core loops. Thick segments and shallow strands are kept as they
/// are. Throws HypothesisError when a tube entered deeply violates
/// D >= 8 diam + 2 log 4 or radius > D + log 4.
ShorteningReport shorten_deep_multicurve(const HybridCurve& curve, const TubeSystem& system,
                                         double D, double diam_tol = 1e-9);

/// rho(g) / length(g) (or thick length). Zero for the empty chain and for
/// rho(g) = 0.
double k_functional(const PairingOracle& rho, const MultiCurve& g, const TubeSystem& system,
                    bool thick);

}  // namespace lamcert
