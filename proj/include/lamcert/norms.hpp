#pragma once

// Bounds on the stable norm and the mu-thick stable norm. Neither norm is
// computed exactly; everything here is a lower bound, a witnessed estimate,
// or an upper bound conditional on a supplied constant.

#include <optional>
#include <string>
#include <vector>

#include "lamcert/curves.hpp"

namespace lamcert {

/// Strict lower bound n/(2 pi) (ell^2 - 28.78) on the stable norm of a
/// zero-surgery class, from the core multicurve. Requires ell > 7.823.
double stable_lower_bound_from_cores(std::int64_t n_cusps, double ell);

/// C * ||rho||_Th. Valid only if C is admissible for (W, mu).
double thick_stable_upper_bound(double C, std::int64_t thurston_norm);

struct Witness {
  std::string curve_id;
  double k_value = 0.0;  // |K| of the witnessing chain
};

struct NormEstimate {
  double lower = 0.0;
  std::optional<double> upper;  // empty: no finite upper bound known
  std::vector<Witness> witnesses;
  std::string method;

  /// Throws InputError if the bound is below `lower`.
  void attach_upper(double value, const std::string& provenance);
};

struct NamedChain {
  std::string id;
  MultiCurve chain;
};

/// lower = max |K| over the family (the norm is symmetric), with the argmax
/// recorded as witness.
NormEstimate empirical_norm_estimate(const PairingOracle& rho, const std::vector<NamedChain>& family,
                                     const TubeSystem& system, bool thick);

}  // namespace lamcert
