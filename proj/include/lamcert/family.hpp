#pragma once

// Families of zero-surgery classes rho_n = n alpha + beta filled along
// a - n b on every cusp.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "lamcert/bundle.hpp"
#include "lamcert/certify.hpp"
#include "lamcert/homology.hpp"

namespace lamcert {

struct FamilySpec {
  std::string name;
  CohomologyClass alpha;
  CohomologyClass beta;
  std::vector<std::array<std::int64_t, 2>> a;  // per cusp, (mu, lambda) coefficients
  std::vector<std::array<std::int64_t, 2>> b;
  std::int64_t n_lo = 0;
  std::int64_t n_hi = 0;
  /// Norm data for the generated classes: the cone spanned by alpha and beta
  /// when their norms are declared, and/or an explicit table.
  ThurstonData thurston;
  bool involution = false;

  /// Range, shapes and the duality alpha(a) = beta(b) = 1, alpha(b) = beta(a) = 0
  /// on every cusp. Throws InputError.
  void validate(const BoundaryInclusionMap& inc) const;
};

/// Thrown by generate when a - n b is divisible on some cusp.
class NonPrimitiveSlope : public InputError {
 public:
  NonPrimitiveSlope(std::size_t cusp, std::int64_t gcd);
  std::size_t cusp;
  std::int64_t gcd;
};

struct GeneratedFilling {
  std::int64_t n = 0;
  SurgeryClassDatum datum;
  CompleteSlope slope;
};

GeneratedFilling generate(const FamilySpec& spec, const BoundaryInclusionMap& inc, std::int64_t n);

struct FamilyRow {
  std::int64_t n = 0;
  CompleteSlope slope;
  SurgeryClassDatum datum;
  CertificationReport report;
  /// With a declared involution the cores have equal length: window / cusps.
  std::optional<Interval> per_core_window;
};

struct SkippedIndex {
  std::int64_t n = 0;
  std::size_t cusp = 0;
  std::int64_t gcd = 0;
};

struct FamilyTable {
  std::string name;
  std::vector<FamilyRow> rows;
  std::vector<SkippedIndex> skipped;
  ThresholdResult threshold;
};

/// Rows are certified independently on up to `jobs` threads and assembled in
/// index order.
FamilyTable family_table(const FamilySpec& spec, const ManifoldBundle& bundle,
                         const AssumptionBundle& constants, unsigned jobs = 1);

}  // namespace lamcert
