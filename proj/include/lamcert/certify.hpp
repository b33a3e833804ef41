#pragma once

// Certification of the core-curve criterion for a single filling, the
// threshold finder for families, and the rendered conclusion.

#include <optional>
#include <string>
#include <vector>

#include "lamcert/bundle.hpp"
#include "lamcert/homology.hpp"
#include "lamcert/tube.hpp"

namespace lamcert {

enum class Verdict { certified_cores, not_certified, hypotheses_failed };
const char* to_string(Verdict v);

struct Assumption {
  std::string name;
  double value = 0.0;
  std::string provenance;
};

/// Everything evaluate_filling needs, already reduced to numbers.
struct FillingInputs {
  std::string id;
  double ell = 0.0;
  std::int64_t n_cusps = 0;
  SurgeryKind kind = SurgeryKind::general;
  std::int64_t thurston_norm = 0;
  std::vector<TubeShape> tubes;  // empty when no tube data could be formed
  std::string tube_provenance;
  std::optional<double> empirical_lower;
  AssumptionBundle constants;
};

struct CertificationReport {
  std::string id;
  double ell = 0.0;
  std::optional<Interval> nz_window;
  std::optional<double> stable_lower;
  std::string stable_lower_method;
  double thick_upper_conditional = 0.0;
  std::optional<DeepnessVerdict> deep_2d;  // for the factor-3 criterion
  std::optional<DeepnessVerdict> deep_d;   // for the factor-1 statement
  std::optional<double> criterion_margin;  // stable_lower - 3 thick_upper
  std::optional<double> partial_margin;    // stable_lower - thick_upper
  bool length_hypotheses = false;  // ell > max(7.823, L)
  std::optional<bool> cores_in_window;  // total tube core length inside the window
  Verdict verdict = Verdict::not_certified;
  std::vector<std::string> reasons;
  std::vector<Assumption> assumptions;
  std::vector<TubeShape> tubes;
};

CertificationReport evaluate_filling(const FillingInputs& in);

/// Tube shapes for a filling according to the bundle's tube mode. Empty when
/// they cannot be formed (e.g. ell too small for the length window).
std::vector<TubeShape> filling_tubes(const ManifoldBundle& bundle, const CompleteSlope& slope,
                                     double ell, std::string* provenance);

/// Throws HypothesisError for the zero class or a slope the class does not
/// kill.
CertificationReport certify_filling(const ManifoldBundle& bundle, const SurgeryClassDatum& datum,
                                    const CompleteSlope& slope, const AssumptionBundle& constants,
                                    std::optional<double> empirical_lower = std::nullopt,
                                    const std::string& id = "");

struct ThresholdRow {
  std::int64_t index = 0;
  double ell = 0.0;
  std::int64_t thurston_norm = 0;
  std::int64_t n_cusps = 0;
};

struct ThresholdEntry {
  std::int64_t index = 0;
  std::optional<double> lhs;  // n/(2 pi) (ell^2 - 28.78); empty if ell <= 7.823
  double rhs = 0.0;           // 3 C ||rho||_Th
  bool holds = false;
};

struct ThresholdResult {
  std::optional<std::int64_t> N;
  std::vector<ThresholdEntry> table;
  std::optional<std::int64_t> trailing_violation;  // set when no N exists
};

/// N is the last sampled index at which the inequality fails, or the first
/// index when it never fails. No N when the last index fails.
ThresholdResult subquadratic_threshold(std::vector<ThresholdRow> rows, double C);

enum class Conclusion { full, partial, none };

struct DichotomyStatement {
  Conclusion kind = Conclusion::none;
  std::string text;
};

DichotomyStatement dichotomy_statement(const CertificationReport& report);

}  // namespace lamcert
