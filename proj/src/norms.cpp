#include "lamcert/norms.hpp"

#include <cmath>

namespace lamcert {

double stable_lower_bound_from_cores(std::int64_t n_cusps, double ell) {
  if (n_cusps < 1) throw InputError("cusp count must be positive");
  if (!std::isfinite(ell)) throw InputError("total normalized length must be finite");
  if (!(ell > 7.823)) {
    throw HypothesisError("core bound needs total normalized length > 7.823, got " + std::to_string(ell));
  }
  return static_cast<double>(n_cusps) / kTwoPi * (ell * ell - 28.78);
}

double thick_stable_upper_bound(double C, std::int64_t thurston_norm) {
  if (!(C > 0.0) || !std::isfinite(C)) throw InputError("constant C must be positive");
  if (thurston_norm < 0) throw InputError("Thurston norm must be nonnegative");
  return C * static_cast<double>(thurston_norm);
}

void NormEstimate::attach_upper(double value, const std::string& provenance) {
  if (!(value >= lower)) {
    throw InputError("upper bound " + std::to_string(value) + " is below the lower bound " +
                     std::to_string(lower));
  }
  upper = value;
  method += "; upper: " + provenance;
}

NormEstimate empirical_norm_estimate(const PairingOracle& rho, const std::vector<NamedChain>& family,
                                     const TubeSystem& system, bool thick) {
  if (family.empty()) throw InputError("empty curve family");
  NormEstimate est;
  est.method = thick ? "empirical sup of K over thick lengths" : "empirical sup of K over lengths";
  std::optional<Witness> best;
  for (const auto& c : family) {
    const double k = std::fabs(k_functional(rho, c.chain, system, thick));
    if (!best || k > best->k_value) best = Witness{c.id, k};
  }
  est.lower = best->k_value;
  est.witnesses.push_back(*best);
  return est;
}

}  // namespace lamcert
