#include "lamcert/bundle.hpp"

#include <cmath>

namespace lamcert {

std::vector<FlatTorusLattice> ManifoldBundle::lattices() const {
  std::vector<FlatTorusLattice> out;
  out.reserve(cusps.size());
  for (const auto& c : cusps) out.push_back(FlatTorusLattice::from_shape(c.tau_re, c.tau_im, c.area));
  return out;
}

namespace {

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InputError(std::string(what) + " must be positive and finite");
}

}  // namespace

void ManifoldBundle::validate() const {
  if (cusps.empty()) throw InputError("cusps: at least one cusp required");
  for (const auto& c : cusps) {
    if (!std::isfinite(c.tau_re)) throw InputError("cusps: shape must be finite");
    require_positive(c.tau_im, "cusps: Im(shape)");
    require_positive(c.area, "cusps: area");
  }
  inclusion.validate();
  if (inclusion.cusps() != cusps.size()) {
    throw InputError("inclusion: expected one matrix per cusp (" + std::to_string(cusps.size()) + ")");
  }
  if (tube_mode == TubeMode::given && tubes.size() != cusps.size()) {
    throw InputError("tubes: expected one tube per cusp (" + std::to_string(cusps.size()) + ")");
  }
  if (thurston.cone) {
    const auto& cone = *thurston.cone;
    if (cone.generators.size() != cone.norms.size() || cone.generators.empty()) {
      throw InputError("thurston.cone: generators and norms must have equal nonzero length");
    }
    for (const auto& g : cone.generators) {
      if (g.size() != inclusion.betti()) throw InputError("thurston.cone: generator has wrong rank");
    }
  }
  for (const auto& [cls, v] : thurston.table) {
    if (cls.size() != inclusion.betti()) throw InputError("thurston.table: class has wrong rank");
    if (v < 0) throw InputError("thurston.table: norms must be nonnegative");
  }
  require_positive(constants.C, "constants.C");
  if (!(constants.L >= 0.0) || !std::isfinite(constants.L)) throw InputError("constants.L must be nonnegative");
  require_positive(constants.mu, "constants.mu");
  require_positive(constants.D, "constants.D");
  require_positive(constants.t, "constants.t");
  if (constants.mu3) require_positive(*constants.mu3, "constants.mu3");
}

}  // namespace lamcert
