#pragma once

// In-memory form of a manifold description file.

#include <optional>
#include <string>
#include <vector>

#include "lamcert/homology.hpp"
#include "lamcert/lattice.hpp"
#include "lamcert/tube.hpp"

namespace lamcert {

struct CuspShape {
  double tau_re = 0.0;
  double tau_im = 1.0;
  double area = 1.0;
};

/// Constants the certification is conditional on. C and L are never derived
/// here; mu, D, t describe the Margulis decomposition assumed for the fillings.
struct AssumptionBundle {
  double C = 1.0;
  double L = 0.0;
  double mu = 0.0;
  double D = 0.0;
  double t = 0.0;
  std::optional<double> mu3;
};

enum class TubeMode {
  given,           // shapes ingested from the file, used for every filling
  derive_from_nz,  // core length from the length window, radius estimated
};

struct ManifoldBundle {
  std::string name;
  std::vector<CuspShape> cusps;
  BoundaryInclusionMap inclusion;
  TubeMode tube_mode = TubeMode::given;
  std::vector<TubeShape> tubes;
  ThurstonData thurston;
  AssumptionBundle constants;

  std::vector<FlatTorusLattice> lattices() const;
  /// Throws InputError on any inconsistency.
  void validate() const;
};

}  // namespace lamcert
