#pragma once

// Seeded Monte-Carlo checks of the tube estimates. Every sample draws from
// its own generator seeded by (seed, index), so results do not depend on the
// number of worker threads.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>

#include "lamcert/curves.hpp"

namespace lamcert {

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index);

struct PropertyConfig {
  std::size_t samples = 1000;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

struct PropertyStats {
  std::string name;
  std::size_t samples = 0;
  std::size_t skipped = 0;
  std::size_t violations = 0;
  double worst_margin = 0.0;                      // min over evaluated samples
  std::optional<std::size_t> first_violation;     // sample index
  std::string first_violation_detail;
};

/// A sample returns its margin, or nullopt when the draw is outside the
/// property's domain. strict: margin must be > 0, else >= 0.
struct SampleOutcome {
  std::optional<double> margin;
  std::string detail;
};
using SampleFn = std::function<SampleOutcome(std::mt19937_64&)>;

PropertyStats run_property(const std::string& name, const PropertyConfig& cfg, bool strict,
                           const SampleFn& sample);

struct ProjectionCase {
  TubeShape tube;
  double r = 0.0;
  TubePath curve;  // on T_R
};
ProjectionCase random_projection_case(std::mt19937_64& rng);

struct ArcCase {
  TubeShape tube;
  TubePath arc;
  double D = 0.0;
};
/// R = 4, D = 2 log 4, depth > D.
ArcCase random_deep_arc(std::mt19937_64& rng);

struct ShorteningCase {
  TubeSystem system;
  HybridCurve curve;
  double D = 0.0;
  PairingOracle rho;
};
/// One or two tubes built from small boundary tori, thick segments
/// alternating with shallow and deep tube strands.
ShorteningCase random_shortening_case(std::mt19937_64& rng);

/// Random primitive class whose length on the lattice is close to `target`.
Slope slope_near_length(const FlatTorusLattice& lattice, double target, std::mt19937_64& rng);

PropertyStats check_projection_factor(const PropertyConfig& cfg);
PropertyStats check_projection_curves(const PropertyConfig& cfg);
PropertyStats check_arc_margins(const PropertyConfig& cfg);
PropertyStats check_shortening(const PropertyConfig& cfg);

}  // namespace lamcert
