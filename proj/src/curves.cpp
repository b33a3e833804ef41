#include "lamcert/curves.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace lamcert {

namespace {

constexpr double kOnBoundaryTol = 1e-9;

bool on_boundary(const TubeShape& tube, const TubePoint& p) {
  return std::fabs(p.r - tube.radius) <= kOnBoundaryTol * std::max(1.0, tube.radius);
}

// Same point of the tube (not of its universal cover).
bool same_tube_point(const TubeShape& tube, const TubePoint& a, const TubePoint& b) {
  if (std::fabs(a.r - b.r) > 1e-9) return false;
  const double m = (b.z - a.z) / tube.core_length;
  const double mr = std::round(m);
  if (std::fabs(m - mr) > 1e-6) return false;
  if (a.r < 1e-12) return true;
  const double dth = b.theta - a.theta - mr * tube.twist;
  const double turns = dth / kTwoPi;
  return std::fabs(turns - std::round(turns)) * kTwoPi * std::sinh(a.r) <= 1e-7;
}

const ThickSegment* as_thick(const Segment& s) { return std::get_if<ThickSegment>(&s); }
const TubeSegment* as_tube(const Segment& s) { return std::get_if<TubeSegment>(&s); }

void add_into(std::vector<std::int64_t>& acc, const std::vector<std::int64_t>& v, std::int64_t w) {
  if (acc.size() < v.size()) acc.resize(v.size(), 0);
  for (std::size_t i = 0; i < v.size(); ++i) acc[i] = checked_add(acc[i], checked_mul(w, v[i]));
}

}  // namespace

void validate(const HybridCurve& curve, const TubeSystem& system) {
  const auto& segs = curve.segments;
  if (segs.empty()) throw InputError("curve has no segments");
  bool any_thick = false;
  std::optional<std::size_t> tag_len;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (const auto* th = as_thick(segs[i])) {
      any_thick = true;
      if (!(th->length > 0.0) || !std::isfinite(th->length)) {
        throw InputError("thick segment " + std::to_string(i) + " needs a positive length");
      }
      if (tag_len && *tag_len != th->homology_tag.size()) {
        throw InputError("thick segments carry homology tags of different lengths");
      }
      tag_len = th->homology_tag.size();
    } else {
      const auto& tu = std::get<TubeSegment>(segs[i]);
      if (tu.tube >= system.tubes.size()) throw InputError("segment " + std::to_string(i) + " names an unknown tube");
      if (tu.path.size() < 2) throw InputError("tube segment " + std::to_string(i) + " needs two vertices");
      const auto& shape = system.tubes[tu.tube];
      for (const auto& p : tu.path) {
        if (!std::isfinite(p.r) || !std::isfinite(p.theta) || !std::isfinite(p.z) || p.r < 0.0 ||
            p.r > shape.radius + kOnBoundaryTol * std::max(1.0, shape.radius)) {
          throw InputError("tube segment " + std::to_string(i) + " leaves its tube");
        }
      }
    }
  }
  const std::size_t n = segs.size();
  if (any_thick) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto* tu = as_tube(segs[i]);
      if (!tu) continue;
      const auto& shape = system.tubes[tu->tube];
      if (!on_boundary(shape, tu->path.front()) || !on_boundary(shape, tu->path.back())) {
        throw InputError("tube segment " + std::to_string(i) + " must start and end on the tube boundary");
      }
      if (as_tube(segs[(i + 1) % n])) {
        throw InputError("tube segments " + std::to_string(i) + " and " + std::to_string((i + 1) % n) +
                         " are adjacent");
      }
    }
    return;
  }
  const std::size_t t0 = std::get<TubeSegment>(segs[0]).tube;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& a = std::get<TubeSegment>(segs[i]);
    const auto& b = std::get<TubeSegment>(segs[(i + 1) % n]);
    if (a.tube != t0) throw InputError("a curve without thick segments must stay in one tube");
    if (!same_tube_point(system.tubes[t0], a.path.back(), b.path.front())) {
      throw InputError("tube segment " + std::to_string(i) + " does not connect to the next one");
    }
  }
}

double length(const HybridCurve& curve) {
  double total = 0.0;
  for (const auto& s : curve.segments) {
    if (const auto* th = as_thick(s)) {
      total += th->length;
    } else {
      total += path_length(std::get<TubeSegment>(s).path);
    }
  }
  return total;
}

double length(const MultiCurve& g) {
  double total = 0.0;
  for (const auto& c : g.components) total += std::fabs(static_cast<double>(c.weight)) * length(c.curve);
  return total;
}

double thick_length(const HybridCurve& curve, const TubeSystem& system) {
  double total = 0.0;
  for (const auto& s : curve.segments) {
    if (const auto* th = as_thick(s)) {
      total += th->length;
    } else {
      const auto& tu = std::get<TubeSegment>(s);
      if (tu.tube >= system.thick_interface.size()) throw InputError("thick interface radius not configured");
      total += path_length_above(tu.path, system.thick_interface[tu.tube]);
    }
  }
  return total;
}

double thick_length(const MultiCurve& g, const TubeSystem& system) {
  double total = 0.0;
  for (const auto& c : g.components)
    total += std::fabs(static_cast<double>(c.weight)) * thick_length(c.curve, system);
  return total;
}

std::int64_t sheet(const TubeShape& tube, double z) {
  return static_cast<std::int64_t>(std::floor(z / tube.core_length + 1e-9));
}

std::int64_t winding(const TubeShape& tube, const TubePath& path) {
  if (path.empty()) return 0;
  return sheet(tube, path.back().z) - sheet(tube, path.front().z);
}

HomologyLedger homology_of(const HybridCurve& curve, const TubeSystem& system) {
  HomologyLedger h;
  h.cores.assign(system.tubes.size(), 0);
  for (const auto& s : curve.segments) {
    if (const auto* th = as_thick(s)) {
      add_into(h.thick, th->homology_tag, 1);
    } else {
      const auto& tu = std::get<TubeSegment>(s);
      h.cores[tu.tube] = checked_add(h.cores[tu.tube], winding(system.tubes[tu.tube], tu.path));
    }
  }
  return h;
}

HomologyLedger homology_of(const MultiCurve& g, const TubeSystem& system) {
  HomologyLedger h;
  h.cores.assign(system.tubes.size(), 0);
  for (const auto& c : g.components) {
    const HomologyLedger part = homology_of(c.curve, system);
    add_into(h.thick, part.thick, c.weight);
    add_into(h.cores, part.cores, c.weight);
  }
  return h;
}

std::int64_t PairingOracle::operator()(const HomologyLedger& h) const {
  std::int64_t v = 0;
  for (std::size_t i = 0; i < h.thick.size(); ++i) {
    if (h.thick[i] == 0) continue;
    if (i >= cls.size()) throw InputError("homology tag longer than the class");
    v = checked_add(v, checked_mul(cls[i], h.thick[i]));
  }
  for (std::size_t i = 0; i < h.cores.size(); ++i) {
    if (h.cores[i] == 0) continue;
    if (i >= core_values.size()) throw InputError("no class value for core " + std::to_string(i));
    v = checked_add(v, checked_mul(core_values[i], h.cores[i]));
  }
  return v;
}

std::int64_t rho_of(const PairingOracle& rho, const MultiCurve& g, const TubeSystem& system) {
  return rho(homology_of(g, system));
}

TightenResult tighten_in_tube(const TubeShape& tube, const TubePath& path) {
  if (path.size() < 2) throw InputError("path needs two vertices");
  for (const auto& p : path)
    if (p.r < 0.0 || p.r > tube.radius + 1e-9) throw InputError("path leaves the tube");
  const double before = path_length(path);
  const TubePoint& a = path.front();
  const TubePoint& b = path.back();
  const double d = lift_distance(a, b);
  TightenResult best{path, before, before - d, false};
  const double target = 1e-9 * std::max(1.0, d);
  for (std::size_t pieces = 8; pieces <= (std::size_t{1} << 17); pieces *= 2) {
    TubePath g = geodesic_samples(a, b, pieces);
    const double len = path_length(g);
    if (len < best.length) best = {std::move(g), len, len - d, false};
    if (best.residual <= target) {
      best.converged = true;
      break;
    }
  }
  if (before <= best.length) {
    best.path = path;
    best.length = before;
    best.residual = before - d;
    best.converged = best.residual <= target;
  }
  return best;
}

TightenResult tighten_core_class(const TubeShape& tube, std::int64_t k) {
  const double kk = static_cast<double>(k);
  TubePath p{{0.0, 0.0, 0.0}, {0.0, kk * tube.twist, kk * tube.core_length}};
  return {std::move(p), std::fabs(kk) * tube.core_length, 0.0, true};
}

namespace {

struct Cap {
  TubePath path;  // two vertices on T_R
  double length;
};

// Shortest boundary geodesic from `from` to some lift of `to`.
Cap boundary_cap(const TubeShape& tube, const FlatTorusLattice& bdry, const TubePoint& from,
                 const TubePoint& to) {
  const double sh = std::sinh(tube.radius);
  const double ch = std::cosh(tube.radius);
  const Vec2 w{(to.theta - from.theta) * sh, (to.z - from.z) * ch};
  const LatticeResidue res = reduce_modulo(bdry, w);
  const TubePoint end{tube.radius, from.theta + res.residual.x / sh, from.z + res.residual.y / ch};
  return {{{tube.radius, from.theta, from.z}, end}, norm(res.residual)};
}

}  // namespace

CapResult cap_and_tighten(const TubeShape& tube, const TubePath& arc, double D) {
  if (arc.size() < 2) throw InputError("arc needs two vertices");
  if (!on_boundary(tube, arc.front()) || !on_boundary(tube, arc.back())) {
    throw InputError("arc must start and end on the tube boundary");
  }
  CapResult out;
  out.depth = tube_depth(tube, arc);
  const FlatTorusLattice bdry = torus_lattice_at_radius(tube, tube.radius);
  const Cap cap = boundary_cap(tube, bdry, arc.back(), arc.front());
  out.alpha = cap.path;
  out.len_alpha = cap.length;
  out.sigma_bar = arc;
  out.sigma_bar.back().r = tube.radius;
  out.sigma_bar.push_back(cap.path.back());
  out.len_sigma_bar = path_length(arc) + cap.length;
  out.k = winding(tube, arc) + winding(tube, cap.path);
  const TightenResult g = tighten_core_class(tube, out.k);
  out.gamma = g.path;
  out.len_gamma = g.length;
  out.margin = out.len_sigma_bar - out.len_gamma - D / 4.0 - out.len_alpha / 2.0;
  std::vector<std::string> why;
  if (!(out.depth > D)) why.push_back("depth <= D");
  if (!(D >= 2.0 * kLog4)) why.push_back("D < 2 log 4");
  if (!(tube.radius >= D + kLog4)) why.push_back("radius < D + log 4");
  out.guaranteed = why.empty();
  for (std::size_t i = 0; i < why.size(); ++i) out.not_guaranteed_reason += (i ? "; " : "") + why[i];
  return out;
}

namespace {

// One pass over a single tube for one component. Appends the resulting
// components to `out` and updates the report counters.
void shorten_in_tube(const HybridCurve& curve, std::size_t tube_idx, const TubeSystem& system,
                     double D, const Interval& diam, ShorteningReport& rep,
                     std::vector<WeightedCurve>& out) {
  const auto& segs = curve.segments;
  const std::size_t m = segs.size();
  const TubeShape& tube = system.tubes[tube_idx];
  std::vector<std::size_t> deep;
  for (std::size_t i = 0; i < m; ++i) {
    const auto* tu = as_tube(segs[i]);
    if (tu && tu->tube == tube_idx && tube_depth(tube, tu->path) > D) deep.push_back(i);
  }
  const std::size_t n = deep.size();
  rep.deep_strands += n;
  rep.crossings += 2 * n;
  rep.caps += 2 * n;
  rep.cap_bound += 2.0 * static_cast<double>(n) * diam.hi;

  const FlatTorusLattice bdry = torus_lattice_at_radius(tube, tube.radius);
  auto strand = [&](std::size_t i) -> const TubePath& { return std::get<TubeSegment>(segs[deep[i]]).path; };

  // Greedy pairing of exits with entries by cap length, ties by order.
  struct Pair {
    double len;
    std::size_t exit, entry;
    Cap cap;
  };
  std::vector<Pair> pairs;
  pairs.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      Cap c = boundary_cap(tube, bdry, strand(j).back(), strand(i).front());
      pairs.push_back({c.length, j, i, std::move(c)});
    }
  std::stable_sort(pairs.begin(), pairs.end(), [](const Pair& a, const Pair& b) {
    return std::tie(a.len, a.exit, a.entry) < std::tie(b.len, b.exit, b.entry);
  });
  std::vector<std::size_t> pi(n, n), pinv(n, n);
  std::vector<Cap> caps(n);
  for (auto& p : pairs) {
    if (pi[p.exit] != n || pinv[p.entry] != n) continue;
    pi[p.exit] = p.entry;
    pinv[p.entry] = p.exit;
    caps[p.exit] = std::move(p.cap);
  }
  for (const auto& c : caps) rep.cap_added += 2.0 * c.length;

  // Interior loops: cycles of pi.
  std::vector<bool> seen(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (seen[s]) continue;
    double before = 0.0;
    std::int64_t k = 0;
    for (std::size_t j = s; !seen[j]; j = pi[j]) {
      seen[j] = true;
      before += path_length(strand(j)) + caps[j].length;
      k = checked_add(k, checked_add(winding(tube, strand(j)), winding(tube, caps[j].path)));
    }
    const TightenResult g = tighten_core_class(tube, k);
    rep.savings += before - g.length;
    if (k != 0) out.push_back({HybridCurve{{TubeSegment{tube_idx, g.path}}}, 1});
  }

  // Exterior loops: outer arc i runs from strand i's exit to strand i+1's
  // entry; it continues along the reversed cap ending at that entry.
  std::vector<bool> used(n, false);
  for (std::size_t s = 0; s < n; ++s) {
    if (used[s]) continue;
    HybridCurve ext;
    for (std::size_t i = s; !used[i];) {
      used[i] = true;
      const std::size_t from = deep[i];
      const std::size_t to = deep[(i + 1) % n] + (i + 1 == n ? m : 0);
      for (std::size_t q = from + 1; q < to; ++q) ext.segments.push_back(segs[q % m]);
      const std::size_t j = pinv[(i + 1) % n];
      TubePath rev(caps[j].path.rbegin(), caps[j].path.rend());
      ext.segments.push_back(TubeSegment{tube_idx, std::move(rev)});
      i = j;
    }
    out.push_back({std::move(ext), 1});
  }
}

bool has_thick(const HybridCurve& c) {
  return std::any_of(c.segments.begin(), c.segments.end(), [](const Segment& s) { return as_thick(s) != nullptr; });
}

}  // namespace

ShorteningReport shorten_deep_multicurve(const HybridCurve& curve, const TubeSystem& system, double D,
                                         double diam_tol) {
  validate(curve, system);
  if (!(D > 0.0)) throw InputError("D must be positive");
  ShorteningReport rep;
  rep.length_before = length(curve);
  rep.ledger_before = homology_of(curve, system);

  std::vector<WeightedCurve> current{{curve, 1}};
  for (std::size_t t = 0; t < system.tubes.size(); ++t) {
    const TubeShape& tube = system.tubes[t];
    bool entered = false;
    for (const auto& c : current) {
      if (!has_thick(c.curve)) continue;
      for (const auto& s : c.curve.segments) {
        const auto* tu = as_tube(s);
        if (tu && tu->tube == t && tube_depth(tube, tu->path) > D) entered = true;
      }
    }
    if (!entered) continue;
    const Interval diam = covering_radius(torus_lattice_at_radius(tube, tube.radius), diam_tol);
    if (!(D >= 8.0 * diam.hi + 2.0 * kLog4)) {
      throw HypothesisError("tube " + std::to_string(t) + ": D >= 8 diam + 2 log 4 fails (diam <= " +
                            std::to_string(diam.hi) + ")");
    }
    if (!(tube.radius > D + kLog4)) {
      throw HypothesisError("tube " + std::to_string(t) + ": radius > D + log 4 fails");
    }
    std::vector<WeightedCurve> next;
    for (auto& c : current) {
      if (!has_thick(c.curve)) {
        next.push_back(std::move(c));
        continue;
      }
      bool deep_here = false;
      for (const auto& s : c.curve.segments) {
        const auto* tu = as_tube(s);
        if (tu && tu->tube == t && tube_depth(tube, tu->path) > D) deep_here = true;
      }
      if (!deep_here) {
        next.push_back(std::move(c));
        continue;
      }
      shorten_in_tube(c.curve, t, system, D, diam, rep, next);
    }
    current = std::move(next);
  }
  rep.result.components = std::move(current);
  rep.length_after = length(rep.result);
  rep.ledger_after = homology_of(rep.result, system);
  return rep;
}

double k_functional(const PairingOracle& rho, const MultiCurve& g, const TubeSystem& system, bool thick) {
  if (g.components.empty()) return 0.0;
  const std::int64_t v = rho_of(rho, g, system);
  if (v == 0) return 0.0;
  const double len = thick ? thick_length(g, system) : length(g);
  if (!(len > 0.0)) throw InputError("chain with nonzero class value has zero length");
  return static_cast<double>(v) / len;
}

}  // namespace lamcert
