#include "lamcert/propcheck.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <thread>
#include <tuple>

namespace lamcert {

std::uint64_t sample_seed(std::uint64_t seed, std::size_t index) {
  // splitmix64 of the combined state
  std::uint64_t z = seed * 0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(index) + 0x632be59bd9b4e019ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

PropertyStats run_property(const std::string& name, const PropertyConfig& cfg, bool strict,
                           const SampleFn& sample) {
  std::vector<SampleOutcome> out(cfg.samples);
  std::atomic<std::size_t> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  const auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < cfg.samples;) {
      try {
        std::mt19937_64 rng(sample_seed(cfg.seed, i));
        out[i] = sample(rng);
      } catch (...) {
        std::lock_guard lock(err_mu);
        if (!err) err = std::current_exception();
      }
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(cfg.jobs, static_cast<unsigned>(std::max<std::size_t>(cfg.samples, 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  if (err) std::rethrow_exception(err);

  PropertyStats st;
  st.name = name;
  st.samples = cfg.samples;
  st.worst_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (!out[i].margin) {
      ++st.skipped;
      continue;
    }
    const double m = *out[i].margin;
    st.worst_margin = std::min(st.worst_margin, m);
    const bool ok = strict ? m > 0.0 : m >= 0.0;
    if (!ok) {
      ++st.violations;
      if (!st.first_violation) {
        st.first_violation = i;
        st.first_violation_detail = out[i].detail;
      }
    }
  }
  return st;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::int64_t uniform_int(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

TubeShape random_tube(std::mt19937_64& rng, double eps_lo, double eps_hi, double r_lo, double r_hi) {
  return TubeShape(uniform(rng, eps_lo, eps_hi), uniform(rng, 0.0, kTwoPi), uniform(rng, r_lo, r_hi));
}

// Boundary-to-boundary strand reaching down to r_min.
TubePath strand(std::mt19937_64& rng, const TubeShape& tube, double r_min) {
  const double R = tube.radius;
  const double eps = tube.core_length;
  TubePoint p{R, uniform(rng, 0.0, kTwoPi), uniform(rng, -eps, eps)};
  TubePath path{p};
  const int down = static_cast<int>(uniform_int(rng, 1, 2));
  const int up = static_cast<int>(uniform_int(rng, 1, 2));
  for (int i = 1; i <= down + up; ++i) {
    const double frac = i <= down ? static_cast<double>(i) / down : static_cast<double>(down + up - i) / up;
    p.r = i == down + up ? R : R - frac * (R - r_min);
    p.theta += uniform(rng, -2.0, 2.0);
    p.z += uniform(rng, -4.0 * eps, 4.0 * eps);
    path.push_back(p);
  }
  return path;
}

}  // namespace

ProjectionCase random_projection_case(std::mt19937_64& rng) {
  ProjectionCase c;
  c.tube = random_tube(rng, 0.01, 1.0, 0.5, 6.0);
  const double R = c.tube.radius;
  c.r = uniform(rng, 0.02 * R, R);
  const auto n = uniform_int(rng, 2, 6);
  TubePoint p{R, uniform(rng, 0.0, kTwoPi), uniform(rng, -1.0, 1.0)};
  c.curve.push_back(p);
  for (std::int64_t i = 1; i < n; ++i) {
    p.theta += uniform(rng, -M_PI, M_PI);
    p.z += uniform(rng, -2.0 * c.tube.core_length, 2.0 * c.tube.core_length);
    c.curve.push_back(p);
  }
  return c;
}

ArcCase random_deep_arc(std::mt19937_64& rng) {
  ArcCase c;
  c.D = 2.0 * kLog4;
  c.tube = random_tube(rng, 0.05, 1.0, 4.0, 4.0);
  const double r_min = uniform(rng, 0.02, c.tube.radius - c.D - 1e-3);
  c.arc = strand(rng, c.tube, r_min);
  return c;
}

Slope slope_near_length(const FlatTorusLattice& lattice, double target, std::mt19937_64& rng) {
  const double phi = uniform(rng, 0.0, kTwoPi);
  const Vec2 w{target * std::cos(phi), target * std::sin(phi)};
  const LatticeResidue res = reduce_modulo(lattice, w);
  for (std::int64_t d = 0;; ++d) {
    for (std::int64_t dp = -d; dp <= d; ++dp) {
      for (std::int64_t dq : {-d + std::abs(dp), d - std::abs(dp)}) {
        const std::int64_t p = res.p + dp, q = res.q + dq;
        if (gcd64(p, q) == 1) return Slope(p, q);
      }
    }
  }
}

ShorteningCase random_shortening_case(std::mt19937_64& rng) {
  ShorteningCase c;
  const auto ntubes = static_cast<std::size_t>(uniform_int(rng, 1, 2));
  double diam = 0.0;
  for (std::size_t t = 0; t < ntubes; ++t) {
    const auto bdry = FlatTorusLattice::from_shape(uniform(rng, -0.5, 0.5), uniform(rng, 0.85, 1.5),
                                                   uniform(rng, 4e-4, 2e-3));
    diam = std::max(diam, covering_radius(bdry, 1e-9).hi);
    const double R_target = uniform(rng, 5.0, 6.5);
    const Slope m = slope_near_length(bdry, kTwoPi * std::sinh(R_target), rng);
    c.system.tubes.push_back(tube_from_boundary(bdry, m));
  }
  c.D = 8.0 * diam + 2.0 * kLog4 + uniform(rng, 0.05, 0.5);
  for (const auto& tube : c.system.tubes) c.system.thick_interface.push_back(0.5 * tube.radius);

  const auto strands = uniform_int(rng, 1, 4);
  const auto forced_deep = uniform_int(rng, 0, strands - 1);
  for (std::int64_t i = 0; i < strands; ++i) {
    ThickSegment th;
    th.label = "t" + std::to_string(i);
    th.length = uniform(rng, 0.5, 3.0);
    th.homology_tag = {uniform_int(rng, -3, 3), uniform_int(rng, -3, 3)};
    c.curve.segments.push_back(th);
    const auto t = static_cast<std::size_t>(uniform_int(rng, 0, static_cast<std::int64_t>(ntubes) - 1));
    const TubeShape& tube = c.system.tubes[t];
    const bool deep = i == forced_deep || uniform(rng, 0.0, 1.0) < 0.6;
    const double R = tube.radius;
    const double r_min = deep ? uniform(rng, 0.05, R - c.D - 0.05) : uniform(rng, R - c.D + 0.05, R - 0.01);
    c.curve.segments.push_back(TubeSegment{t, strand(rng, tube, r_min)});
  }
  c.rho.cls = {uniform_int(rng, -3, 3), uniform_int(rng, -3, 3)};
  for (std::size_t t = 0; t < ntubes; ++t) c.rho.core_values.push_back(uniform_int(rng, -2, 2));
  return c;
}

PropertyStats check_projection_factor(const PropertyConfig& cfg) {
  return run_property("projection factor", cfg, false, [](std::mt19937_64& rng) {
    const double R = uniform(rng, 1e-3, 30.0);
    const double r = uniform(rng, 0.0, R);
    if (!(r > 0.0 && r < R)) return SampleOutcome{};
    const auto f = projection_factor_bound(r, R);
    return SampleOutcome{(f.bound - f.exact) / f.bound,
                         "r=" + std::to_string(r) + " R=" + std::to_string(R)};
  });
}

PropertyStats check_projection_curves(const PropertyConfig& cfg) {
  return run_property("projected curve length", cfg, false, [](std::mt19937_64& rng) {
    const auto c = random_projection_case(rng);
    const double before = path_length(c.curve);
    const double after = path_length(project_inward(c.tube, c.curve, c.r));
    const double bound = projection_factor_bound(c.r, c.tube.radius).bound;
    return SampleOutcome{(bound * before - after) / before + 1e-8,
                         "R=" + std::to_string(c.tube.radius) + " r=" + std::to_string(c.r)};
  });
}

PropertyStats check_arc_margins(const PropertyConfig& cfg) {
  return run_property("deep arc margin", cfg, false, [](std::mt19937_64& rng) {
    const auto c = random_deep_arc(rng);
    const auto res = cap_and_tighten(c.tube, c.arc, c.D);
    if (!(res.depth > c.D)) return SampleOutcome{};
    return SampleOutcome{res.margin, "k=" + std::to_string(res.k) + " depth=" + std::to_string(res.depth)};
  });
}

namespace {

std::vector<std::tuple<std::string, double, std::vector<std::int64_t>>> thick_trace(const MultiCurve& g) {
  std::vector<std::tuple<std::string, double, std::vector<std::int64_t>>> out;
  for (const auto& w : g.components)
    for (const auto& s : w.curve.segments)
      if (const auto* t = std::get_if<ThickSegment>(&s)) out.emplace_back(t->label, t->length, t->homology_tag);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

PropertyStats check_shortening(const PropertyConfig& cfg) {
  return run_property("deep multicurve shortening", cfg, true, [](std::mt19937_64& rng) {
    const auto c = random_shortening_case(rng);
    const auto rep = shorten_deep_multicurve(c.curve, c.system, c.D);
    const MultiCurve before{{{c.curve, 1}}};
    if (!(rep.ledger_before == rep.ledger_after)) return SampleOutcome{-1.0, "homology changed"};
    if (thick_trace(before) != thick_trace(rep.result)) return SampleOutcome{-1.0, "thick trace changed"};
    if (rep.cap_added > rep.cap_bound) return SampleOutcome{-1.0, "caps exceed 2 n diam"};
    for (const auto& w : rep.result.components) {
      const bool thick = std::any_of(w.curve.segments.begin(), w.curve.segments.end(),
                                     [](const Segment& s) { return std::holds_alternative<ThickSegment>(s); });
      if (!thick) continue;
      for (const auto& s : w.curve.segments)
        if (const auto* t = std::get_if<TubeSegment>(&s))
          if (tube_depth(c.system.tubes[t->tube], t->path) > c.D) return SampleOutcome{-1.0, "deep strand left"};
    }
    const std::int64_t v = c.rho(rep.ledger_before);
    if (v > 0) {
      const double k0 = k_functional(c.rho, before, c.system, false);
      const double k1 = k_functional(c.rho, rep.result, c.system, false);
      if (k1 < k0) return SampleOutcome{-1.0, "K decreased"};
    }
    return SampleOutcome{rep.length_before - rep.length_after,
                         "strands=" + std::to_string(rep.deep_strands)};
  });
}

}  // namespace lamcert
