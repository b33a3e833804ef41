// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "lamcert/family.hpp"
#include "lamcert/io.hpp"
#include "lamcert/propcheck.hpp"
#include "oracles.hpp"

using namespace lamcert;

namespace {

struct Outcome {
  bool ok = true;
  std::string note;
};

int failures = 0;

void run(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs > budget_s) {
    out.ok = false;
    out.note += " (over the " + std::to_string(static_cast<int>(budget_s)) + " s budget)";
  }
  if (!out.ok) ++failures;
  std::printf("criterion %d %s: %s [%.2f s] %s\n", id, title, out.ok ? "PASS" : "FAIL", secs, out.note.c_str());
  std::fflush(stdout);
}

std::string stats_note(const PropertyStats& s) {
  char buf[200];
  std::snprintf(buf, sizeof buf, "%s: %zu samples, %zu skipped, %zu violations, worst margin %.3g; ", s.name.c_str(),
                s.samples, s.skipped, s.violations, s.worst_margin);
  return buf;
}

Outcome nz_window() {
  Outcome o;
  double worst = 0.0;
  for (const char* s : {"8", "10", "20", "100"}) {
    const auto want = oracle::nz_window(oracle::Real50(s));
    const auto got = nz_core_length_window(std::stod(s));
    worst = std::max({worst, std::abs(got.lo / want[0].convert_to<double>() - 1),
                      std::abs(got.hi / want[1].convert_to<double>() - 1)});
  }
  bool rejected = false;
  try {
    nz_core_length_window(7.823);
  } catch (const HypothesisError&) {
    rejected = true;
  }
  o.ok = worst < 1e-12 && rejected;
  char buf[100];
  std::snprintf(buf, sizeof buf, "max relative error %.3g, 7.823 %s", worst, rejected ? "rejected" : "accepted");
  o.note = buf;
  return o;
}

Outcome projection() {
  const auto a = check_projection_factor({100000, 71, 1});
  const auto b = check_projection_curves({1000, 72, 1});
  return {a.violations == 0 && b.violations == 0 && a.skipped < 10 && b.skipped == 0, stats_note(a) + stats_note(b)};
}

Outcome arcs() {
  const auto a = check_arc_margins({1000, 73, 1});
  return {a.violations == 0 && a.skipped == 0, stats_note(a)};
}

Outcome shortening() {
  const auto a = check_shortening({200, 74, 1});
  return {a.violations == 0 && a.skipped == 0, stats_note(a)};
}

Outcome tightener() {
  std::mt19937_64 rng(75);
  std::uniform_real_distribution<double> e(0.01, 1.0), w(0.0, kTwoPi), R(1.0, 6.0);
  double worst_core = 0.0;
  for (int i = 0; i < 20; ++i) {
    const TubeShape t(e(rng), w(rng), R(rng));
    for (std::int64_t k : {1, 2, 5}) {
      const auto res = tighten_core_class(t, k);
      std::vector<oracle::P3> path;
      for (const auto& p : res.path) path.push_back({p.r, p.theta, p.z});
      const double independent = oracle::simpson_path_length(path);
      worst_core = std::max({worst_core, std::abs(res.length - k * t.core_length),
                             std::abs(independent - k * t.core_length)});
    }
  }
  std::uniform_real_distribution<double> r(0.4, 3.0), step(-0.7, 0.7);
  double worst_fixed = 0.0;
  bool all_converged = true;
  for (int i = 0; i < 20; ++i) {
    const TubeShape t(e(rng), w(rng), 3.0);
    TubePath path{{r(rng), w(rng), 0.0}};
    for (int j = 0; j < 3; ++j) path.push_back({r(rng), path.back().theta + step(rng), path.back().z + step(rng)});
    const auto res = tighten_in_tube(t, path);
    // the tightener refines to at most 2^17 pieces; the oracle integrates on a finer grid
    const auto shot = oracle::shoot_geodesic({path.front().r, path.front().theta, path.front().z},
                                             {path.back().r, path.back().theta, path.back().z}, 20000);
    all_converged = all_converged && shot.converged && res.converged;
    worst_fixed = std::max(worst_fixed, std::abs(res.length - shot.length));
  }
  char buf[200];
  std::snprintf(buf, sizeof buf, "core^k worst error %.3g; fixed endpoints worst error vs shooting %.3g", worst_core,
                worst_fixed);
  return {worst_core <= 1e-6 && worst_fixed <= 1e-5 && all_converged, buf};
}

Outcome lattices() {
  std::mt19937_64 rng(76);
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.05, 4.0), area(0.01, 50.0);
  int sv_bad = 0, cr_bad = 0;
  for (int i = 0; i < 500; ++i) {
    const auto L = FlatTorusLattice::from_shape(re(rng), im(rng), area(rng));
    const auto sv = shortest_vector(L);
    const auto bf = oracle::brute_shortest(L.v1().x, L.v1().y, L.v2().x, L.v2().y, 400);
    const double want = static_cast<double>(bf.length);
    if (std::abs(sv.length - want) > 1e-12 * want) ++sv_bad;
    if (i < 100) {
      const auto c = covering_radius(L, 1e-9);
      const auto g = oracle::grid_covering_radius(L.v1().x, L.v1().y, L.v2().x, L.v2().y, 400);
      if (!(c.hi >= g.sampled * (1 - 1e-12) && c.lo <= g.sampled + g.slack)) ++cr_bad;
    }
  }
  return {sv_bad == 0 && cr_bad == 0,
          std::to_string(sv_bad) + "/500 shortest vector mismatches, " + std::to_string(cr_bad) +
              "/100 covering radius inconsistencies"};
}

Outcome homology() {
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> u(-9, 9);
  int bad = 0;
  for (int inst = 0; inst < 100; ++inst) {
    const std::size_t b = 1 + rng() % 4, cusps = 1 + rng() % 3;
    BoundaryInclusionMap inc;
    std::vector<std::vector<std::array<std::int64_t, 2>>> raw(cusps);
    for (std::size_t k = 0; k < cusps; ++k) {
      IntMatrix m(b, 2);
      for (std::size_t j = 0; j < b; ++j) {
        raw[k].push_back({u(rng), u(rng)});
        m(j, 0) = raw[k][j][0];
        m(j, 1) = raw[k][j][1];
      }
      inc.per_cusp.push_back(m);
    }
    CohomologyClass cls(b);
    for (auto& v : cls) v = u(rng);
    const auto bc = boundary_slope_of_class(cls, inc);
    for (int c = 0; c < 100; ++c) {
      const std::int64_t p = u(rng) * 7 + u(rng), q = u(rng) * 7 + u(rng);
      for (std::size_t k = 0; k < cusps; ++k)
        if (intersection(p, q, bc[k].x, bc[k].y) != oracle::pair_class(cls, raw[k], p, q)) ++bad;
    }
  }
  const auto bundle = parse_manifold(read_json_file(LAMCERT_FIXTURES "/bd_manifold.json"));
  const auto spec = parse_family(read_json_file(LAMCERT_FIXTURES "/bd_family.json"));
  int duality_bad = 0, skipped = 0;
  for (std::int64_t n = 0; n <= 50; ++n) {
    try {
      const auto g = generate(spec, bundle.inclusion, n);
      if (!is_compatible(g.datum.cls, bundle.inclusion, g.slope) || g.datum.kind != SurgeryKind::zero) ++duality_bad;
    } catch (const NonPrimitiveSlope&) {
      ++skipped;
    }
  }
  return {bad == 0 && duality_bad == 0,
          std::to_string(bad) + " pairing mismatches over 100x100; duality n in [0,50]: " +
              std::to_string(duality_bad) + " failures, " + std::to_string(skipped) + " skipped"};
}

Outcome end_to_end() {
  const auto bundle = parse_manifold(read_json_file(LAMCERT_FIXTURES "/bd_manifold.json"));
  auto constants = bundle.constants;
  constants.C = 1.0;
  const auto t = family_table(parse_family(read_json_file(LAMCERT_FIXTURES "/bd_family.json")), bundle, constants, 1);
  bool ok = t.threshold.N.has_value();
  double prev = -INFINITY;
  std::size_t after = 0;
  for (const auto& r : t.rows) {
    if (!t.threshold.N || r.n <= *t.threshold.N) continue;
    ++after;
    const double m = r.report.criterion_margin.value_or(-INFINITY);
    ok = ok && m > 0.0 && m > prev;
    prev = m;
  }
  ok = ok && after > 0;
  const auto q = family_table(parse_family(read_json_file(LAMCERT_FIXTURES "/quadratic_family.json")), bundle,
                              constants, 1);
  const bool no_n = !q.threshold.N;
  std::string note = t.threshold.N ? "N = " + std::to_string(*t.threshold.N) : std::string("no N");
  note += ", " + std::to_string(after) + " rows after N with increasing positive margin; quadratic spec: ";
  note += no_n ? "no N" : "N = " + std::to_string(*q.threshold.N);
  return {ok && no_n, note};
}

}  // namespace

int main() {
  run(1, "length window", 1.0, nz_window);
  run(2, "projection estimates", 60.0, projection);
  run(3, "deep arc margins", 300.0, arcs);
  run(4, "deep multicurve shortening", 0.0, shortening);
  run(5, "tightener oracle", 0.0, tightener);
  run(6, "lattice oracles", 0.0, lattices);
  run(7, "homology", 0.0, homology);
  run(8, "family threshold", 0.0, end_to_end);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures ? 1 : 0;
}
