#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "lamcert/family.hpp"
#include "lamcert/io.hpp"
#include "oracles.hpp"

using namespace lamcert;

namespace {

ManifoldBundle bd() { return parse_manifold(read_json_file(LAMCERT_FIXTURES "/bd_manifold.json")); }
FamilySpec spec(const char* name) { return parse_family(read_json_file(std::string(LAMCERT_FIXTURES "/") + name)); }

// Normalized length of 1 mu - n lambda on the cusp shape 0.25 + 1.05 i,
// in long double from the shape alone.
long double ell_oracle(std::int64_t n) {
  const long double x = 1.0L - n * 0.25L, y = -n * 1.05L;
  const long double l2 = (x * x + y * y) / 1.05L;  // |s|^2 / area
  return std::sqrt(l2 / 2.0L);                     // two equal cusps
}

}  // namespace

TEST_CASE("generated fillings") {
  const auto b = bd();
  const auto s = spec("bd_family.json");
  for (std::int64_t n = 0; n <= 50; ++n) {
    const auto g = generate(s, b.inclusion, n);
    CHECK(g.datum.cls == CohomologyClass{n, 1});
    CHECK(g.slope == CompleteSlope{Slope(1, -n), Slope(1, -n)});
    CHECK(g.datum.thurston_norm == 2 * n + 3);
    CHECK(g.datum.kind == SurgeryKind::zero);
    CHECK(is_compatible(g.datum.cls, b.inclusion, g.slope));
  }
  CHECK_THROWS_AS(generate(s, b.inclusion, 61), InputError);
}

TEST_CASE("spec validation") {
  const auto b = bd();
  auto s = spec("bd_family.json");
  s.n_lo = 5;
  s.n_hi = 4;
  CHECK_THROWS_AS(s.validate(b.inclusion), InputError);
  s = spec("bd_family.json");
  s.a[1] = {1, 1};
  CHECK_THROWS_AS(s.validate(b.inclusion), InputError);
  s = spec("bd_family.json");
  s.alpha = {1, 0, 0};
  CHECK_THROWS_AS(s.validate(b.inclusion), InputError);
}

TEST_CASE("bd family threshold against an independent computation") {
  const auto b = bd();
  const auto t = family_table(spec("bd_family.json"), b, b.constants, 1);
  REQUIRE(t.rows.size() == 61);
  CHECK(t.skipped.empty());
  std::int64_t last_fail = -1;
  for (std::int64_t n = 0; n <= 60; ++n) {
    const long double l = ell_oracle(n);
    CHECK(t.rows[n].report.ell == doctest::Approx(static_cast<double>(l)).epsilon(1e-13));
    const bool holds = l > 7.823L && 2.0L / (2.0L * std::numbers::pi_v<long double>) * (l * l - 28.78L) > 3.0L * (2 * n + 3);
    if (!holds) last_fail = n;
  }
  REQUIRE(t.threshold.N);
  CHECK(*t.threshold.N == last_fail);
  double prev = -INFINITY;
  for (const auto& e : t.threshold.table) {
    if (e.index <= *t.threshold.N) continue;
    const double m = *e.lhs - e.rhs;
    CHECK(m > 0.0);
    CHECK(m > prev);
    prev = m;
  }
}

TEST_CASE("family rows do not depend on the number of jobs") {
  const auto b = bd();
  const auto s = spec("bd_family.json");
  CHECK(to_json(family_table(s, b, b.constants, 1)) == to_json(family_table(s, b, b.constants, 3)));
}

TEST_CASE("quadratic norms have no threshold") {
  const auto b = bd();
  const auto t = family_table(spec("quadratic_family.json"), b, b.constants, 2);
  CHECK_FALSE(t.threshold.N);
  CHECK(t.threshold.trailing_violation == 60);
}

TEST_CASE("deep family is certified with the involution window") {
  const auto b = bd();
  const auto t = family_table(spec("bd_deep_family.json"), b, b.constants, 1);
  for (const auto& r : t.rows) {
    CHECK(r.report.verdict == Verdict::certified_cores);
    REQUIRE(r.per_core_window);
    CHECK(r.per_core_window->hi == doctest::Approx(r.report.nz_window->hi / 2));
  }
  CHECK(t.threshold.N == 1000000000);
}
