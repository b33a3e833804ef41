#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "lamcert/lattice.hpp"
#include "oracles.hpp"

using namespace lamcert;

namespace {

FlatTorusLattice random_lattice(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-3.0, 3.0), im(0.05, 4.0), area(0.01, 50.0);
  return FlatTorusLattice::from_shape(re(rng), im(rng), area(rng));
}

}  // namespace

TEST_CASE("slopes are primitive and canonicalised") {
  CHECK_THROWS_AS(Slope(0, 0), InputError);
  CHECK_THROWS_AS(Slope(2, 4), InputError);
  CHECK(Slope(-3, 2).canonical() == Slope(3, -2));
  CHECK(Slope(0, -1).canonical() == Slope(0, 1));
  CHECK(Slope(1, -7).canonical() == Slope(1, -7));
}

TEST_CASE("from_shape") {
  const auto L = FlatTorusLattice::from_shape(0.5, 2.0, 8.0);
  CHECK(L.area() == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(L.v1().x == doctest::Approx(2.0));
  CHECK(L.v2().x == doctest::Approx(1.0));
  CHECK(L.v2().y == doctest::Approx(4.0));
  CHECK_THROWS_AS(FlatTorusLattice({1, 0}, {2, 0}), InputError);
  CHECK_THROWS_AS(FlatTorusLattice::from_shape(0.0, -1.0, 1.0), InputError);
}

TEST_CASE("slope lengths") {
  const auto sq = FlatTorusLattice::from_shape(0.0, 1.0, 1.0);
  CHECK(slope_length(sq, Slope(3, 4)) == doctest::Approx(5.0).epsilon(1e-15));
  const auto big = sq.scaled(7.0);
  CHECK(normalized_length(big, Slope(3, 4)) == doctest::Approx(5.0).epsilon(1e-14));

  std::vector<FlatTorusLattice> lats{sq, FlatTorusLattice::from_shape(0.3, 1.7, 2.0)};
  std::vector<Slope> s{Slope(1, 5), Slope(2, -3)};
  const double l0 = normalized_length(lats[0], s[0]), l1 = normalized_length(lats[1], s[1]);
  CHECK(total_normalized_length(lats, s) ==
        doctest::Approx(1.0 / std::sqrt(1.0 / (l0 * l0) + 1.0 / (l1 * l1))).epsilon(1e-14));
}

TEST_CASE("gauss_reduce bookkeeping") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    const auto L = random_lattice(rng);
    const auto rb = gauss_reduce(L);
    CHECK(norm(rb.b1) <= norm(rb.b2) * (1 + 1e-12));
    CHECK(std::abs(dot(rb.b1, rb.b2)) <= 0.5 * dot(rb.b1, rb.b1) * (1 + 1e-9));
    const Vec2 w = L.vector(rb.coeff[0][0], rb.coeff[0][1]);
    CHECK(norm(w - rb.b1) <= 1e-9 * norm(rb.b1));
    const auto det = rb.coeff[0][0] * rb.coeff[1][1] - rb.coeff[0][1] * rb.coeff[1][0];
    CHECK(std::abs(det) == 1);
  }
}

TEST_CASE("shortest_vector against brute force") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto L = random_lattice(rng);
    const auto sv = shortest_vector(L);
    const auto bf = oracle::brute_shortest(L.v1().x, L.v1().y, L.v2().x, L.v2().y, 60);
    CHECK(sv.length == doctest::Approx(static_cast<double>(bf.length)).epsilon(1e-12));
    CHECK(slope_length(L, sv.slope) == doctest::Approx(sv.length).epsilon(1e-12));
  }
}

TEST_CASE("shortest_vector tie break") {
  const auto sq = FlatTorusLattice::from_shape(0.0, 1.0, 1.0);
  CHECK(shortest_vector(sq).slope == Slope(1, 0));
  const auto hex = FlatTorusLattice::from_shape(0.5, std::sqrt(3.0) / 2, 1.0);
  // (1,0), (0,1), (1,-1) all tie; the greatest canonical is (1,0)
  CHECK(shortest_vector(hex).slope == Slope(1, 0));
}

TEST_CASE("covering radius closed forms") {
  const auto sq = FlatTorusLattice::from_shape(0.0, 1.0, 1.0);
  const auto c = covering_radius(sq, 1e-12);
  CHECK(c.contains(std::sqrt(0.5)));
  CHECK(c.width() < 1e-12);
  const auto hex = FlatTorusLattice({1, 0}, {0.5, std::sqrt(3.0) / 2});
  CHECK(covering_radius(hex, 1e-12).contains(1.0 / std::sqrt(3.0)));
  const auto rect = FlatTorusLattice({3, 0}, {0, 4});
  CHECK(covering_radius(rect, 1e-12).contains(2.5));
}

TEST_CASE("covering radius against grid") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 40; ++i) {
    const auto L = random_lattice(rng);
    const auto c = covering_radius(L, 1e-9);
    const auto g = oracle::grid_covering_radius(L.v1().x, L.v1().y, L.v2().x, L.v2().y, 200);
    CHECK(c.hi >= g.sampled * (1 - 1e-12));
    CHECK(c.lo <= g.sampled + g.slack);
    const auto gg = covering_radius_grid(L, 1e-2 * c.hi);
    CHECK(gg.lo <= c.hi * (1 + 1e-12));
    CHECK(gg.hi >= c.lo * (1 - 1e-12));
  }
}

TEST_CASE("reduce_modulo finds the closest vector") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    const auto L = random_lattice(rng);
    const Vec2 w{u(rng), u(rng)};
    const auto res = reduce_modulo(L, w);
    const Vec2 back = w - L.vector(res.p, res.q);
    CHECK(norm(back - res.residual) <= 1e-9 * (1 + norm(w)));
    const auto rb = gauss_reduce(L);
    for (int a = -2; a <= 2; ++a)
      for (int b = -2; b <= 2; ++b) {
        const Vec2 alt = res.residual - (static_cast<double>(a) * rb.b1 + static_cast<double>(b) * rb.b2);
        CHECK(norm(res.residual) <= norm(alt) + 1e-9);
      }
  }
}

TEST_CASE("for_each_vector_within") {
  const auto sq = FlatTorusLattice::from_shape(0.0, 1.0, 1.0);
  int count = 0;
  for_each_vector_within(sq, 1.5, [&](std::int64_t, std::int64_t, Vec2) {
    ++count;
    return false;
  });
  CHECK(count == 8);
  const bool stopped = for_each_vector_within(sq, 10.0, [](std::int64_t p, std::int64_t q, Vec2) {
    return p == 2 && q == 1;
  });
  CHECK(stopped);
}

TEST_CASE("gcd64") {
  CHECK(gcd64(12, -18) == 6);
  CHECK(gcd64(0, -5) == 5);
  CHECK(gcd64(0, 0) == 0);
}
