#include "lamcert/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>

namespace lamcert {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return std::gcd(a < 0 ? -a : a, b < 0 ? -b : b);
}

Slope::Slope(std::int64_t p, std::int64_t q) : p_(p), q_(q) {
  if (p == 0 && q == 0) throw InputError("slope (0,0) is not a slope");
  const auto g = gcd64(p, q);
  if (g != 1) {
    throw InputError("slope (" + std::to_string(p) + "," + std::to_string(q) +
                     ") is not primitive (gcd " + std::to_string(g) + ")");
  }
}

Slope Slope::canonical() const {
  if (p_ > 0 || (p_ == 0 && q_ > 0)) return *this;
  return Slope(-p_, -q_);
}

FlatTorusLattice::FlatTorusLattice(Vec2 v1, Vec2 v2) : v1_(v1), v2_(v2) {
  if (!std::isfinite(v1.x) || !std::isfinite(v1.y) || !std::isfinite(v2.x) ||
      !std::isfinite(v2.y)) {
    throw InputError("lattice basis has non-finite entries");
  }
  // Exact in binary128: each product fits in 106 bits.
  const __float128 det = static_cast<__float128>(v1.x) * v2.y - static_cast<__float128>(v1.y) * v2.x;
  area_ = std::fabs(static_cast<double>(det));
  if (!std::isnormal(area_)) throw InputError("lattice basis is degenerate");
}

FlatTorusLattice FlatTorusLattice::from_shape(double tau_re, double tau_im, double area) {
  if (!std::isfinite(tau_re) || !(tau_im > 0.0) || !std::isfinite(tau_im)) {
    throw InputError("cusp modulus must lie in the upper half plane");
  }
  if (!(area > 0.0) || !std::isfinite(area)) throw InputError("cusp area must be positive");
  const double s = std::sqrt(area / tau_im);
  return FlatTorusLattice({s, 0.0}, {s * tau_re, s * tau_im});
}

Vec2 FlatTorusLattice::vector(std::int64_t p, std::int64_t q) const {
  const __float128 lp = p;
  const __float128 lq = q;
  return {static_cast<double>(lp * v1_.x + lq * v2_.x),
          static_cast<double>(lp * v1_.y + lq * v2_.y)};
}

FlatTorusLattice FlatTorusLattice::scaled(double factor) const {
  if (!(factor > 0.0)) throw InputError("scale factor must be positive");
  return FlatTorusLattice(factor * v1_, factor * v2_);
}

namespace {

using Coeff = std::array<std::int64_t, 2>;

double norm2(Vec2 v) { return dot(v, v); }

Coeff combine(const ReducedBasis& rb, std::int64_t i, std::int64_t j) {
  return {i * rb.coeff[0][0] + j * rb.coeff[1][0], i * rb.coeff[0][1] + j * rb.coeff[1][1]};
}

}  // namespace

ReducedBasis gauss_reduce(const FlatTorusLattice& lattice) {
  Coeff c1{1, 0};
  Coeff c2{0, 1};
  Vec2 b1 = lattice.v1();
  Vec2 b2 = lattice.v2();
  if (norm2(b1) > norm2(b2)) {
    std::swap(b1, b2);
    std::swap(c1, c2);
  }
  for (int iter = 0; iter < 10000; ++iter) {
    const double mu = std::round(dot(b1, b2) / norm2(b1));
    if (mu != 0.0) {
      if (std::fabs(mu) > 9e15) throw InputError("lattice reduction overflow");
      const auto m = static_cast<std::int64_t>(mu);
      c2 = {c2[0] - m * c1[0], c2[1] - m * c1[1]};
      b2 = lattice.vector(c2[0], c2[1]);
    }
    if (norm2(b2) < norm2(b1)) {
      std::swap(b1, b2);
      std::swap(c1, c2);
      continue;
    }
    break;
  }
  ReducedBasis rb;
  rb.b1 = b1;
  rb.b2 = b2;
  rb.coeff = {c1, c2};
  const double n1 = norm(lattice.v1());
  const double n2 = norm(lattice.v2());
  const double mag = std::max(
      std::abs(static_cast<double>(c1[0])) * n1 + std::abs(static_cast<double>(c1[1])) * n2,
      std::abs(static_cast<double>(c2[0])) * n1 + std::abs(static_cast<double>(c2[1])) * n2);
  // vector() accumulates in binary128 and rounds once to double.
  const double out = std::max(norm(b1), norm(b2));
  constexpr double kQuadEps = 1.925929944387235853e-34;  // 2^-112
  rb.rounding_error = std::numeric_limits<double>::epsilon() * out + 4.0 * kQuadEps * mag;
  return rb;
}

double slope_length(const FlatTorusLattice& lattice, const Slope& s) {
  return norm(lattice.vector(s.p(), s.q()));
}

double normalized_length(const FlatTorusLattice& lattice, const Slope& s) {
  return slope_length(lattice, s) / std::sqrt(lattice.area());
}

double total_normalized_length(std::span<const FlatTorusLattice> lattices,
                               std::span<const Slope> slopes) {
  if (lattices.empty()) throw InputError("no cusps");
  if (lattices.size() != slopes.size()) {
    throw InputError("complete slope has " + std::to_string(slopes.size()) +
                     " entries for " + std::to_string(lattices.size()) + " cusps");
  }
  long double acc = 0.0L;
  for (std::size_t i = 0; i < lattices.size(); ++i) {
    const long double l = normalized_length(lattices[i], slopes[i]);
    acc += 1.0L / (l * l);
  }
  return static_cast<double>(1.0L / std::sqrt(acc));
}

ShortestVector shortest_vector(const FlatTorusLattice& lattice) {
  const ReducedBasis rb = gauss_reduce(lattice);
  struct Cand {
    Coeff c;
    double len;
  };
  std::vector<Cand> cands;
  double best = std::numeric_limits<double>::infinity();
  for (std::int64_t i = -2; i <= 2; ++i) {
    for (std::int64_t j = -2; j <= 2; ++j) {
      if (gcd64(i, j) != 1) continue;
      const Coeff c = combine(rb, i, j);
      const double len = norm(lattice.vector(c[0], c[1]));
      cands.push_back({c, len});
      best = std::min(best, len);
    }
  }
  const double cut = best * (1.0 + 1e-12);
  std::optional<Slope> pick;
  for (const auto& cd : cands) {
    if (cd.len > cut) continue;
    const Slope s = Slope(cd.c[0], cd.c[1]).canonical();
    if (!pick || std::pair(s.p(), s.q()) > std::pair(pick->p(), pick->q())) pick = s;
  }
  return {*pick, slope_length(lattice, *pick)};
}

Interval covering_radius(const FlatTorusLattice& lattice, double tol) {
  if (!(tol > 0.0)) throw InputError("covering radius tolerance must be positive");
  const ReducedBasis rb = gauss_reduce(lattice);
  Vec2 b1 = rb.b1;
  Vec2 b2 = rb.b2;
  if (dot(b1, b2) < 0.0) b2 = -1.0 * b2;
  // Triangle 0, b1, b2 is non-obtuse, so it is a Delaunay triangle and its
  // circumcentre is a deepest hole.
  const long double l1 = norm(b1);
  const long double l2 = norm(b2);
  const long double l3 = norm(b1 - b2);
  const long double det = std::fabs(static_cast<long double>(b1.x) * b2.y -
                                    static_cast<long double>(b1.y) * b2.x);
  const double r = static_cast<double>(l1 * l2 * l3 / (2.0L * det));
  const double rel = 8.0 * rb.rounding_error / static_cast<double>(l1) + 1e-13;
  const double pad = r * rel;
  const Interval exact{r - pad, r + pad};
  if (exact.width() <= tol) return exact;
  // Too much rounding for the requested width: try the grid, keep whichever
  // enclosure is narrower.
  const double res = tol / 2.0;
  if (std::ceil(norm(b1) / res) * std::ceil(norm(b2) / res) > 4e7) return exact;
  const Interval grid = covering_radius_grid(lattice, res);
  return grid.width() < exact.width() ? grid : exact;
}

Interval covering_radius_grid(const FlatTorusLattice& lattice, double resolution) {
  if (!(resolution > 0.0)) throw InputError("grid resolution must be positive");
  const ReducedBasis rb = gauss_reduce(lattice);
  const Vec2 b1 = rb.b1;
  const Vec2 b2 = rb.b2;
  const double n1 = std::ceil(norm(b1) / resolution);
  const double n2 = std::ceil(norm(b2) / resolution);
  if (n1 * n2 > 4e7) throw InputError("grid resolution too fine for this lattice");
  const auto m1 = static_cast<int>(n1);
  const auto m2 = static_cast<int>(n2);
  double best = 0.0;
  for (int i = 0; i <= m1; ++i) {
    for (int j = 0; j <= m2; ++j) {
      const Vec2 x = (static_cast<double>(i) / m1) * b1 + (static_cast<double>(j) / m2) * b2;
      double d = std::numeric_limits<double>::infinity();
      for (int a = -1; a <= 2; ++a) {
        for (int b = -1; b <= 2; ++b) {
          d = std::min(d, norm(x - (static_cast<double>(a) * b1 + static_cast<double>(b) * b2)));
        }
      }
      best = std::max(best, d);
    }
  }
  const Vec2 e1 = (1.0 / m1) * b1;
  const Vec2 e2 = (1.0 / m2) * b2;
  const double half_diag = 0.5 * std::max(norm(e1 + e2), norm(e1 - e2));
  const double pad = 4.0 * rb.rounding_error;
  return {std::max(0.0, best - pad), best + half_diag + pad};
}

LatticeResidue reduce_modulo(const FlatTorusLattice& lattice, Vec2 w) {
  const ReducedBasis rb = gauss_reduce(lattice);
  const double det = cross(rb.b1, rb.b2);
  const double a = cross(w, rb.b2) / det;
  const double b = cross(rb.b1, w) / det;
  if (std::fabs(a) > 1e15 || std::fabs(b) > 1e15) throw InputError("point too far from origin");
  const auto a0 = static_cast<std::int64_t>(std::floor(a));
  const auto b0 = static_cast<std::int64_t>(std::floor(b));
  LatticeResidue best{0, 0, w};
  double best_len = std::numeric_limits<double>::infinity();
  for (std::int64_t i = a0 - 1; i <= a0 + 2; ++i) {
    for (std::int64_t j = b0 - 1; j <= b0 + 2; ++j) {
      const Coeff c = combine(rb, i, j);
      const Vec2 res = w - lattice.vector(c[0], c[1]);
      const double len = norm(res);
      if (len < best_len) {
        best_len = len;
        best = {c[0], c[1], res};
      }
    }
  }
  return best;
}

bool for_each_vector_within(
    const FlatTorusLattice& lattice, double radius,
    const std::function<bool(std::int64_t, std::int64_t, Vec2)>& visit) {
  if (!(radius >= 0.0)) return false;
  const ReducedBasis rb = gauss_reduce(lattice);
  const double det = std::fabs(cross(rb.b1, rb.b2));
  const double bi = radius * norm(rb.b2) / det + 1.0;
  const double bj = radius * norm(rb.b1) / det + 1.0;
  if (bi * bj > 1e9) throw InputError("enumeration radius too large");
  const auto mi = static_cast<std::int64_t>(bi);
  const auto mj = static_cast<std::int64_t>(bj);
  for (std::int64_t j = -mj; j <= mj; ++j) {
    for (std::int64_t i = -mi; i <= mi; ++i) {
      if (i == 0 && j == 0) continue;
      const Coeff c = combine(rb, i, j);
      const Vec2 v = lattice.vector(c[0], c[1]);
      if (norm(v) <= radius && visit(c[0], c[1], v)) return true;
    }
  }
  return false;
}

}  // namespace lamcert
