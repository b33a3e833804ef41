#pragma once

// Reference computations for the tests. Nothing here calls into lamcert
// beyond plain data types; each routine is a slow, direct evaluation.

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include <boost/math/constants/constants.hpp>
#include <boost/multiprecision/cpp_dec_float.hpp>

namespace oracle {

using Real50 = boost::multiprecision::cpp_dec_float_50;

// 2 pi / (ell^2 + 16.17), 2 pi / (ell^2 - 28.78) at 50 digits.
inline std::array<Real50, 2> nz_window(const Real50& ell) {
  const Real50 two_pi = 2 * boost::math::constants::pi<Real50>();
  const Real50 l2 = ell * ell;
  return {two_pi / (l2 + Real50("16.17")), two_pi / (l2 - Real50("28.78"))};
}

inline Real50 core_lower_bound(int n, const Real50& ell) {
  const Real50 pi = boost::math::constants::pi<Real50>();
  return Real50(n) / (2 * pi) * (ell * ell - Real50("28.78"));
}

// ---- flat lattices --------------------------------------------------------

struct Basis {
  long double x1, y1, x2, y2;
  // original coefficients of the two vectors
  std::int64_t c[2][2];
};

inline long double len2(long double x, long double y) { return x * x + y * y; }

// Lagrange reduction with coefficient tracking.
inline Basis lagrange(double ax, double ay, double bx, double by) {
  Basis B{ax, ay, bx, by, {{1, 0}, {0, 1}}};
  for (int it = 0; it < 100000; ++it) {
    if (len2(B.x1, B.y1) > len2(B.x2, B.y2)) {
      std::swap(B.x1, B.x2);
      std::swap(B.y1, B.y2);
      std::swap(B.c[0], B.c[1]);
    }
    const long double m = std::round((B.x1 * B.x2 + B.y1 * B.y2) / len2(B.x1, B.y1));
    if (m == 0) break;
    const auto q = static_cast<std::int64_t>(m);
    B.x2 -= m * B.x1;
    B.y2 -= m * B.y1;
    B.c[1][0] -= q * B.c[0][0];
    B.c[1][1] -= q * B.c[0][1];
  }
  return B;
}

struct Shortest {
  long double length;
  std::int64_t p, q;  // original coefficients
};

// Minimum over primitive (i, j) with |i|, |j| <= window in the reduced basis.
inline Shortest brute_shortest(double ax, double ay, double bx, double by, int window = 400) {
  const Basis B = lagrange(ax, ay, bx, by);
  Shortest best{std::numeric_limits<long double>::infinity(), 0, 0};
  for (int i = -window; i <= window; ++i)
    for (int j = -window; j <= window; ++j) {
      if (i == 0 && j == 0) continue;
      const long double x = i * B.x1 + j * B.x2;
      const long double y = i * B.y1 + j * B.y2;
      const long double l = std::sqrt(len2(x, y));
      if (l > best.length) continue;
      if (std::gcd(i, j) != 1) continue;
      best = {l, i * B.c[0][0] + j * B.c[1][0], i * B.c[0][1] + j * B.c[1][1]};
    }
  return best;
}

// Largest distance to the lattice over an n x n grid of the reduced cell.
// The true covering radius lies in [result, result + half cell diagonal].
struct GridRadius {
  double sampled;
  double slack;
};

inline GridRadius grid_covering_radius(double ax, double ay, double bx, double by, int n) {
  const Basis B = lagrange(ax, ay, bx, by);
  long double worst = 0;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      const long double u = static_cast<long double>(a) / n, v = static_cast<long double>(b) / n;
      const long double px = u * B.x1 + v * B.x2, py = u * B.y1 + v * B.y2;
      long double d = std::numeric_limits<long double>::infinity();
      for (int i = -2; i <= 3; ++i)
        for (int j = -2; j <= 3; ++j)
          d = std::min(d, len2(px - i * B.x1 - j * B.x2, py - i * B.y1 - j * B.y2));
      worst = std::max(worst, std::sqrt(d));
    }
  const long double hx = (B.x1 + B.x2) / n, hy = (B.y1 + B.y2) / n;
  const long double gx = (B.x1 - B.x2) / n, gy = (B.y1 - B.y2) / n;
  const long double diag = std::max(std::sqrt(len2(hx, hy)), std::sqrt(len2(gx, gy)));
  return {static_cast<double>(worst), static_cast<double>(diag / 2)};
}

// ---- tube metric dr^2 + sinh^2 r dtheta^2 + cosh^2 r dz^2 -----------------

struct P3 {
  double r, theta, z;
};

// Composite Simpson rule for the length of the coordinate-linear edge.
inline double simpson_edge_length(P3 a, P3 b, int pieces = 2000) {
  const double dr = b.r - a.r, dt = b.theta - a.theta, dz = b.z - a.z;
  auto speed = [&](double s) {
    const double r = a.r + s * dr;
    const double sh = std::sinh(r), ch = std::cosh(r);
    return std::sqrt(dr * dr + sh * sh * dt * dt + ch * ch * dz * dz);
  };
  const int n = pieces % 2 ? pieces + 1 : pieces;
  const double h = 1.0 / n;
  double acc = speed(0.0) + speed(1.0);
  for (int i = 1; i < n; ++i) acc += (i % 2 ? 4.0 : 2.0) * speed(i * h);
  return acc * h / 3.0;
}

inline double simpson_path_length(const std::vector<P3>& path, int pieces = 2000) {
  double s = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) s += simpson_edge_length(path[i - 1], path[i], pieces);
  return s;
}

// Distance moved by the k-th core power at radius r.
inline double core_displacement(double eps, double twist, long k, double r) {
  const double c = std::cosh(r), s = std::sinh(r);
  const double v = std::cosh(k * eps) * c * c - std::cos(k * twist) * s * s;
  return std::acosh(std::max(1.0, v));
}

using State = std::array<double, 6>;  // r, theta, z, r', theta', z'

inline State geodesic_rhs(const State& u) {
  const double sh = std::sinh(u[0]), ch = std::cosh(u[0]);
  return {u[3], u[4], u[5], sh * ch * (u[4] * u[4] + u[5] * u[5]), -2.0 * ch / sh * u[3] * u[4],
          -2.0 * sh / ch * u[3] * u[5]};
}

inline State rk4_flow(State u, int steps) {
  const double h = 1.0 / steps;
  auto axpy = [](const State& a, double s, const State& b) {
    State c;
    for (int i = 0; i < 6; ++i) c[i] = a[i] + s * b[i];
    return c;
  };
  for (int i = 0; i < steps; ++i) {
    const State k1 = geodesic_rhs(u);
    const State k2 = geodesic_rhs(axpy(u, h / 2, k1));
    const State k3 = geodesic_rhs(axpy(u, h / 2, k2));
    const State k4 = geodesic_rhs(axpy(u, h, k3));
    for (int j = 0; j < 6; ++j) u[j] += h / 6 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
  }
  return u;
}

struct Shot {
  double length;
  bool converged;
};

// Newton shooting for the geodesic a -> b parametrised on [0, 1], with
// continuation in the target point and backtracking.
inline Shot shoot_geodesic(P3 a, P3 b, int steps = 4000) {
  using V3 = std::array<double, 3>;
  auto miss = [&](const V3& w, const P3& target) {
    const State e = rk4_flow({a.r, a.theta, a.z, w[0], w[1], w[2]}, steps);
    return V3{e[0] - target.r, e[1] - target.theta, e[2] - target.z};
  };
  auto size = [](const V3& f) { return std::abs(f[0]) + std::abs(f[1]) + std::abs(f[2]); };
  auto det3 = [](const double M[3][3]) {
    return M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
           M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]);
  };
  const int stages = 16;
  V3 v{0.0, 0.0, 0.0};
  bool ok = false;
  for (int st = 1; st <= stages; ++st) {
    const double s = static_cast<double>(st) / stages;
    const P3 target{a.r + s * (b.r - a.r), a.theta + s * (b.theta - a.theta), a.z + s * (b.z - a.z)};
    if (st == 1) v = {target.r - a.r, target.theta - a.theta, target.z - a.z};
    else v = {v[0] * st / (st - 1), v[1] * st / (st - 1), v[2] * st / (st - 1)};
    ok = false;
    for (int it = 0; it < 60; ++it) {
      const V3 f = miss(v, target);
      if (size(f) < 1e-11) {
        ok = true;
        break;
      }
      double J[3][3];
      for (int c = 0; c < 3; ++c) {
        V3 w = v;
        const double h = 1e-7 * std::max(1.0, std::abs(w[c]));
        w[c] += h;
        const V3 g = miss(w, target);
        for (int r = 0; r < 3; ++r) J[r][c] = (g[r] - f[r]) / h;
      }
      const double d = det3(J);
      if (!(std::abs(d) > 0)) break;
      V3 step;
      for (int c = 0; c < 3; ++c) {
        double M[3][3];
        for (int r = 0; r < 3; ++r)
          for (int k = 0; k < 3; ++k) M[r][k] = k == c ? f[r] : J[r][k];
        step[c] = det3(M) / d;
      }
      double lambda = 1.0;
      V3 next = v;
      for (int bt = 0; bt < 30; ++bt, lambda /= 2) {
        for (int c = 0; c < 3; ++c) next[c] = v[c] - lambda * step[c];
        if (size(miss(next, target)) < size(f)) break;
      }
      v = next;
    }
    if (!ok) break;
  }
  const double sh = std::sinh(a.r), ch = std::cosh(a.r);
  return {std::sqrt(v[0] * v[0] + sh * sh * v[1] * v[1] + ch * ch * v[2] * v[2]), ok};
}

// ---- integer homology ------------------------------------------------------

// rho(i_*(p mu + q lambda)) from raw b x 2 inclusion rows.
inline std::int64_t pair_class(const std::vector<std::int64_t>& cls,
                               const std::vector<std::array<std::int64_t, 2>>& rows, std::int64_t p,
                               std::int64_t q) {
  std::int64_t s = 0;
  for (std::size_t j = 0; j < cls.size(); ++j) s += cls[j] * (rows[j][0] * p + rows[j][1] * q);
  return s;
}

}  // namespace oracle
