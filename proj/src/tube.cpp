#include "lamcert/tube.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lamcert {

namespace {

double wrap_2pi(double a) {
  double w = std::fmod(a, kTwoPi);
  if (w < 0.0) w += kTwoPi;
  if (w >= kTwoPi) w = 0.0;
  return w;
}

// acosh(1 + x) without cancellation for small x.
double acosh1p(double x) { return std::log1p(x + std::sqrt(x * (x + 2.0))); }

double sinh_half_sq(double x) {
  const double s = std::sinh(0.5 * x);
  return s * s;
}

}  // namespace

TubeShape::TubeShape(double eps, double tw, double rad) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InputError("tube core_length must be positive");
  if (!(rad > 0.0) || !std::isfinite(rad)) throw InputError("tube radius must be positive");
  if (!std::isfinite(tw)) throw InputError("tube twist must be finite");
  core_length = eps;
  twist = wrap_2pi(tw);
  radius = rad;
}

FlatTorusLattice torus_lattice_at_radius(const TubeShape& tube, double r) {
  if (!(r > 0.0) || r > tube.radius) {
    throw InputError("radius " + std::to_string(r) + " outside (0, " + std::to_string(tube.radius) + "]");
  }
  const double sh = std::sinh(r);
  return FlatTorusLattice({kTwoPi * sh, 0.0}, {tube.twist * sh, tube.core_length * std::cosh(r)});
}

double edge_length(const TubePoint& a, const TubePoint& b) {
  const double dr = b.r - a.r;
  const double dt = b.theta - a.theta;
  const double dz = b.z - a.z;
  if (dt == 0.0 && dz == 0.0) return std::fabs(dr);
  auto speed = [&](double s) {
    const double r = a.r + s * dr;
    const double sh = std::sinh(r) * dt;
    const double ch = std::cosh(r) * dz;
    return std::sqrt(dr * dr + sh * sh + ch * ch);
  };
  if (dr == 0.0) return speed(0.0);
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 15>::integrate(speed, 0.0, 1.0, 15, 1e-9);
}

double path_length(const TubePath& path) {
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) total += edge_length(path[i - 1], path[i]);
  return total;
}

double path_length_above(const TubePath& path, double r_min) {
  auto lerp = [](const TubePoint& a, const TubePoint& b, double s) {
    return TubePoint{a.r + s * (b.r - a.r), a.theta + s * (b.theta - a.theta), a.z + s * (b.z - a.z)};
  };
  double total = 0.0;
  for (std::size_t i = 1; i < path.size(); ++i) {
    const TubePoint& a = path[i - 1];
    const TubePoint& b = path[i];
    if (a.r >= r_min && b.r >= r_min) {
      total += edge_length(a, b);
    } else if (a.r < r_min && b.r < r_min) {
      continue;
    } else {
      const double s = (r_min - a.r) / (b.r - a.r);
      const TubePoint cut = lerp(a, b, s);
      total += a.r >= r_min ? edge_length(a, cut) : edge_length(cut, b);
    }
  }
  return total;
}

ProjectionFactor projection_factor_bound(double r, double R) {
  if (!(r > 0.0) || !(r < R) || !std::isfinite(R)) throw InputError("projection needs 0 < r < R");
  // cosh r / cosh R evaluated without overflow for large R.
  const double exact = std::exp(r - R) * (1.0 + std::exp(-2.0 * r)) / (1.0 + std::exp(-2.0 * R));
  return {std::exp(-r) + std::exp(r - R), exact};
}

TubePath project_inward(const TubeShape& tube, const TubePath& path, double target_r) {
  if (!(target_r > 0.0) || target_r > tube.radius) throw InputError("projection target outside the tube");
  TubePath out = path;
  for (auto& p : out) {
    if (p.r < target_r - 1e-12 || p.r > tube.radius + 1e-12) {
      throw InputError("curve exits the annular region of the projection");
    }
    p.r = target_r;
  }
  return out;
}

TubePath project_outward(const TubeShape& tube, const TubePath& path, double target_r) {
  if (!(target_r > 0.0) || target_r > tube.radius) throw InputError("projection target outside the tube");
  TubePath out = path;
  for (auto& p : out) {
    if (!(p.r > 0.0) || p.r > target_r + 1e-12) {
      throw InputError("curve exits the annular region of the projection");
    }
    p.r = target_r;
  }
  return out;
}

double tube_depth(const TubeShape& tube, const TubePath& path) {
  return tube_depth(tube, std::span<const TubePath>(&path, 1));
}

double tube_depth(const TubeShape& tube, std::span<const TubePath> paths) {
  double rmin = std::numeric_limits<double>::infinity();
  for (const auto& p : paths)
    for (const auto& v : p) {
      if (v.r < 0.0 || v.r > tube.radius + 1e-12) throw InputError("path leaves the tube");
      rmin = std::min(rmin, v.r);
    }
  if (!std::isfinite(rmin)) throw InputError("empty path");
  return tube.radius - rmin;
}

Interval nz_core_length_window(double ell) {
  if (!std::isfinite(ell)) throw InputError("total normalized length must be finite");
  if (!(ell > 7.823)) {
    throw HypothesisError("length window needs total normalized length > 7.823, got " +
                          std::to_string(ell));
  }
  const double l2 = ell * ell;
  return {kTwoPi / (l2 + 16.17), kTwoPi / (l2 - 28.78)};
}

std::array<double, 4> to_hyperboloid(const TubePoint& p) {
  const double ch = std::cosh(p.r);
  const double sh = std::sinh(p.r);
  return {ch * std::cosh(p.z), ch * std::sinh(p.z), sh * std::cos(p.theta), sh * std::sin(p.theta)};
}

double lift_distance(const TubePoint& a, const TubePoint& b) {
  const double x = 2.0 * sinh_half_sq(a.r - b.r) +
                   2.0 * std::cosh(a.r) * std::cosh(b.r) * sinh_half_sq(b.z - a.z) +
                   2.0 * std::sinh(a.r) * std::sinh(b.r) *
                       std::pow(std::sin(0.5 * (b.theta - a.theta)), 2);
  return acosh1p(std::max(0.0, x));
}

TubePath geodesic_samples(const TubePoint& a, const TubePoint& b, std::size_t pieces) {
  if (pieces == 0) throw InputError("geodesic needs at least one piece");
  // Work in coordinates centred at a so that z stays moderate.
  const TubePoint a0{a.r, 0.0, 0.0};
  const TubePoint b0{b.r, b.theta - a.theta, b.z - a.z};
  const double d = lift_distance(a0, b0);
  TubePath out;
  out.reserve(pieces + 1);
  out.push_back(a);
  if (d < 1e-14) {
    out.push_back(a);
    return out;
  }
  const auto x = to_hyperboloid(a0);
  const auto y = to_hyperboloid(b0);
  const double sd = std::sinh(d);
  double prev_theta = 0.0;
  for (std::size_t i = 1; i <= pieces; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(pieces);
    const double ca = std::sinh((1.0 - t) * d) / sd;
    const double cb = std::sinh(t * d) / sd;
    std::array<double, 4> p;
    for (int k = 0; k < 4; ++k) p[k] = ca * x[k] + cb * y[k];
    const double sh = std::hypot(p[2], p[3]);
    const double r = std::asinh(sh);
    const double z = std::atanh(p[1] / p[0]);
    double th = prev_theta;
    if (sh > 1e-300) {
      th = std::atan2(p[3], p[2]);
      th += kTwoPi * std::round((prev_theta - th) / kTwoPi);
    }
    prev_theta = th;
    out.push_back({r, a.theta + th, a.z + z});
  }
  // Pin the far end to b up to a meridian turn.
  const double turns = std::round((out.back().theta - b.theta) / kTwoPi);
  out.back() = {b.r, b.theta + kTwoPi * turns, b.z};
  return out;
}

// k * theta reduced to (-pi, pi]; binary128 keeps large k accurate.
static double reduced_angle(long long k, double theta) {
  using Q = __float128;
  const Q two_pi = static_cast<Q>(6.283185307179586) + static_cast<Q>(2.4492935982947064e-16);
  const Q a = static_cast<Q>(k) * theta;
  const auto m = static_cast<long long>(std::round(static_cast<double>(a / two_pi)));
  return static_cast<double>(a - static_cast<Q>(m) * two_pi);
}

double core_power_displacement(const TubeShape& tube, long long k, double r) {
  const double s = std::sin(reduced_angle(k, tube.twist) / 2.0);
  const double kz = static_cast<double>(k) * tube.core_length;
  const double sh = std::sinh(r);
  const double x = 2.0 * sinh_half_sq(kz) * (1.0 + sh * sh) + 2.0 * sh * sh * s * s;
  return acosh1p(x);
}

namespace {

// Visits core powers k >= 1 whose rotation angle phi (reduced to (-pi, pi])
// and translation k*eps fall in the box |phi| <= X, k*eps <= Y. Stops when
// visit returns true.
template <class F>
bool for_each_power_in_box(const TubeShape& tube, long double X, long double Y, F&& visit) {
  using LD = long double;
  using Q = __float128;
  const Q two_pi = static_cast<Q>(6.283185307179586) + static_cast<Q>(2.4492935982947064e-16);
  const Q th = tube.twist;
  const Q eps = tube.core_length;
  // Scaled lattice generated by (2pi/X, 0) [m] and (theta0/X, eps/Y) [k];
  // the box is contained in the disc of radius sqrt 2.
  struct V {
    long long m, k;
  };
  auto coords = [&](const V& v, LD& x, LD& y) {
    x = static_cast<LD>((static_cast<Q>(v.k) * th - static_cast<Q>(v.m) * two_pi) / static_cast<Q>(X));
    y = static_cast<LD>(static_cast<Q>(v.k) * eps / static_cast<Q>(Y));
  };
  auto n2 = [&](const V& v) {
    LD x, y;
    coords(v, x, y);
    return x * x + y * y;
  };
  V b1{-1, 0};
  V b2{0, 1};
  if (n2(b1) > n2(b2)) std::swap(b1, b2);
  for (int it = 0; it < 10000; ++it) {
    LD x1, y1, x2, y2;
    coords(b1, x1, y1);
    coords(b2, x2, y2);
    const LD mu = std::round((x1 * x2 + y1 * y2) / (x1 * x1 + y1 * y1));
    if (mu != 0) {
      const auto q = static_cast<long long>(mu);
      b2 = {b2.m - q * b1.m, b2.k - q * b1.k};
    }
    if (n2(b2) < n2(b1)) {
      std::swap(b1, b2);
      continue;
    }
    break;
  }
  LD x1, y1, x2, y2;
  coords(b1, x1, y1);
  coords(b2, x2, y2);
  const LD det = std::fabs(x1 * y2 - y1 * x2);
  const LD rad = std::sqrt(2.0L) * (1.0L + 1e-12L);
  const LD bi = rad * std::sqrt(x2 * x2 + y2 * y2) / det + 1.0L;
  const LD bj = rad * std::sqrt(x1 * x1 + y1 * y1) / det + 1.0L;
  if (bi * bj > 5e8L) throw InputError("thin-part search box too large for this tube");
  const auto mi = static_cast<long long>(bi);
  const auto mj = static_cast<long long>(bj);
  for (long long j = -mj; j <= mj; ++j)
    for (long long i = -mi; i <= mi; ++i) {
      const V v{i * b1.m + j * b2.m, i * b1.k + j * b2.k};
      if (v.k <= 0) continue;
      LD x, y;
      coords(v, x, y);
      if (std::fabs(x) <= 1.0L + 1e-12L && y <= 1.0L + 1e-12L && visit(v.k)) return true;
    }
  return false;
}

// Exact box for the condition d_k(r) < mu.
void thin_box(double mu, double r, long double& X, long double& Y) {
  const double smu = std::sinh(0.5 * mu);
  const double sr = std::sinh(r);
  X = (sr <= smu) ? std::numbers::pi_v<long double> : 2.0L * std::asin(static_cast<long double>(smu / sr));
  Y = 2.0L * std::asinh(static_cast<long double>(smu / std::cosh(r)));
}

bool thin_at(const TubeShape& tube, double mu, double r) {
  long double X, Y;
  thin_box(mu, r, X, Y);
  return for_each_power_in_box(tube, X, Y, [&](long long k) {
    return core_power_displacement(tube, k, r) < mu;
  });
}

}  // namespace

std::optional<double> thin_radius(const TubeShape& tube, double mu) {
  if (!(mu > 0.0)) throw InputError("Margulis constant must be positive");
  if (!(tube.core_length < mu)) return std::nullopt;
  double lo = 0.0;
  double hi = 1.0;
  while (thin_at(tube, mu, hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 700.0) throw InputError("thin part does not end inside a representable radius");
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    (thin_at(tube, mu, mid) ? lo : hi) = mid;
  }
  // Closed form for the powers still thin at lo: d_k(r) = mu exactly at
  // sinh^2 r = (cosh mu - cosh k eps) / (cosh k eps - cos k theta0).
  long double X, Y;
  thin_box(mu, lo, X, Y);
  double best = lo;
  for_each_power_in_box(tube, X, Y, [&](long long k) {
    const double kz = static_cast<double>(k) * tube.core_length;
    const long double phi = std::fmod(static_cast<long double>(k) * tube.twist,
                                      2.0L * std::numbers::pi_v<long double>);
    const double s = std::sin(static_cast<double>(phi) / 2.0);
    const double num = sinh_half_sq(mu) - sinh_half_sq(kz);
    const double den = sinh_half_sq(kz) + s * s;
    if (num > 0.0 && den > 0.0) {
      const double rk = std::asinh(std::sqrt(num / den));
      if (rk <= hi) best = std::max(best, rk);
    }
    return false;
  });
  return best;
}

TubeShape tube_from_boundary(const FlatTorusLattice& boundary, const Slope& meridian) {
  using LD = long double;
  const std::int64_t p = meridian.p();
  const std::int64_t q = meridian.q();
  // Extended gcd: p*b - q*a = 1 gives a complementary class (a, b).
  std::int64_t old_r = p, r = q, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const std::int64_t quo = old_r / r;
    std::int64_t tmp = old_r - quo * r;
    old_r = r;
    r = tmp;
    tmp = old_s - quo * s;
    old_s = s;
    s = tmp;
    tmp = old_t - quo * t;
    old_t = t;
    t = tmp;
  }
  // old_s*p + old_t*q = old_r = +-1
  std::int64_t a = -old_t * old_r;
  std::int64_t b = old_s * old_r;
  const Vec2 v1 = boundary.v1();
  const Vec2 v2 = boundary.v2();
  if (cross(v1, v2) < 0.0) {
    a = -a;
    b = -b;
  }
  auto vec = [&](LD cp, LD cq) {
    return std::array<LD, 2>{cp * v1.x + cq * v2.x, cp * v1.y + cq * v2.y};
  };
  const auto m = vec(p, q);
  const LD m2 = m[0] * m[0] + m[1] * m[1];
  auto l = vec(a, b);
  const LD shift = std::floor((l[0] * m[0] + l[1] * m[1]) / m2);
  l = vec(static_cast<LD>(a) - shift * p, static_cast<LD>(b) - shift * q);
  const LD mlen = std::sqrt(m2);
  const LD along = (l[0] * m[0] + l[1] * m[1]) / m2;
  const double R = std::asinh(static_cast<double>(mlen / (2.0L * std::numbers::pi_v<LD>)));
  const double eps = static_cast<double>(static_cast<LD>(boundary.area()) / (mlen * std::cosh(static_cast<LD>(R))));
  return TubeShape(eps, static_cast<double>(2.0L * std::numbers::pi_v<LD> * along), R);
}

double meyerhoff_radius(double core_length) {
  if (!(core_length > 0.0)) throw InputError("core length must be positive");
  const double h = std::sinh(0.5 * std::sqrt(4.0 * std::numbers::pi * core_length / std::sqrt(3.0)));
  const double k = 2.0 * h * h;  // cosh x - 1
  const double v = 0.5 * (std::sqrt(1.0 - 2.0 * k) / k - 1.0);
  if (!(k < 0.5) || !(v > 0.0)) throw HypothesisError("core too long for the tube radius estimate");
  return std::asinh(std::sqrt(v));
}

DeepnessCertificate make_deepness_certificate(double D, double t, double mu, std::optional<double> mu3,
                                              std::span<const TubeShape> tubes, double diam_tol) {
  if (!(D > 0.0) || !(t > 0.0) || !(mu > 0.0)) throw InputError("D, t and mu must be positive");
  if (mu3 && !(*mu3 > 0.0)) throw InputError("mu3 must be positive");
  DeepnessCertificate c;
  c.D = D;
  c.t = t;
  c.mu = mu;
  c.mu3 = mu3;
  for (const auto& tube : tubes) {
    TubeDeepnessRecord rec;
    rec.radius = tube.radius;
    rec.boundary_diameter = covering_radius(torus_lattice_at_radius(tube, tube.radius), diam_tol);
    if (auto rm = thin_radius(tube, mu)) {
      rec.dist_thick_to_core = *rm;
      rec.dist_thick_to_max = tube.radius - *rm;
    } else {
      rec.core_thin = false;
    }
    c.per_tube.push_back(rec);
  }
  return c;
}

DeepnessVerdict check_deepness(const DeepnessCertificate& cert, bool doubled) {
  DeepnessVerdict v;
  v.doubled = doubled;
  v.depth_used = doubled ? 2.0 * cert.D : cert.D;
  auto add = [&](std::string name, std::optional<std::size_t> tube, double margin, bool strict) {
    const bool ok = strict ? margin > 0.0 : margin >= 0.0;
    v.conditions.push_back({std::move(name), tube, ok ? Tristate::pass : Tristate::fail, margin});
  };
  add("D >= 2 log 4", std::nullopt, cert.D - 2.0 * kLog4, false);
  add("t >= log 4", std::nullopt, cert.t - kLog4, false);
  if (cert.mu3) add("mu < mu3", std::nullopt, *cert.mu3 - cert.mu, true);
  if (cert.per_tube.empty()) add("some tube meets the thin part", std::nullopt, -1.0, true);
  for (std::size_t i = 0; i < cert.per_tube.size(); ++i) {
    const auto& rec = cert.per_tube[i];
    {
      const double hi = cert.D - 8.0 * rec.boundary_diameter.hi - 2.0 * kLog4;
      const double lo = cert.D - 8.0 * rec.boundary_diameter.lo - 2.0 * kLog4;
      const Tristate st = hi >= 0.0 ? Tristate::pass : (lo < 0.0 ? Tristate::fail : Tristate::indeterminate);
      v.conditions.push_back({"D >= 8 diam + 2 log 4", i, st, hi});
    }
    add("radius > depth + log 4", i, rec.radius - v.depth_used - kLog4, true);
    if (!rec.core_thin) {
      add("core is mu-short", i, -1.0, true);
      continue;
    }
    add("dist(boundary, thick) >= depth", i, rec.dist_thick_to_max - v.depth_used, false);
    add("dist(thick, core) >= t", i, rec.dist_thick_to_core - cert.t, false);
  }
  v.overall = Tristate::pass;
  for (const auto& c : v.conditions) {
    if (c.status == Tristate::fail) {
      v.overall = Tristate::fail;
      break;
    }
    if (c.status == Tristate::indeterminate) v.overall = Tristate::indeterminate;
  }
  return v;
}

}  // namespace lamcert
