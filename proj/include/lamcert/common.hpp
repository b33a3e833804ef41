#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace lamcert {

/// Malformed or out-of-contract input. The CLI maps this to exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A mathematical hypothesis of an operation does not hold (exit code 3).
class HypothesisError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline const double kLog4 = std::log(4.0);

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
  friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
  friend Vec2 operator*(double s, Vec2 a) { return {s * a.x, s * a.y}; }
  friend bool operator==(Vec2, Vec2) = default;
};

inline double dot(Vec2 a, Vec2 b) { return a.x * b.x + a.y * b.y; }
inline double cross(Vec2 a, Vec2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vec2 a) { return std::hypot(a.x, a.y); }

/// Closed interval [lo, hi]; used wherever a quantity is only certified up to
/// an enclosure.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double mid() const { return 0.5 * (lo + hi); }
  double width() const { return hi - lo; }
  bool contains(double v) const { return lo <= v && v <= hi; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Tri-state outcome for checks evaluated against enclosures.
enum class Tristate { pass, fail, indeterminate };

inline const char* to_string(Tristate s) {
  switch (s) {
    case Tristate::pass: return "pass";
    case Tristate::fail: return "fail";
    case Tristate::indeterminate: return "indeterminate";
  }
  return "?";
}

}  // namespace lamcert
