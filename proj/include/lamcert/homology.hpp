#pragma once

// Integer linear algebra for surgery classes on a cusped manifold W.
// Homology is taken modulo torsion throughout.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "lamcert/lattice.hpp"

namespace lamcert {

/// Dense integer matrix with overflow-checked arithmetic.
class IntMatrix {
 public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows);

  static IntMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::int64_t& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b);
  friend bool operator==(const IntMatrix&, const IntMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::int64_t> a_;
};

std::int64_t checked_add(std::int64_t a, std::int64_t b);
std::int64_t checked_mul(std::int64_t a, std::int64_t b);

/// Exact determinant (fraction-free elimination).
std::int64_t determinant(const IntMatrix& m);

/// Class in H^1(W; Z)/torsion, in the dual of the chosen basis of H_1(W)/torsion.
using CohomologyClass = std::vector<std::int64_t>;

/// For each cusp a b x 2 matrix; column 0 is the image of the meridian,
/// column 1 the image of the longitude, in H_1(W)/torsion.
struct BoundaryInclusionMap {
  std::vector<IntMatrix> per_cusp;

  std::size_t cusps() const { return per_cusp.size(); }
  std::size_t betti() const { return per_cusp.empty() ? 0 : per_cusp.front().rows(); }
  /// Throws InputError on inconsistent shapes.
  void validate() const;
};

/// rho(i_*(p*mu + q*lambda)) on the given cusp.
std::int64_t evaluate(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                      std::size_t cusp, std::int64_t p, std::int64_t q);

/// rho kills every filled slope.
bool is_compatible(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                   std::span<const Slope> slopes);

/// <(x,y),(p,q)> = x*q - y*p, with (mu, lambda) positively oriented.
inline std::int64_t intersection(std::int64_t x, std::int64_t y, std::int64_t p, std::int64_t q) {
  return checked_add(checked_mul(x, q), -checked_mul(y, p));
}

struct BoundaryClass {
  std::int64_t x = 0;  // -rho(lambda)
  std::int64_t y = 0;  // rho(mu)
  std::int64_t gcd = 0;
  bool empty() const { return x == 0 && y == 0; }
  bool primitive() const { return gcd == 1; }
};

std::vector<BoundaryClass> boundary_slope_of_class(const CohomologyClass& cls,
                                                   const BoundaryInclusionMap& inc);

enum class SurgeryKind { general, zero };

struct SurgeryClassDatum {
  CohomologyClass cls;
  std::int64_t thurston_norm = 0;
  std::vector<BoundaryClass> boundary;
  SurgeryKind kind = SurgeryKind::general;

  /// Boundary slopes as Slope values; only meaningful for zero-surgery classes.
  CompleteSlope boundary_slopes() const;
};

/// Derives boundary data and kind. Zero-surgery iff every cusp carries a
/// primitive boundary class.
SurgeryClassDatum make_surgery_datum(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                                     std::int64_t thurston_norm);

/// Value of the extended class on the coherently oriented core multicurve:
/// one per cusp. Throws HypothesisError for non-zero-surgery classes.
std::int64_t pairing_with_cores(const SurgeryClassDatum& datum);

struct SmithForm {
  IntMatrix U;
  IntMatrix D;
  IntMatrix V;
};

/// U * m * V = D, D diagonal with nonnegative entries d_1 | d_2 | ...,
/// U and V unimodular.
SmithForm smith_normal_form(const IntMatrix& m);

/// Thurston norm data: either explicit values or a cone on which the norm is
/// linear.
struct ThurstonCone {
  std::vector<CohomologyClass> generators;
  std::vector<std::int64_t> norms;
};

struct ThurstonData {
  std::optional<ThurstonCone> cone;
  std::map<CohomologyClass, std::int64_t> table;

  /// Looks up the table first, then the cone. Throws InputError when the class
  /// lies outside the cone, the result is not integral, or no data applies.
  std::int64_t norm_of(const CohomologyClass& cls) const;
};

}  // namespace lamcert
