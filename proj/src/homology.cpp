#include "lamcert/homology.hpp"

#include <algorithm>
#include <string>
#include <utility>

#include <boost/rational.hpp>

namespace lamcert {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw InputError("integer overflow");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r)) throw InputError("integer overflow");
  return r;
}

IntMatrix::IntMatrix(std::initializer_list<std::initializer_list<std::int64_t>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  for (const auto& r : rows) {
    if (r.size() != cols_) throw InputError("ragged matrix");
    a_.insert(a_.end(), r.begin(), r.end());
  }
}

IntMatrix IntMatrix::identity(std::size_t n) {
  IntMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("matrix shape mismatch");
  IntMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::int64_t s = 0;
      for (std::size_t k = 0; k < a.cols(); ++k) s = checked_add(s, checked_mul(a(i, k), b(k, j)));
      c(i, j) = s;
    }
  return c;
}

std::int64_t determinant(const IntMatrix& m) {
  if (m.rows() != m.cols()) throw InputError("determinant of non-square matrix");
  const std::size_t n = m.rows();
  if (n == 0) return 1;
  IntMatrix a = m;
  std::int64_t sign = 1;
  std::int64_t prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (a(k, k) == 0) {
      std::size_t r = k + 1;
      while (r < n && a(r, k) == 0) ++r;
      if (r == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(r, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        a(i, j) = checked_add(checked_mul(a(i, j), a(k, k)), -checked_mul(a(i, k), a(k, j))) / prev;
    prev = a(k, k);
  }
  return sign * a(n - 1, n - 1);
}

void BoundaryInclusionMap::validate() const {
  if (per_cusp.empty()) throw InputError("inclusion map has no cusps");
  const std::size_t b = per_cusp.front().rows();
  if (b == 0) throw InputError("inclusion map has zero rank");
  for (std::size_t i = 0; i < per_cusp.size(); ++i) {
    if (per_cusp[i].rows() != b || per_cusp[i].cols() != 2) {
      throw InputError("inclusion matrix for cusp " + std::to_string(i) + " must be " +
                       std::to_string(b) + "x2");
    }
  }
}

std::int64_t evaluate(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                      std::size_t cusp, std::int64_t p, std::int64_t q) {
  if (cusp >= inc.cusps()) throw InputError("cusp index " + std::to_string(cusp) + " out of range");
  const IntMatrix& m = inc.per_cusp[cusp];
  if (cls.size() != m.rows()) throw InputError("class length does not match the Betti number");
  std::int64_t s = 0;
  for (std::size_t k = 0; k < cls.size(); ++k) {
    const std::int64_t img = checked_add(checked_mul(p, m(k, 0)), checked_mul(q, m(k, 1)));
    s = checked_add(s, checked_mul(cls[k], img));
  }
  return s;
}

bool is_compatible(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                   std::span<const Slope> slopes) {
  if (slopes.size() != inc.cusps()) throw InputError("complete slope length does not match cusps");
  for (std::size_t i = 0; i < slopes.size(); ++i)
    if (evaluate(cls, inc, i, slopes[i].p(), slopes[i].q()) != 0) return false;
  return true;
}

std::vector<BoundaryClass> boundary_slope_of_class(const CohomologyClass& cls,
                                                   const BoundaryInclusionMap& inc) {
  std::vector<BoundaryClass> out;
  out.reserve(inc.cusps());
  for (std::size_t i = 0; i < inc.cusps(); ++i) {
    BoundaryClass bc;
    bc.x = -evaluate(cls, inc, i, 0, 1);
    bc.y = evaluate(cls, inc, i, 1, 0);
    bc.gcd = gcd64(bc.x, bc.y);
    out.push_back(bc);
  }
  return out;
}

CompleteSlope SurgeryClassDatum::boundary_slopes() const {
  CompleteSlope s;
  for (const auto& b : boundary) s.emplace_back(b.x, b.y);
  return s;
}

SurgeryClassDatum make_surgery_datum(const CohomologyClass& cls, const BoundaryInclusionMap& inc,
                                     std::int64_t thurston_norm) {
  if (thurston_norm < 0) throw InputError("Thurston norm must be nonnegative");
  SurgeryClassDatum d;
  d.cls = cls;
  d.thurston_norm = thurston_norm;
  d.boundary = boundary_slope_of_class(cls, inc);
  const bool all_primitive =
      std::all_of(d.boundary.begin(), d.boundary.end(), [](const auto& b) { return b.primitive(); });
  d.kind = all_primitive ? SurgeryKind::zero : SurgeryKind::general;
  return d;
}

std::int64_t pairing_with_cores(const SurgeryClassDatum& datum) {
  if (datum.kind != SurgeryKind::zero) {
    throw HypothesisError("pairing with cores is only determined for zero-surgery classes");
  }
  return static_cast<std::int64_t>(datum.boundary.size());
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row[dst] -= f * row[src]
void axpy_row(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t f) {
  for (std::size_t j = 0; j < m.cols(); ++j)
    m(dst, j) = checked_add(m(dst, j), -checked_mul(f, m(src, j)));
}
void axpy_col(IntMatrix& m, std::size_t dst, std::size_t src, std::int64_t f) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    m(i, dst) = checked_add(m(i, dst), -checked_mul(f, m(i, src)));
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& m) {
  const std::size_t r = m.rows();
  const std::size_t c = m.cols();
  IntMatrix D = m;
  IntMatrix U = IntMatrix::identity(r);
  IntMatrix V = IntMatrix::identity(c);
  for (std::size_t t = 0; t < std::min(r, c); ++t) {
    while (true) {
      // Smallest nonzero entry of the trailing block becomes the pivot.
      std::size_t pi = r, pj = c;
      std::int64_t best = 0;
      for (std::size_t i = t; i < r; ++i)
        for (std::size_t j = t; j < c; ++j) {
          const std::int64_t v = D(i, j) < 0 ? -D(i, j) : D(i, j);
          if (v != 0 && (best == 0 || v < best)) {
            best = v;
            pi = i;
            pj = j;
          }
        }
      if (best == 0) return {U, D, V};
      swap_rows(D, t, pi);
      swap_rows(U, t, pi);
      swap_cols(D, t, pj);
      swap_cols(V, t, pj);
      bool clean = true;
      for (std::size_t i = t + 1; i < r; ++i) {
        const std::int64_t f = D(i, t) / D(t, t);
        if (f != 0) {
          axpy_row(D, i, t, f);
          axpy_row(U, i, t, f);
        }
        if (D(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < c; ++j) {
        const std::int64_t f = D(t, j) / D(t, t);
        if (f != 0) {
          axpy_col(D, j, t, f);
          axpy_col(V, j, t, f);
        }
        if (D(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // Divisibility: fold any row whose entries the pivot does not divide.
      std::size_t bad = r;
      for (std::size_t i = t + 1; i < r && bad == r; ++i)
        for (std::size_t j = t + 1; j < c; ++j)
          if (D(i, j) % D(t, t) != 0) {
            bad = i;
            break;
          }
      if (bad == r) break;
      axpy_row(D, t, bad, -1);
      axpy_row(U, t, bad, -1);
    }
    if (D(t, t) < 0) {
      for (std::size_t j = 0; j < c; ++j) D(t, j) = -D(t, j);
      for (std::size_t j = 0; j < r; ++j) U(t, j) = -U(t, j);
    }
  }
  return {U, D, V};
}

std::int64_t ThurstonData::norm_of(const CohomologyClass& cls) const {
  if (auto it = table.find(cls); it != table.end()) return it->second;
  CohomologyClass neg(cls.size());
  std::transform(cls.begin(), cls.end(), neg.begin(), [](std::int64_t v) { return -v; });
  if (auto it = table.find(neg); it != table.end()) return it->second;
  if (!cone) throw InputError("no Thurston norm data for class");
  const auto& g = cone->generators;
  const std::size_t k = g.size();
  if (k == 0 || cone->norms.size() != k) throw InputError("malformed Thurston cone");
  const std::size_t b = cls.size();
  for (const auto& v : g)
    if (v.size() != b) throw InputError("cone generator length does not match class");

  using Q = boost::rational<std::int64_t>;
  auto solve = [&](const CohomologyClass& target) -> std::optional<std::vector<Q>> {
    // Augmented b x (k+1) system sum_i x_i g_i = target.
    std::vector<std::vector<Q>> a(b, std::vector<Q>(k + 1));
    for (std::size_t row = 0; row < b; ++row) {
      for (std::size_t i = 0; i < k; ++i) a[row][i] = g[i][row];
      a[row][k] = target[row];
    }
    std::size_t rank = 0;
    std::vector<std::size_t> pivcol;
    for (std::size_t col = 0; col < k && rank < b; ++col) {
      std::size_t p = rank;
      while (p < b && a[p][col] == Q(0)) ++p;
      if (p == b) continue;
      std::swap(a[p], a[rank]);
      for (std::size_t row = 0; row < b; ++row) {
        if (row == rank || a[row][col] == Q(0)) continue;
        const Q f = a[row][col] / a[rank][col];
        for (std::size_t j = col; j <= k; ++j) a[row][j] -= f * a[rank][j];
      }
      pivcol.push_back(col);
      ++rank;
    }
    if (rank != k) throw InputError("Thurston cone generators are linearly dependent");
    for (std::size_t row = rank; row < b; ++row)
      if (a[row][k] != Q(0)) return std::nullopt;
    std::vector<Q> x(k);
    for (std::size_t i = 0; i < rank; ++i) x[pivcol[i]] = a[i][k] / a[i][pivcol[i]];
    for (const auto& v : x)
      if (v < Q(0)) return std::nullopt;
    return x;
  };
  auto x = solve(cls);
  if (!x) x = solve(neg);
  if (!x) throw InputError("class lies outside the declared Thurston cone");
  Q n(0);
  for (std::size_t i = 0; i < k; ++i) n += (*x)[i] * Q(cone->norms[i]);
  if (n.denominator() != 1) throw InputError("cone interpolation gives a non-integral norm");
  return n.numerator();
}

}  // namespace lamcert
